#!/usr/bin/env python3
"""Regenerate logical-error-rate comparison figures from sweep CSV output.

Reads the simulator's CSV (schema: isotope,circuit,d,sigma_b_gauss,
p_scatter,trials,cycles,logical_fail_rate,per_cycle_rate,stderr,
leak_events_mean,seed) and renders a log-log plot of logical failure rate
versus scattering probability per two-qubit gate, one labeled curve per
group, with binomial error bars. No smoothing: every plotted point is a CSV
value.

Styles:
  fig4 - fixed distance, one curve per (isotope, circuit, sigma_b_gauss)
  fig5 - fixed field stability, one curve per (isotope, circuit, d)

Usage: figures/plot.py --csv sweep.csv --style fig4 --out fig4.png
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

REQUIRED = ("isotope", "circuit", "d", "sigma_b_gauss", "p_scatter",
            "logical_fail_rate", "stderr")

STYLE_KEYS = {
    "fig4": ("isotope", "circuit", "sigma_b_gauss"),
    "fig5": ("isotope", "circuit", "d"),
}


@dataclass(frozen=True)
class CurveSpec:
    style: str  # "fig4" | "fig5"
    out_path: str
    x_key: str = "p_scatter"
    y_key: str = "logical_fail_rate"
    err_key: str = "stderr"
    title: str = ""

    @property
    def group_keys(self):
        return STYLE_KEYS[self.style]


def load_rows(csv_path):
    with open(csv_path) as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in REQUIRED:
            if col not in header:
                raise ValueError(f"CSV is missing required column {col!r}")
        rows = list(reader)
    if not rows:
        raise ValueError("CSV has no data rows")
    return rows


def group_rows(rows, spec: CurveSpec):
    """Group key -> sorted (x, y, yerr) triples; keys sorted for a stable
    legend order (sigma or distance ascending)."""
    groups = {}
    for row in rows:
        try:
            key = tuple(row[k] for k in spec.group_keys)
            x = float(row[spec.x_key])
            y = float(row[spec.y_key])
            err = float(row[spec.err_key])
        except KeyError as exc:
            raise ValueError(f"CSV is missing required column {exc}") from exc
        groups.setdefault(key, []).append((x, y, err))

    def sort_key(key):
        iso, circuit, last = key
        return (iso, circuit, float(last))

    return {key: sorted(groups[key]) for key in sorted(groups, key=sort_key)}


def _label(key, spec: CurveSpec) -> str:
    iso, circuit, last = key
    if spec.style == "fig4":
        sigma_ug = float(last) * 1e6
        return f"{iso} ({circuit}), sigma_B = {sigma_ug:g} uG"
    return f"{iso} ({circuit}), d = {int(last)}"


def plot_sweep(csv_path, spec: CurveSpec) -> str:
    """Render the grouped curves; returns the output path."""
    rows = load_rows(csv_path)
    groups = group_rows(rows, spec)
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=150)
    markers = ["o", "s", "^", "v", "D", "P", "X", "*"]
    for i, (key, pts) in enumerate(groups.items()):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        errs = [p[2] for p in pts]
        ax.errorbar(xs, ys, yerr=errs, marker=markers[i % len(markers)],
                    capsize=2.5, linewidth=1.2, markersize=4.5,
                    label=_label(key, spec))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("p per 2-qubit gate")
    ax.set_ylabel("logical error rate")
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_path, metadata={"Software": "iontoric-figures"})
    plt.close(fig)
    return spec.out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True)
    parser.add_argument("--style", choices=sorted(STYLE_KEYS), required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = CurveSpec(style=args.style, out_path=args.out, title=args.title)
    try:
        plot_sweep(args.csv, spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
