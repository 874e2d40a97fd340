"""Experiment runner CLI.

Subcommands: run, sweep, describe-channels, dump-layout, decode.
Progress goes to stderr; results go to --out or stdout. Exit code 0 on
success, nonzero with a diagnostic on any validation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace

import numpy as np

from .channels import channel_report
from .config import (ExperimentConfig, _config_from_mapping, load_config,
                     load_sweep)
from .constants import isotope_from_name
from .decoder import (PLAQUETTE, STAR, build_graph, correction_edges,
                      mwpm)
from .engine import run_experiment
from .scattering import profile_report
from .toric import build_layout, dump_layout

# Output schema is stable within a major version; bump only with the format.
CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = ["isotope", "circuit", "d", "sigma_b_gauss", "p_scatter",
               "trials", "cycles", "logical_fail_rate", "per_cycle_rate",
               "stderr", "leak_events_mean", "seed"]


def _row(config: ExperimentConfig, result) -> dict:
    return {
        "isotope": config.isotope.kind,
        "circuit": "lrc" if config.lrc_enabled else "standard",
        "d": config.distance,
        "sigma_b_gauss": repr(config.sigma_b),
        "p_scatter": repr(config.p_scatter),
        "trials": config.trials,
        "cycles": config.cycles,
        "logical_fail_rate": repr(result.logical_fail_rate),
        "per_cycle_rate": repr(result.per_cycle_rate),
        "stderr": repr(result.stderr),
        "leak_events_mean": repr(result.leak_events_mean),
        "seed": config.seed,
    }


def _emit(rows, fmt: str, out_path):
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS,
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _apply_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    updates = {}
    if args.distance is not None:
        updates["distance"] = args.distance
        if args.cycles is None and config.cycles == config.distance:
            updates["cycles"] = args.distance
    if args.cycles is not None:
        updates["cycles"] = args.cycles
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.sigma_b is not None:
        updates["sigma_b"] = args.sigma_b
    if args.p_scatter is not None:
        updates["p_scatter"] = args.p_scatter
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.isotope is not None:
        updates["isotope"] = isotope_from_name(args.isotope)
    if args.lrc is not None:
        updates["lrc_enabled"] = args.lrc
    return replace(config, **updates) if updates else config


def _cmd_run(args) -> int:
    if args.config:
        config = load_config(args.config)
    else:
        mapping = {"distance": args.distance or 3}
        config = _config_from_mapping(mapping, "<flags>")
    config = _apply_overrides(config, args)
    print(f"running 1 point: {config.isotope.kind} d={config.distance} "
          f"sigma_b={config.sigma_b} p={config.p_scatter} "
          f"trials={config.trials}", file=sys.stderr)
    result = run_experiment(config, workers=args.workers)
    _emit([_row(config, result)], args.format, args.out)
    return 0


def _cmd_sweep(args) -> int:
    spec = load_sweep(args.config)
    points = spec.points()
    if args.seed is not None:
        points = [replace(p, seed=args.seed) for p in points]
    rows = []
    for i, point in enumerate(points):
        print(f"[{i + 1}/{len(points)}] {point.isotope.kind} "
              f"{'lrc' if point.lrc_enabled else 'standard'} "
              f"d={point.distance} sigma_b={point.sigma_b} "
              f"p={point.p_scatter}", file=sys.stderr)
        result = run_experiment(point, workers=args.workers)
        rows.append(_row(point, result))
    _emit(rows, args.format, args.out)
    return 0


def _cmd_describe_channels(args) -> int:
    if args.config:
        config = load_config(args.config)
    else:
        config = _config_from_mapping({"distance": 3}, "<defaults>")
    config = _apply_overrides(config, args)
    print(channel_report(config))
    if args.profiles:
        for kind in ("zeeman", "hyperfine"):
            print()
            print(profile_report(kind, tau_2q=config.tau_2q))
    return 0


def _cmd_dump_layout(args) -> int:
    layout = build_layout(args.distance)
    text = dump_layout(layout)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_decode(args) -> int:
    with open(args.graph) as fh:
        lines = [ln.split() for ln in fh if ln.strip()
                 and not ln.startswith("#")]
    if not lines or lines[0][0] != "distance":
        raise ValueError("defect file must start with 'distance <d>'")
    d = int(lines[0][1])
    layout = build_layout(d)
    groups = {STAR: [], PLAQUETTE: []}
    for parts in lines[1:]:
        if len(parts) != 4 or parts[0] not in groups:
            raise ValueError(f"bad defect line: {' '.join(parts)}")
        groups[parts[0]].append([int(parts[1]), int(parts[2]), int(parts[3])])
    for name, defects in groups.items():
        if not defects:
            continue
        graph = build_graph(np.array(defects), d, name)
        matching = mwpm(graph)
        print(f"{name} defects {graph.n} total_weight {matching.total_weight}")
        for i, j in matching.pairs:
            a = tuple(int(v) for v in graph.coords[i])
            b = tuple(int(v) for v in graph.coords[j])
            print(f"  pair {a} {b} weight {int(graph.weights[i, j])}")
        mask = correction_edges(graph, matching, layout)
        print(f"  correction_edges {' '.join(map(str, np.nonzero(mask)[0]))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iontoric",
        description="Toric-code Monte Carlo for trapped-ion qubit encodings")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config: bool):
        p.add_argument("--config", required=needs_config,
                       help="YAML config file")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int)

    p_run = sub.add_parser("run", help="run one experiment point")
    common(p_run, needs_config=False)
    p_run.add_argument("--distance", type=int)
    p_run.add_argument("--cycles", type=int)
    p_run.add_argument("--trials", type=int)
    p_run.add_argument("--sigma-b", type=float, dest="sigma_b")
    p_run.add_argument("--p-scatter", type=float, dest="p_scatter")
    p_run.add_argument("--isotope", choices=("zeeman", "hyperfine"))
    lrc = p_run.add_mutually_exclusive_group()
    lrc.add_argument("--lrc", dest="lrc", action="store_true", default=None)
    lrc.add_argument("--no-lrc", dest="lrc", action="store_false")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a sweep file")
    common(p_sweep, needs_config=True)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_desc = sub.add_parser("describe-channels",
                            help="audit assembled per-gate probabilities")
    p_desc.add_argument("--config")
    p_desc.add_argument("--profiles", action="store_true",
                        help="also dump the shipped scattering geometry")
    p_desc.add_argument("--distance", type=int)
    p_desc.add_argument("--cycles", type=int)
    p_desc.add_argument("--trials", type=int)
    p_desc.add_argument("--sigma-b", type=float, dest="sigma_b")
    p_desc.add_argument("--p-scatter", type=float, dest="p_scatter")
    p_desc.add_argument("--isotope", choices=("zeeman", "hyperfine"))
    p_desc.add_argument("--seed", type=int)
    p_desc.set_defaults(lrc=None, func=_cmd_describe_channels)

    p_dump = sub.add_parser("dump-layout", help="dump lattice and schedules")
    p_dump.add_argument("--distance", type=int, required=True)
    p_dump.add_argument("--out")
    p_dump.set_defaults(func=_cmd_dump_layout)

    p_dec = sub.add_parser("decode", help="match a plain-text defect list")
    p_dec.add_argument("--graph", required=True)
    p_dec.set_defaults(func=_cmd_decode)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, AssertionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
