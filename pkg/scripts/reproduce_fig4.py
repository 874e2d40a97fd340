#!/usr/bin/env python3
"""Run the field-stability sweep and render the fig4-style comparison.

Writes out/fig4.csv and out/fig4.png. Expect ~1 hour at the default 50k
trials/point on a 2-core desktop; pass --trials to scale down.
"""
import argparse
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int)
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--outdir", default=str(ROOT / "out"))
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    config = ROOT / "configs" / "fig4_sweep.yaml"
    if args.trials:
        text = config.read_text().replace("trials: 50000",
                                          f"trials: {args.trials}")
        config = outdir / "fig4_sweep.yaml"
        config.write_text(text)

    csv_path = outdir / "fig4.csv"
    from iontoric.cli import main as iontoric_main
    rc = iontoric_main(["sweep", "--config", str(config), "--out",
                        str(csv_path), "--workers", str(args.workers)])
    if rc != 0:
        return rc
    return subprocess.call([sys.executable, str(ROOT / "figures" / "plot.py"),
                            "--csv", str(csv_path), "--style", "fig4",
                            "--out", str(outdir / "fig4.png")])


if __name__ == "__main__":
    sys.exit(main())
