"""Regenerate the figure data (P1 curves and T_irr sweeps) as CSV files.

    python scripts/reproduce_figures.py --out results --jobs 4
"""

import argparse
from pathlib import Path

from noisyqca.harness import build_spec, read_config_file, run

RUNS = Path(__file__).parent / "runs"

JOBS = [
    ("curve", "curves_dephasing.ini", "fig1_dephasing_curves.csv"),
    ("tirr-sweep", "tirr_dephasing.ini", "fig2_tirr_sweep.csv"),
    ("curve", "curves_damping.ini", "fig3_damping_curves.csv"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--jobs", default="1")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for command, run_file, csv_name in JOBS:
        raw = read_config_file(str(RUNS / run_file))
        raw.update(out=str(out / csv_name), jobs=args.jobs)
        status = run(build_spec(command, raw))
        if status:
            raise SystemExit(status)


if __name__ == "__main__":
    main()
