"""Print T_irr against dephasing strength for several chain lengths.

Shows where stronger dephasing stops shortening T_irr: near xi = 1 the
blocks lose all coherence, the excitation performs a classical random walk,
and the approach to 1/N slows down again as N grows.

    python scripts/tirr_vs_noise.py --n 8 16 32 --t-max 4000
"""

import argparse
import math

from noisyqca import AutomatonConfig, irreversibility_time

XIS = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--pq", type=float, default=0.5, help="p = q (no damping)")
    ap.add_argument("--phase-sum", type=float, default=0.0, help="phi1 + phi2 (put on phi2)")
    ap.add_argument("--t-max", type=int, default=4000)
    args = ap.parse_args()

    print("xi    " + "".join(f"N={n:<8d}" for n in args.n))
    for xi in XIS:
        row = []
        for n in args.n:
            cfg = AutomatonConfig.coupled(n, args.pq, args.pq, 0.0, args.phase_sum, xi=xi)
            t = irreversibility_time(cfg, t_max=args.t_max)
            row.append("-" if t is None else str(t))
        print(f"{xi:<6g}" + "".join(f"{v:<10s}" for v in row))


if __name__ == "__main__":
    main()
