"""Sweep the asymptotic bounds over n and report redundancy and coefficient ratios.

Writes CSV: theorem,u,n,valid,threshold_n,redundancy_lo,redundancy_hi,lower_2log2n_minus_c.
With --ratios it instead prints the main-coefficient ratios across u.
"""

import argparse
import csv
import math
import sys
from fractions import Fraction

from dlbounds.codebounds import (
    BoundParams,
    main_coefficient_1d1t,
    main_coefficient_1dtt,
    main_coefficient_sdtt,
    redundancy_lower,
    theorem_bound,
)


def sweep(args: argparse.Namespace) -> None:
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["theorem", "u", "n", "valid", "threshold_n", "redundancy_lo", "redundancy_hi", "lower_2log2n_minus_c"])
    for theorem, u in ((19, 4), (19, 10), (20, 12), (21, 7), (21, 20)):
        params = BoundParams(theorem, s=1, t=1, u=u, eps=Fraction(args.eps))
        c = math.log2(float((1 + params.eps) * params.main_coefficient()))
        for e in range(1, args.max_exp + 1):
            for n in (10**e, 3 * 10**e):
                if n < params.min_n():
                    continue
                bv = theorem_bound(params, n)
                red = redundancy_lower(2, n, bv)
                out.writerow([theorem, u, n, str(bv.valid).lower(), bv.threshold_n, f"{red.lo:.6f}", f"{red.hi:.6f}", f"{2 * math.log2(n) - c:.6f}"])


def ratios(args: argparse.Namespace) -> None:
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["u", "t20_over_t19", "t21_over_t20"])
    for u in range(args.u_min, args.u_max + 1):
        a = main_coefficient_1d1t(2, u)
        b = main_coefficient_1dtt(2, 1, u)
        c = main_coefficient_sdtt(2, 1, 1, u)
        out.writerow([u, f"{float(b / a):.6f}", f"{float(c / b):.6f}"])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", default="1/2")
    ap.add_argument("--max-exp", type=int, default=6)
    ap.add_argument("--ratios", action="store_true")
    ap.add_argument("--u-min", type=int, default=20)
    ap.add_argument("--u-max", type=int, default=40)
    args = ap.parse_args()
    ratios(args) if args.ratios else sweep(args)


if __name__ == "__main__":
    main()
