"""Table of exact maximum code sizes against greedy codes and certificate bounds.

Writes CSV: channel,n,greedy,exact,optimal,certificate,seconds.
"""

import argparse
import csv
import sys
import time

from dlbounds.codebounds import certificate_bound, make_weight_scheme
from dlbounds.errorballs import ChannelSpec
from dlbounds.extremal import GreedyOrder, conflict_graph, max_code_exact, max_code_greedy

CASES = {
    "b11": (ChannelSpec.del_trans(1, 1), make_weight_scheme("1d1t")),
    "b12": (ChannelSpec.del_trans(1, 2), make_weight_scheme("1dtt", t=2)),
    "asym110": (ChannelSpec.asymmetric(1, 1, 0), make_weight_scheme("asymmetric", s=1, t_plus=1)),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channels", default="b11,b12,asym110")
    ap.add_argument("--n-max", type=int, default=9)
    ap.add_argument("--budget-seconds", type=float, default=300)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["channel", "n", "greedy", "exact", "optimal", "certificate", "seconds"])
    for name in args.channels.split(","):
        channel, scheme = CASES[name]
        for n in range(2, args.n_max + 1):
            g = conflict_graph(n, 2, channel)
            greedy = max(max_code_greedy(g, o).size for o in GreedyOrder)
            start = time.perf_counter()
            code = max_code_exact(g, time_budget=args.budget_seconds)
            elapsed = time.perf_counter() - start
            cert = certificate_bound(scheme, n, 2)
            out.writerow([name, n, greedy, code.size, str(code.optimal).lower(), f"{float(cert):.4f}", f"{elapsed:.2f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
