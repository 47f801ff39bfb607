"""Compare fixed-order ball enumeration with all interleavings of single edits.

Writes CSV: channel,n,centers,differing,fixed_total,interleaved_total.
"""

import argparse
import csv
import itertools
import sys

from dlbounds.errorballs import ChannelSpec, ball_members, interleaved_ball

CHANNELS = {
    "del-trans(1,1)": (ChannelSpec.del_trans(1, 1), 2),
    "del-trans(1,1) q=3": (ChannelSpec.del_trans(1, 1), 3),
    "asymmetric(1,1,1)": (ChannelSpec.asymmetric(1, 1, 1), 2),
    "damerau(1,1,1,0)": (ChannelSpec.damerau(1, 1, 1, 0), 2),
    "damerau(1,0,1,1)": (ChannelSpec.damerau(1, 0, 1, 1), 2),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=6)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["channel", "n", "centers", "differing", "fixed_total", "interleaved_total"])
    for name, (channel, q) in CHANNELS.items():
        for n in range(3, args.n_max + 1):
            centers = differing = fixed_total = inter_total = 0
            for x in itertools.product(range(q), repeat=n):
                a = ball_members(x, channel, q)
                b = interleaved_ball(x, channel, q)
                centers += 1
                differing += a != b
                fixed_total += len(a)
                inter_total += len(b)
            out.writerow([name, n, centers, differing, fixed_total, inter_total])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
