"""Print the worked B11 example: ball, run statistics, closed form and bounds."""

import argparse

from dlbounds.ballmath import b11_size, b11_size_exact, b11_size_lower
from dlbounds.errorballs import del_trans_ball
from dlbounds.seqcore import format_sequence, parse_sequence, run_stats


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", default="0201001")
    ap.add_argument("--q", type=int, default=3)
    args = ap.parse_args()

    x = parse_sequence(args.x, args.q)
    ball = del_trans_ball(x, 1, 1, q=args.q)
    st = run_stats(x)
    print(f"x = {args.x}, q = {args.q}")
    for k, v in st.as_dict().items():
        print(f"  {k:10s} {v}")
    print(f"enumerated size  {ball.size}")
    print(f"closed form      {b11_size_exact(st)}")
    print(f"corrected form   {b11_size(st)}")
    if args.q == 2:
        print(f"lower bound      {b11_size_lower(st)}")
    print(f"upper bound r^2  {st.r ** 2}")
    print("members:", " ".join(format_sequence(y, args.q) for y in sorted(ball.as_set())))


if __name__ == "__main__":
    main()
