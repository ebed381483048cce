"""Verdict map over a (p, q) grid, written as CSV with an ASCII preview.

Codes: 0 certified, 10 singular, 20 boundary, 30 outside scope.
"""

import argparse
import csv
from fractions import Fraction

from regula import SystemParams, classify, ext, fmt

GLYPHS = {0: ".", 10: "#", 20: "+", 30: " "}


def grid(lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    return [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--kind", default="l1delta")
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--r", type=ext, default=Fraction(0))
    parser.add_argument("--s", type=ext, default=Fraction(0))
    parser.add_argument("--theta", type=ext, default=Fraction(3))
    parser.add_argument("--lo", type=ext, default=Fraction(1, 4))
    parser.add_argument("--hi", type=ext, default=Fraction(4))
    parser.add_argument("--count", type=int, default=33)
    parser.add_argument("--out", default="phase_diagram.csv")
    args = parser.parse_args()
    axis = grid(args.lo, args.hi, args.count)
    codes = {}
    for p in axis:
        for q in axis:
            params = SystemParams(args.n, args.kind, args.r, args.s, p, q, theta=args.theta)
            codes[p, q] = classify(params)[0].code
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["p", "q", "verdict"])
        for (p, q), code in codes.items():
            writer.writerow([fmt(p), fmt(q), code])
    print(f"q ^   ({args.kind}, n={args.n}, r={fmt(args.r)}, s={fmt(args.s)}, theta={fmt(args.theta)})")
    for q in reversed(axis):
        print("  |" + "".join(GLYPHS[codes[p, q]] for p in axis))
    print("  +" + "-" * len(axis) + "> p")
    print("  . certified   # singular   + boundary   (blank) outside scope")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
