"""Compare the smoothing predicate with quadrature over a grid of (m, k) in dimension n."""

import argparse
from fractions import Fraction

from regula import INF, fmt, is_smoothing_admissible
from regula.exponents import SolutionKind
from regula.oracle import verify_smoothing_sharpness


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=3)
    args = parser.parse_args()
    ms = [Fraction(1), Fraction(5, 4), Fraction(3, 2), Fraction(2)]
    ks = [Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(7, 2), Fraction(6), INF]
    print(f"{'m':>4} {'k':>4}  admissible  phi_norm      u_norm        confirmed")
    disagreements = 0
    for m in ms:
        for k in ks:
            if not m < k:
                continue
            rep = verify_smoothing_sharpness(args.n, m, k)
            assert rep.admissible == is_smoothing_admissible(m, k, SolutionKind.L1, args.n)
            disagreements += not (rep.confirmed or rep.on_boundary)
            show = lambda v: "-" if v is None else v if isinstance(v, str) else f"{v:.6g}"  # noqa: E731
            print(f"{fmt(m):>4} {fmt(k):>4}  {str(rep.admissible):>10}  {show(rep.phi_norm):<12}  "
                  f"{show(rep.u_norm):<12}  {'boundary' if rep.on_boundary else rep.confirmed}")
    print(f"unconfirmed cells: {disagreements}")


if __name__ == "__main__":
    main()
