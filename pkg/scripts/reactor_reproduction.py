"""Verdicts for the reactor system r=1, s=0, p=q=1, theta=3 (L1-delta) across dimensions."""

import argparse

from regula import INF, SystemParams, classify, fmt


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=10)
    args = parser.parse_args()
    print(f"{'n':>3}  {'p_c':>5}  {'1/(p_c-1)':>9}  {'max(a,b)':>8}  verdict")
    for n in range(1, args.n_max + 1):
        params = SystemParams(n, "l1delta", r=1, s=0, p=1, q=1, gamma=1, sigma=1, theta=3)
        verdict, report = classify(params)
        idx = report.indices
        bound = "0" if report.p_c is INF else fmt(1 / (report.p_c - 1))
        print(f"{n:>3}  {fmt(report.p_c):>5}  {bound:>9}  {fmt(max(idx.alpha, idx.beta)):>8}  {verdict}")


if __name__ == "__main__":
    main()
