"""Plan and validate many random certified tuples per case; report failures and timings."""

import argparse
import random
import statistics
import time

from regula import PlanningError, case_of, plan, validate
from regula.sampling import random_certified


def run(case: str | None, count: int, seed: int) -> dict:
    rng = random.Random(seed)
    times, lengths, failures = [], [], []
    for _ in range(count):
        params = random_certified(rng, case)
        start = time.perf_counter()
        try:
            cert = plan(params)
        except PlanningError as exc:
            failures.append((params, str(exc)))
            continue
        times.append(time.perf_counter() - start)
        lengths.append(len(cert.steps))
        report = validate(cert, params)
        if not report.ok or case_of(params) != cert.selected.case:
            failures.append((params, str(report)))
    return {
        "case": case or "any", "seed": seed, "count": count, "failures": failures,
        "mean_ms": 1000 * statistics.fmean(times) if times else float("nan"),
        "max_ms": 1000 * max(times, default=float("nan")),
        "median_steps": statistics.median(lengths) if lengths else 0,
        "max_steps": max(lengths, default=0),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=300, help="tuples per case and seed")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = parser.parse_args()
    print("case  seed  count  fail  mean_ms  max_ms  median_steps  max_steps")
    total = 0
    for seed in args.seeds:
        for case in ("I", "II", "III", None):
            res = run(case, args.count, seed)
            total += len(res["failures"])
            print(f"{res['case']:>4}  {seed:>4}  {res['count']:>5}  {len(res['failures']):>4}"
                  f"  {res['mean_ms']:>7.1f}  {res['max_ms']:>6.0f}  {res['median_steps']:>12}  {res['max_steps']:>9}")
            for params, why in res["failures"][:3]:
                print(f"      {params}: {why}")
    print(f"total failures: {total}")


if __name__ == "__main__":
    main()
