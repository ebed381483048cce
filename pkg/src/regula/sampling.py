"""Random rational parameter tuples for property tests and sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .classifier import VerdictTag, classify
from .exponents import INF, SolutionKind, SystemParams

KINDS = tuple(SolutionKind)


def rational(rng: random.Random, lo: Fraction, hi: Fraction, max_den: int = 12) -> Fraction:
    """Rational in the open interval (lo, hi) with denominator at most ``max_den``.

    Falls back to the midpoint when the grid misses the interval.
    """
    den = rng.randint(1, max_den)
    lo_num = (lo * den).__floor__() + 1
    hi_num = (hi * den).__ceil__() - 1
    if lo_num > hi_num:
        return (lo + hi) / 2
    return Fraction(rng.randint(lo_num, hi_num), den)


def random_params(rng: random.Random, n_max: int = 8, bound: int = 6, max_den: int = 12) -> SystemParams:
    """Unconstrained tuple; r and s are zero with positive probability."""
    n = rng.randint(1, n_max)
    kind = rng.choice(KINDS)
    draw = lambda lo, hi: rational(rng, Fraction(lo), Fraction(hi), max_den)  # noqa: E731
    theta = INF if rng.random() < 0.25 else draw(1, 2 * bound)
    return SystemParams(
        n, kind,
        r=max(Fraction(0), draw(-1, bound)),
        s=max(Fraction(0), draw(-1, bound)),
        p=draw(0, bound), q=draw(0, bound),
        gamma=draw(0, bound), sigma=draw(0, bound), theta=theta,
    )


def _finite_critical(rng: random.Random, n_max: int):
    while True:
        n = rng.randint(1, n_max)
        kind = rng.choice(KINDS)
        params = SystemParams(n, kind, 0, 0, 1, 1)
        if params.critical is not INF:
            return n, kind, params.critical, params.critical_conjugate


def _in_case(rng: random.Random, case: str, n_max: int, max_den: int) -> SystemParams:
    """One draw aimed at ``case`` in WLOG coordinates (q+s >= p+r), possibly swapped."""
    n, kind, pc, pcc = _finite_critical(rng, n_max)
    draw = lambda lo, hi: rational(rng, Fraction(lo), Fraction(hi), max_den)  # noqa: E731
    if case == "II":
        p = pc - 1
    elif case == "III":
        p = draw(pc - 1, pc)
    else:
        p = draw(0, pc - 1)
    r = Fraction(0) if rng.random() < 0.4 else draw(0, min(Fraction(1), pc - p))
    s = Fraction(0) if rng.random() < 0.4 else draw(0, pc)
    q = draw(max(Fraction(0), p + r - s), 3 * pc)
    gamma = Fraction(1) if rng.random() < 0.5 else draw(0, pc)
    sigma = Fraction(1) if rng.random() < 0.5 else draw(0, pc)
    theta = INF if rng.random() < 0.3 else draw(pcc, 4 * pcc)
    params = SystemParams(n, kind, r, s, p, q, gamma, sigma, theta)
    return params.swapped() if rng.random() < 0.5 else params


def random_certified(rng: random.Random, case: str | None = None, n_max: int = 8,
                     max_den: int = 12, max_tries: int = 100_000) -> SystemParams:
    """Rejection-sample a RegularityCertified tuple, optionally in a given case."""
    from .bootstrap import case_of

    for _ in range(max_tries):
        if case is None or case == "I" and rng.random() < 0.3:
            params = random_params(rng, n_max=n_max, max_den=max_den)
        else:
            params = _in_case(rng, case, n_max, max_den)
        verdict, _ = classify(params)
        if verdict.tag is not VerdictTag.REGULARITY_CERTIFIED:
            continue
        if case is None or case_of(params) == case:
            return params
    raise RuntimeError(f"no certified tuple for case {case} after {max_tries} draws")


def random_feasibility_domain(rng: random.Random, n_max: int = 8, max_den: int = 12) -> SystemParams:
    """Tuple with finite p_c, q+s >= p+r, p+r < p_c, r < 1 and pq > (1-r)(1-s)."""
    draw = lambda lo, hi: rational(rng, Fraction(lo), Fraction(hi), max_den)  # noqa: E731
    while True:
        n, kind, pc, _ = _finite_critical(rng, n_max)
        r = Fraction(0) if rng.random() < 0.3 else draw(0, 1)
        p = draw(0, pc - r)
        s = Fraction(0) if rng.random() < 0.3 else draw(0, 4)
        q = draw(max(Fraction(0), p + r - s), 8)
        if q + s < p + r or p * q <= (1 - r) * (1 - s):
            continue
        return SystemParams(n, kind, r, s, p, q)
