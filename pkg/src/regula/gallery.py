"""Explicit unbounded radial solutions on the unit ball.

The pair u = c1 (rho^(-2a) - 1), v = c2 (rho^(-2b) - 1) solves the model
system with shifted nonlinearities once c1, c2 satisfy a 2x2 log-linear
system.  Membership thresholds are exact rational comparisons; the
numerical cross-checks go through :mod:`regula.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .exponents import INF, ExtRational, SystemParams, fmt, scaling_indices

SPACES = ("L", "Ldelta", "H01", "Linf")


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class RadialPower:
    """x -> coefficient * |x|^(-power) - offset on B_1."""

    coefficient: float
    power: float
    offset: float = 0.0

    def __call__(self, rho: float) -> float:
        return self.coefficient * rho ** (-self.power) - self.offset

    def derivative(self, rho: float) -> float:
        return -self.power * self.coefficient * rho ** (-self.power - 1)

    def second_derivative(self, rho: float) -> float:
        t = self.power
        return t * (t + 1) * self.coefficient * rho ** (-t - 2)

    def minus_laplacian(self, rho: float, n: int) -> float:
        """-(f'' + (n-1)/rho f'), equal to c t (n-2-t) rho^(-t-2)."""
        return -(self.second_derivative(rho) + (n - 1) / rho * self.derivative(rho))

    def gradient_norm(self) -> "RadialPower":
        """|f'| as a radial power."""
        return RadialPower(abs(self.power * self.coefficient), self.power + 1)

    def to_radial(self) -> oracle.RadialFunction:
        return oracle.RadialFunction.power(self.coefficient, self.power, self.offset)


@dataclass(frozen=True)
class SingularPair:
    params: SystemParams
    u: RadialPower
    v: RadialPower
    coefficients: tuple[float, float]
    rhs_constants: tuple[float, float]
    alpha: Fraction
    beta: Fraction

    def rhs(self, rho: float) -> tuple[float, float]:
        """(u+c1)^r (v+c2)^p and (u+c1)^q (v+c2)^s at rho."""
        c1, c2 = self.coefficients
        a, b = self.u(rho) + c1, self.v(rho) + c2
        p = self.params
        return a ** float(p.r) * b ** float(p.p), a ** float(p.q) * b ** float(p.s)

    def sources(self) -> tuple[RadialPower, RadialPower]:
        """-Delta u and -Delta v as radial powers."""
        n = self.params.n
        out = []
        for w in (self.u, self.v):
            t = w.power
            out.append(RadialPower(w.coefficient * t * (n - 2 - t), t + 2))
        return out[0], out[1]


def _pair_indices(params: SystemParams) -> tuple[Fraction, Fraction]:
    idx = scaling_indices(params)
    if idx.denom == 0:
        raise ConstructionError("pq = (1-r)(1-s): the log-linear system is singular")
    if params.n < 3:
        raise ConstructionError("construction requires n >= 3")
    half = Fraction(params.n - 2, 2)
    if not (0 < idx.alpha < half and 0 < idx.beta < half):
        raise ConstructionError("construction requires alpha,beta < (n-2)/2")
    return idx.alpha, idx.beta


def solve_coefficients(params: SystemParams) -> tuple[float, float]:
    """Positive c1, c2 with c1^(r-1) c2^p = A and c1^q c2^(s-1) = B."""
    alpha, beta = _pair_indices(params)
    n = params.n
    big_a = 2 * alpha * (n - 2 - 2 * alpha)
    big_b = 2 * beta * (n - 2 - 2 * beta)
    r, s, p, q = (float(x) for x in (params.r, params.s, params.p, params.q))
    la, lb = math.log(big_a), math.log(big_b)
    det = (r - 1) * (s - 1) - p * q
    log_c1 = (la * (s - 1) - p * lb) / det
    log_c2 = ((r - 1) * lb - q * la) / det
    return math.exp(log_c1), math.exp(log_c2)


def build_pair(params: SystemParams) -> SingularPair:
    alpha, beta = _pair_indices(params)
    c1, c2 = solve_coefficients(params)
    n = params.n
    rhs = (float(2 * alpha * (n - 2 - 2 * alpha)), float(2 * beta * (n - 2 - 2 * beta)))
    u = RadialPower(c1, float(2 * alpha), c1)
    v = RadialPower(c2, float(2 * beta), c2)
    return SingularPair(params, u, v, (c1, c2), rhs, alpha, beta)


def residual(pair: SingularPair, radii) -> float:
    """Max relative mismatch of both equations over ``radii`` in (0, 1)."""
    n = pair.params.n
    worst = 0.0
    for rho in radii:
        if not 0 < rho < 1:
            raise ValueError("radii must lie in (0, 1)")
        f, g = pair.rhs(rho)
        for lhs, rhs in ((pair.u.minus_laplacian(rho, n), f), (pair.v.minus_laplacian(rho, n), g)):
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


@dataclass(frozen=True)
class MembershipEntry:
    function: str
    space: str
    k: ExtRational | None
    analytic: bool
    threshold: str
    quadrature: bool | None = None
    value: float | None = None

    @property
    def agrees(self) -> bool:
        return self.quadrature is None or self.quadrature == self.analytic


@dataclass(frozen=True)
class MembershipReport:
    entries: tuple[MembershipEntry, ...]

    def lookup(self, function: str, space: str, k: ExtRational | None = None) -> MembershipEntry:
        for e in self.entries:
            if e.function == function and e.space == space and e.k == k:
                return e
        raise KeyError((function, space, k))

    def holds(self, function: str, space: str, k: ExtRational | None = None) -> bool:
        return self.lookup(function, space, k).analytic

    @property
    def consistent(self) -> bool:
        return all(e.agrees for e in self.entries)


# Quadrature verdicts are only compared when the exact margin to the
# threshold is at least this fraction of it.
CROSSCHECK_MARGIN = Fraction(2, 100)


def _entry(name: str, power: Fraction, w: RadialPower, space: str, k, n: int,
           cfg: oracle.QuadratureConfig, crosscheck: bool) -> MembershipEntry:
    if space in ("L", "Ldelta"):
        if k is None or k < 1:
            raise ValueError("k >= 1 required for Lebesgue spaces")
        if k is INF:
            space = "Linf"
    if space == "Linf":
        analytic = power <= 0
        threshold = f"bounded iff t <= 0 (t={fmt(power)})"
        limit, measured = Fraction(0), power
        target, kq, weight = w, INF, "none"
    elif space == "H01":
        limit, measured = Fraction(n - 2, 2), power
        analytic = power < limit
        threshold = f"gradient in L2 iff t < (n-2)/2: {fmt(power)} < {fmt(limit)}"
        target, kq, weight = w.gradient_norm(), Fraction(2), "none"
    else:
        limit, measured = Fraction(n), power * k
        analytic = measured < limit
        threshold = f"t*k < n: {fmt(measured)} < {n}"
        target, kq = w, k
        weight = "none" if space == "L" else "boundary-distance"
    quad, value = None, None
    far_enough = limit == 0 or abs(measured - limit) >= CROSSCHECK_MARGIN * abs(limit)
    if crosscheck and far_enough and space != "Linf":
        norm = oracle.weighted_norm(target.to_radial(), kq, weight, n, cfg)
        quad = norm != oracle.DIVERGENT
        value = norm if quad else None
    elif crosscheck and space == "Linf":
        quad = oracle.weighted_norm(target.to_radial(), INF, "none", n, cfg) != oracle.DIVERGENT
    return MembershipEntry(name, space, k if space in ("L", "Ldelta") else None,
                           analytic, threshold, quad, value)


def membership(pair: SingularPair, queries=(("H01", None), ("Linf", None)),
               crosscheck: bool = True, cfg: oracle.QuadratureConfig | None = None) -> MembershipReport:
    """Space memberships of u, v and of the right-hand sides f, g.

    ``queries`` are (space, k) with space in L, Ldelta, H01, Linf.  The
    sources are always tested in L^1 and in L^(2n/(n+2)), the latter being a
    sufficient condition for the dual of H^1_0.
    """
    cfg = cfg or oracle.QuadratureConfig.from_env()
    n = pair.params.n
    entries = []
    for space, k in queries:
        if space not in SPACES:
            raise ValueError(f"unknown space {space!r}")
        k = None if k is None else (INF if k is INF else Fraction(k))
        if k is not None and k is not INF and k < 1:
            raise ValueError("queried k must be >= 1")
        for name, w, index in (("u", pair.u, pair.alpha), ("v", pair.v, pair.beta)):
            entries.append(_entry(name, 2 * index, w, space, k, n, cfg, crosscheck))
    dual = Fraction(2 * n, n + 2)
    f, g = pair.sources()
    for name, w, index in (("f", f, pair.alpha), ("g", g, pair.beta)):
        for k in (Fraction(1), dual):
            entries.append(_entry(name, 2 * index + 2, w, "L", k, n, cfg, crosscheck))
    return MembershipReport(tuple(entries))


@dataclass(frozen=True)
class SharpExampleReport:
    theta: Fraction
    phi_in_Lm: bool
    u_in_Lk: bool
    phi_norm: float | str
    u_norm: float | str


def scalar_sharp_example(n: int, m: ExtRational, k: ExtRational, crosscheck: bool = True,
                         cfg: oracle.QuadratureConfig | None = None):
    """Return (theta, U, phi, report) with -Delta U = phi, phi in L^m, U not in L^k.

    Requires 1/m - 1/k > 2/n.  theta is the midpoint of (n/k, n/m - 2).
    """
    m = INF if m is INF else Fraction(m)
    k = INF if k is INF else Fraction(k)
    if m is INF or m < 1 or not m < k:
        raise ValueError("need 1 <= m < k <= inf")
    inv_k = Fraction(0) if k is INF else 1 / k
    if not 1 / m - inv_k > Fraction(2, n):
        raise ValueError("example exists only beyond the smoothing boundary")
    theta = (n * inv_k + Fraction(n) / m - 2) / 2
    u = RadialPower(1.0, float(theta), 1.0)
    phi = RadialPower(float(theta * (n - theta - 2)), float(theta + 2))
    phi_in = (theta + 2) * m < n
    u_in = k is not INF and theta * k < n
    phi_norm = u_norm = None
    if crosscheck:
        phi_norm = oracle.weighted_norm(phi.to_radial(), m, "none", n, cfg)
        u_norm = oracle.weighted_norm(u.to_radial(), k, "none", n, cfg)
    return theta, u, phi, SharpExampleReport(theta, phi_in, u_in, phi_norm, u_norm)
