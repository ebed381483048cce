"""Numerical ground truth for radial problems on the unit ball.

All sources in this package are power-law singular at the origin, so every
integral over (0, 1) is split at ``cfg.split``: the outer panel is integrated
directly and the inner one after the substitution rho = exp(-x), which turns
rho^(-a) singularities into exponentials that adaptive quadrature handles
well.  Divergence is an ordinary result (:data:`DIVERGENT`), never an error.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate

from .exponents import INF, ExtRational, SolutionKind, is_smoothing_admissible, recip, smoothing_gap

DIVERGENT = "divergent"

# Growth levels for the divergence test: the inner panel is integrated up to
# x_split + L * LEVEL_BASE**j for j = 0, 1, 2 with L = ln(1/split).
LEVEL_BASE = 8
GROWTH_FACTOR = 10.0


@dataclass(frozen=True)
class QuadratureConfig:
    tol: float = 1e-9
    max_depth: int = 40
    split: float = 1e-3

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.max_depth < 1:
            raise ValueError("depth must be >= 1")
        if not 0 < self.split < 1:
            raise ValueError("split radius must lie in (0, 1)")

    @classmethod
    def from_env(cls, **overrides) -> "QuadratureConfig":
        """Default config with REGULA_QUAD_TOL applied when set."""
        env = os.environ.get("REGULA_QUAD_TOL")
        if env and "tol" not in overrides:
            overrides["tol"] = float(env)
        return cls(**overrides)

    @property
    def limit(self) -> int:
        # scipy counts subintervals; each refinement level may bisect all of them.
        return max(50, 25 * self.max_depth)


@dataclass(frozen=True)
class RadialFunction:
    """rho -> value on (0, 1].

    ``log_abs`` (optional) evaluates log|f| without overflow near 0;
    ``power_hint`` is the leading power t in |f| ~ C rho^(-t), if known.
    """

    func: Callable[[float], float]
    log_abs: Callable[[float], float] | None = None
    power_hint: float | None = None
    label: str = field(default="", compare=False)

    def __call__(self, rho):
        if np.ndim(rho):
            return np.array([self.func(float(x)) for x in np.asarray(rho).ravel()]).reshape(np.shape(rho))
        return self.func(float(rho))

    def log_abs_at(self, rho: float) -> float:
        if self.log_abs is not None:
            return self.log_abs(rho)
        value = abs(self.func(rho))
        return -math.inf if value == 0 else math.log(value)

    @classmethod
    def constant(cls, c: float) -> "RadialFunction":
        log_c = -math.inf if c == 0 else math.log(abs(c))
        return cls(lambda rho: c, lambda rho: log_c, 0.0, label=f"{c}")

    @classmethod
    def power(cls, coefficient: float, t: float, offset: float = 0.0) -> "RadialFunction":
        """coefficient * rho^(-t) - offset."""
        def log_abs(rho: float) -> float:
            if offset == 0:
                return math.log(abs(coefficient)) - t * math.log(rho)
            lead = math.log(abs(coefficient)) - t * math.log(rho)
            rest = 1 - offset * rho**t / coefficient
            return -math.inf if rest == 0 else lead + math.log(abs(rest))

        return cls(lambda rho: coefficient * rho**(-t) - offset, log_abs, float(t),
                   label=f"{coefficient}*r^-{t}-{offset}")


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (omega_{n-1})."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


# The inner panel stops at rho = e^-X_MAX, below which doubles underflow.
X_MAX = 700.0


def _quad(f, a, b, cfg: QuadratureConfig) -> float:
    value, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=cfg.tol, limit=cfg.limit)
    return value


def _sign(func: Callable[[float], float], rho: float) -> float:
    try:
        return math.copysign(1.0, func(rho))
    except (OverflowError, ZeroDivisionError):
        return 1.0


def _radial_integral(log_integrand: Callable[[float], float], cfg: QuadratureConfig,
                     upper: float = 1.0, sign: Callable[[float], float] | None = None,
                     check: bool = True):
    """Integral over (0, upper) of sign * exp(log_integrand(rho)) d rho.

    ``log_integrand`` includes every factor except d rho.  With ``check``
    the unsigned integral is first tested for divergence: it is evaluated on
    the inner panel up to three growing cutoffs, and a tenfold increase
    between the first and last means DIVERGENT.
    """
    split = min(cfg.split, upper / 2)
    sign = sign or (lambda rho: 1.0)

    def outer(rho: float) -> float:
        return sign(rho) * math.exp(log_integrand(rho))

    def inner_abs(x: float) -> float:
        # rho = e^-x, d rho = e^-x dx
        exponent = log_integrand(math.exp(-x)) - x
        return math.exp(exponent) if exponent < 700 else math.inf

    def inner(x: float) -> float:
        value = inner_abs(x)
        return sign(math.exp(-x)) * value if value else 0.0

    x_split = -math.log(split)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        outer_value = _quad(outer, split, upper, cfg)
        if check:
            span = -math.log(cfg.split)
            levels = []
            for j in range(3):
                top = min(x_split + span * LEVEL_BASE**j, X_MAX)
                try:
                    value = _quad(inner_abs, x_split, top, cfg)
                except (OverflowError, ValueError):
                    return DIVERGENT
                if not math.isfinite(value):
                    return DIVERGENT
                levels.append(value + abs(outer_value))
            if levels[2] > 0 and levels[2] >= GROWTH_FACTOR * levels[0]:
                return DIVERGENT
        tail = _quad(inner, x_split, X_MAX, cfg)
    if not math.isfinite(tail):
        return DIVERGENT
    # Beyond X_MAX the integrand is treated as a pure exponential, which is
    # exact for power-law behavior at the origin.
    end = log_integrand(math.exp(-X_MAX)) - X_MAX
    decay = log_integrand(math.exp(1 - X_MAX)) - (X_MAX - 1) - end
    if decay > 0 and end > -745:
        tail += sign(math.exp(-X_MAX)) * math.exp(end) / decay
    return outer_value + tail


def weighted_norm(f: RadialFunction, k: ExtRational, weight: str = "none", n: int = 3,
                  cfg: QuadratureConfig | None = None):
    """L^k(B_1) norm of a radial function, optionally weighted by 1 - rho.

    Returns a float or :data:`DIVERGENT`.  For k = inf, |f| is sampled on a
    grid reaching rho = 1e-12 and a tenfold growth between 1e-6 and the
    origin end of the grid means DIVERGENT.
    """
    cfg = cfg or QuadratureConfig.from_env()
    if weight not in ("none", "boundary-distance"):
        raise ValueError(f"unknown weight {weight!r}")
    if k is not INF and k < 1:
        raise ValueError("k >= 1 required")
    if k is INF:
        radii = np.concatenate([np.geomspace(1e-12, cfg.split, 25), np.linspace(cfg.split, 1, 200)])
        logs = np.array([f.log_abs_at(float(x)) for x in radii])
        if np.all(np.isneginf(logs)):
            return 0.0
        if f.log_abs_at(1e-12) - f.log_abs_at(1e-6) >= math.log(GROWTH_FACTOR):
            return DIVERGENT
        return float(np.exp(logs.max()))
    kf = float(k)

    def log_integrand(rho: float) -> float:
        la = f.log_abs_at(rho)
        if la == -math.inf:
            return -math.inf
        if weight == "none":
            w = 0.0
        else:
            w = math.log1p(-rho) if rho < 1 else -math.inf
        return kf * la + w + (n - 1) * math.log(rho)

    value = _radial_integral(log_integrand, cfg)
    if value == DIVERGENT:
        return DIVERGENT
    return (sphere_area(n) * value) ** (1 / kf)


def _green(n: int, rho: float, t: float) -> float:
    big = max(rho, t)
    if n == 1:
        return 1 - big
    if n == 2:
        return -math.log(big)
    return (big ** (2 - n) - 1) / (n - 2)


def poisson_solve_radial(n: int, phi: RadialFunction, cfg: QuadratureConfig | None = None) -> RadialFunction:
    """Radial solution of -Delta u = phi on B_1 with u = 0 on the sphere.

    Uses the Green representation u(rho) = int_0^1 G(rho, t) phi(t) t^(n-1) dt,
    which equals the nested form int_rho^1 s^(1-n) int_0^s t^(n-1) phi dt ds
    after exchanging the order of integration.  For t < rho the kernel is
    constant, so u(rho) = G(rho, rho) M(rho) + int_rho^1 G phi t^(n-1) dt with
    M the mass of phi inside radius rho.
    """
    cfg = cfg or QuadratureConfig.from_env()

    def log_mass(t: float) -> float:
        la = phi.log_abs_at(t)
        return la if la == -math.inf else la + (n - 1) * math.log(t)

    if _radial_integral(log_mass, cfg) == DIVERGENT:
        raise ValueError("source not integrable on the ball")

    def phi_sign(t: float) -> float:
        return _sign(phi.func, t)

    def solve(rho: float) -> float:
        if not 0 < rho <= 1:
            raise ValueError("radius must lie in (0, 1]")
        if rho == 1:
            return 0.0
        mass = _radial_integral(log_mass, cfg, upper=rho, sign=phi_sign, check=False)

        def far(x: float) -> float:
            # t = e^-x on (rho, 1)
            t = math.exp(-x)
            return _green(n, rho, t) * phi.func(t) * t ** n

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            outside = _quad(far, 0.0, -math.log(rho), cfg)
        return _green(n, rho, rho) * mass + outside

    return RadialFunction(solve, label=f"poisson({phi.label})")


@dataclass(frozen=True)
class SharpnessReport:
    n: int
    m: ExtRational
    k: ExtRational
    admissible: bool
    theta: Fraction | None
    phi_norm: float | str | None
    u_norm: float | str | None
    ratio: float | None
    poisson_error: float | None
    on_boundary: bool = False

    @property
    def confirmed(self) -> bool:
        # on 1/m - 1/k = gap no power r^-t separates the two classes
        if self.on_boundary:
            return False
        phi_finite = self.phi_norm != DIVERGENT
        if self.admissible:
            return phi_finite and self.u_norm != DIVERGENT
        return phi_finite and self.u_norm == DIVERGENT


def verify_smoothing_sharpness(n: int, m: ExtRational, k: ExtRational,
                               kind: SolutionKind = SolutionKind.L1,
                               cfg: QuadratureConfig | None = None) -> SharpnessReport:
    """Probe the L^m -> L^k smoothing boundary with the power family.

    Admissible pairs use theta just below n/m - 2 (or a constant source when
    that is not positive) and must give a finite ||u||_k; inadmissible pairs
    use the sharp example and must give ||u||_k = divergent.  Exactly on
    the boundary there is no power-family witness; the report says so via
    ``on_boundary`` and is never confirmed.
    """
    from .gallery import scalar_sharp_example

    if kind is not SolutionKind.L1:
        raise ValueError("only the L1 solution class has a power-family probe")
    if n < 3:
        raise ValueError("the power-family probe needs n >= 3")
    cfg = cfg or QuadratureConfig.from_env()
    m, k = Fraction(m) if m is not INF else m, Fraction(k) if k is not INF else k
    admissible = m == k or is_smoothing_admissible(m, k, kind, n)
    if not admissible and recip(m) - recip(k) == smoothing_gap(kind, n):
        return SharpnessReport(n, m, k, False, None, None, None, None, None, on_boundary=True)
    if admissible:
        top = Fraction(n) / m - 2 if m is not INF else Fraction(-2)
        if top > 0:
            theta = top * Fraction(63, 64)
            phi = RadialFunction.power(float(theta * (n - theta - 2)), float(theta + 2))
            u = RadialFunction.power(1.0, float(theta), 1.0)
        else:
            theta = None
            phi = RadialFunction.constant(1.0)
            u = RadialFunction(lambda rho: (1 - rho * rho) / (2 * n), power_hint=0.0)
    else:
        theta, u_pow, phi_pow = scalar_sharp_example(n, m, k)[:3]
        phi, u = phi_pow.to_radial(), u_pow.to_radial()
    phi_norm = weighted_norm(phi, m, "none", n, cfg)
    u_norm = weighted_norm(u, k, "none", n, cfg)
    ratio = None
    if phi_norm != DIVERGENT and u_norm != DIVERGENT and phi_norm > 0:
        ratio = u_norm / phi_norm
    solved = poisson_solve_radial(n, phi, cfg)
    radii = (0.05, 0.25, 0.5, 0.9)
    poisson_error = max(abs(solved(x) - u(x)) / max(1.0, abs(u(x))) for x in radii)
    return SharpnessReport(n, m, k, admissible, theta, phi_norm, u_norm, ratio, poisson_error)
