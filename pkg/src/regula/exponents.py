"""Exact exponent algebra for two-component elliptic systems.

Every exponent is an *extended rational*: a :class:`fractions.Fraction` or the
singleton :data:`INF`.  Nothing in this module touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union


class _Infinity:
    """Positive infinity, ordered above every Fraction."""

    __slots__ = ()
    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("regula.INF")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        _check_comparable(other)
        return False

    def __le__(self, other) -> bool:
        _check_comparable(other)
        return other is self

    def __gt__(self, other) -> bool:
        _check_comparable(other)
        return other is not self

    def __ge__(self, other) -> bool:
        _check_comparable(other)
        return True

    def __add__(self, other):
        _check_comparable(other)
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        _check_comparable(other)
        return self

    def __rsub__(self, other):
        raise ArithmeticError("finite - inf is not an extended rational")

    def __mul__(self, other):
        _check_comparable(other)
        if other is self or other > 0:
            return self
        raise ArithmeticError(f"inf * {other} is not a nonnegative extended rational")

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other is self:
            raise ArithmeticError("inf / inf is undefined")
        _check_comparable(other)
        if other > 0:
            return self
        raise ArithmeticError(f"inf / {other} is undefined")

    def __rtruediv__(self, other):
        _check_comparable(other)
        return Fraction(0)


def _check_comparable(other) -> None:
    if other is INF or isinstance(other, (int, Fraction)):
        return
    raise TypeError(f"cannot combine extended rational with {type(other).__name__}")


INF = _Infinity()

ExtRational = Union[Fraction, _Infinity]


def is_inf(x: ExtRational) -> bool:
    return x is INF


def ext(value) -> ExtRational:
    """Coerce ``value`` to an extended rational.

    Accepts ints, Fractions, INF, and strings such as ``"3"``, ``"5/4"``,
    ``"0.25"`` or ``"inf"``.  Floats are rejected on purpose.
    """
    if value is INF:
        return INF
    if isinstance(value, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "∞"):
            return INF
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an extended rational")


def fmt(x: ExtRational) -> str:
    """Canonical text form: ``"inf"``, ``"3"`` or ``"5/4"``."""
    return "inf" if x is INF else str(x)


def recip(x: ExtRational) -> Fraction:
    """1/x with 1/inf = 0.  Raises ZeroDivisionError at 0."""
    if x is INF:
        return Fraction(0)
    if x == 0:
        raise ZeroDivisionError("reciprocal of 0 is not an extended rational")
    return 1 / x


def from_recip(y: Fraction) -> ExtRational:
    """Inverse of :func:`recip` on [0, inf): 0 maps to INF."""
    if y < 0:
        raise ValueError("negative reciprocal")
    return INF if y == 0 else 1 / y


class SolutionKind(enum.Enum):
    H01 = "h01"
    L1 = "l1"
    L1DELTA = "l1delta"

    @classmethod
    def parse(cls, text: str) -> "SolutionKind":
        key = text.strip().lower().replace("_", "").replace("-", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown solution kind {text!r} (expected h01, l1 or l1delta)")


def critical_exponent(kind: SolutionKind, n: int) -> ExtRational:
    """Sobolev, singular and Brezis-Turner exponents for H01, L1 and L1Delta."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if kind is SolutionKind.H01:
        return INF if n <= 2 else Fraction(n + 2, n - 2)
    if kind is SolutionKind.L1:
        return INF if n <= 2 else Fraction(n, n - 2)
    return INF if n <= 1 else Fraction(n + 1, n - 1)


def conjugate_exponent(pc: ExtRational) -> ExtRational:
    """Holder conjugate on (1, inf]; conjugate(inf) = 1."""
    if pc is INF:
        return Fraction(1)
    if pc <= 1:
        raise ValueError(f"conjugate exponent needs p > 1, got {pc}")
    return pc / (pc - 1)


def smoothing_gap(kind: SolutionKind, n: int) -> Fraction:
    """Largest allowed integrability gain 1/m - 1/k of one linear solve (strict)."""
    return 1 - recip(critical_exponent(kind, n))


def is_smoothing_admissible(m: ExtRational, k: ExtRational, kind: SolutionKind, n: int) -> bool:
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > k:
        raise ValueError(f"need m <= k, got m={fmt(m)}, k={fmt(k)}")
    return recip(m) - recip(k) < smoothing_gap(kind, n)


@dataclass(frozen=True)
class SystemParams:
    """Dimension, solution class and growth exponents of the system.

    ``gamma``/``sigma`` below 1 are raised to 1 (``|u|^g <= 1 + |u|``) and the
    adjustment is recorded in ``notes``.
    """

    n: int
    kind: SolutionKind
    r: Fraction
    s: Fraction
    p: Fraction
    q: Fraction
    gamma: Fraction = Fraction(1)
    sigma: Fraction = Fraction(1)
    theta: ExtRational = INF
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self) -> None:
        conv = {name: ext(getattr(self, name)) for name in ("r", "s", "p", "q", "gamma", "sigma", "theta")}
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", SolutionKind.parse(self.kind))
        for name in ("r", "s", "p", "q", "gamma", "sigma"):
            if conv[name] is INF:
                raise ValueError(f"{name} must be finite")
        if conv["r"] < 0 or conv["s"] < 0:
            raise ValueError("r,s>=0 required")
        if conv["p"] <= 0 or conv["q"] <= 0:
            raise ValueError("p,q>0 required")
        if conv["gamma"] < 0 or conv["sigma"] < 0:
            raise ValueError("gamma,sigma>=0 required")
        if conv["theta"] < 1:
            raise ValueError("theta>=1 required")
        notes = list(self.notes)
        for name in ("gamma", "sigma"):
            if conv[name] < 1:
                notes.append(f"{name}={fmt(conv[name])} raised to 1")
                conv[name] = Fraction(1)
        for name, value in conv.items():
            object.__setattr__(self, name, value)
        object.__setattr__(self, "notes", tuple(notes))

    def swapped(self) -> "SystemParams":
        """Exchange the roles of the two equations (p<->q, r<->s, gamma<->sigma)."""
        return SystemParams(
            self.n, self.kind, self.s, self.r, self.q, self.p,
            self.sigma, self.gamma, self.theta, self.notes,
        )

    @property
    def critical(self) -> ExtRational:
        return critical_exponent(self.kind, self.n)

    @property
    def critical_conjugate(self) -> ExtRational:
        return conjugate_exponent(self.critical)

    @property
    def gap(self) -> Fraction:
        return smoothing_gap(self.kind, self.n)


@dataclass(frozen=True)
class ScalingIndices:
    """Scaling exponents (alpha, beta); both None when ``denom`` vanishes."""

    alpha: Fraction | None
    beta: Fraction | None
    denom: Fraction


def scaling_indices(params: SystemParams) -> ScalingIndices:
    r, s, p, q = params.r, params.s, params.p, params.q
    denom = p * q - (1 - r) * (1 - s)
    if denom == 0:
        return ScalingIndices(None, None, denom)
    return ScalingIndices((p + 1 - s) / denom, (q + 1 - r) / denom, denom)
