"""Optimal-condition verdicts for the L-infinity regularity of weak solutions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .exponents import (
    INF,
    ExtRational,
    ScalingIndices,
    SolutionKind,
    SystemParams,
    fmt,
    recip,
    scaling_indices,
)


class Relation(enum.Enum):
    LT = "<"
    GT = ">"
    LE = "<="
    GE = ">="
    EQ = "="

    def holds(self, lhs: ExtRational, rhs: ExtRational) -> bool:
        if self is Relation.LT:
            return lhs < rhs
        if self is Relation.GT:
            return lhs > rhs
        if self is Relation.LE:
            return lhs <= rhs
        if self is Relation.GE:
            return lhs >= rhs
        return lhs == rhs


@dataclass(frozen=True)
class Check:
    name: str
    lhs: ExtRational
    relation: Relation
    rhs: ExtRational
    satisfied: bool
    redundant: bool = False

    @property
    def on_boundary(self) -> bool:
        return self.lhs == self.rhs

    def describe(self) -> str:
        mark = "ok" if self.satisfied else "FAIL"
        return f"{self.name}: {fmt(self.lhs)} {self.relation.value} {fmt(self.rhs)} [{mark}]"


def _check(name: str, lhs, relation: Relation, rhs, redundant: bool = False) -> Check:
    return Check(name, lhs, relation, rhs, relation.holds(lhs, rhs), redundant)


class VerdictTag(enum.Enum):
    REGULARITY_CERTIFIED = 0
    SINGULAR_EXAMPLE_EXISTS = 10
    CRITICAL_BOUNDARY = 20
    OUTSIDE_SCOPE = 30

    @property
    def code(self) -> int:
        return self.value


@dataclass(frozen=True)
class Verdict:
    tag: VerdictTag
    constructible: bool = False
    reason: str = ""

    @property
    def code(self) -> int:
        return self.tag.code

    def __str__(self) -> str:
        if self.tag is VerdictTag.SINGULAR_EXAMPLE_EXISTS:
            return f"SingularExampleExists(constructible={self.constructible})"
        if self.tag is VerdictTag.OUTSIDE_SCOPE:
            return f"OutsideScope({self.reason})"
        if self.tag is VerdictTag.REGULARITY_CERTIFIED:
            return "RegularityCertified"
        return "CriticalBoundary"


@dataclass(frozen=True)
class ConditionReport:
    p_c: ExtRational
    p_c_conj: ExtRational
    indices: ScalingIndices
    checks: tuple[Check, ...] = ()
    redundancy_notes: tuple[str, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# Check names are part of the output schema.
SCALING = "max{alpha,beta} > 1/(p_c-1)"
SCALING_ALT = "pq-(1-r)(1-s) < (p_c-1)max{p+1-s,q+1-r}"
MIN_SUM = "min{p+r,q+s} < p_c"
THETA = "theta > p_c'"


def _dimension_ok(kind: SolutionKind, n: int) -> bool:
    return n >= 2 if kind is SolutionKind.L1DELTA else n >= 3


def classify(params: SystemParams) -> tuple[Verdict, ConditionReport]:
    """Evaluate the one-form optimal conditions and derive a verdict.

    Any check landing exactly on its boundary yields CriticalBoundary.
    """
    pc = params.critical
    pcc = params.critical_conjugate
    idx = scaling_indices(params)
    r, s, p, q = params.r, params.s, params.p, params.q
    inv_pc_minus_1 = recip(pc - 1)
    checks: list[Check] = []
    notes = list(params.notes)

    if idx.denom > 0:
        if idx.alpha <= 0 or idx.beta <= 0:
            report = ConditionReport(pc, pcc, idx, (), (), tuple(notes))
            return Verdict(VerdictTag.OUTSIDE_SCOPE, reason="alpha,beta>0 required"), report
        checks.append(_check(SCALING, max(idx.alpha, idx.beta), Relation.GT, inv_pc_minus_1))
    else:
        top = max(p + 1 - s, q + 1 - r)
        if pc is INF and top <= 0:
            report = ConditionReport(pc, pcc, idx, (), (), tuple(notes))
            reason = "max{p+1-s,q+1-r}<=0 with p_c=inf"
            return Verdict(VerdictTag.OUTSIDE_SCOPE, reason=reason), report
        checks.append(_check(SCALING_ALT, idx.denom, Relation.LT, (pc - 1) * top))

    for name, value in (("r", r), ("s", s), ("gamma", params.gamma), ("sigma", params.sigma)):
        checks.append(_check(f"{name} < p_c", value, Relation.LT, pc))

    redundant = r <= 1 and s <= 1
    redundancy_notes = []
    checks.append(_check(MIN_SUM, min(p + r, q + s), Relation.LT, pc, redundant=redundant))
    if redundant:
        redundancy_notes.append(f"{MIN_SUM} follows from the scaling condition since r,s<=1")
    checks.append(_check(THETA, params.theta, Relation.GT, pcc))

    report = ConditionReport(pc, pcc, idx, tuple(checks), tuple(redundancy_notes), tuple(notes))

    if any(c.on_boundary for c in checks):
        return Verdict(VerdictTag.CRITICAL_BOUNDARY), report
    if all(c.satisfied or c.redundant for c in checks):
        return Verdict(VerdictTag.REGULARITY_CERTIFIED), report
    if idx.denom > 0 and max(idx.alpha, idx.beta) < inv_pc_minus_1 and _dimension_ok(params.kind, params.n):
        constructible = params.kind is not SolutionKind.L1DELTA
        return Verdict(VerdictTag.SINGULAR_EXAMPLE_EXISTS, constructible=constructible), report
    return Verdict(VerdictTag.CRITICAL_BOUNDARY), report


@dataclass(frozen=True)
class Feasibility:
    k_star: ExtRational
    feasible: bool
    swapped: bool


def feasibility_kstar(params: SystemParams) -> Feasibility:
    """Fixed point of the first-equation bootstrap and the second-equation test.

    ``k_star`` solves r/k + p/p_c - 1/k = 1/p_c'.  ``feasible`` is
    q/k_star + s/p_c < 1, where below p = p_c - 1 the signed root of the
    defining equation is used (no finite root exists there, so ``k_star`` is
    reported as inf).  Params are swapped first if q+s < p+r.
    """
    swapped = params.q + params.s < params.p + params.r
    if swapped:
        params = params.swapped()
    r, s, p, q = params.r, params.s, params.p, params.q
    pc = params.critical
    if pc is INF:
        return Feasibility(INF, True, swapped)
    if p + r >= pc:
        raise ValueError("Case III requires p+r < p_c")
    if p > pc - 1:
        if r >= 1:
            raise ValueError("r < 1 required when p > p_c - 1")
        k_star = (1 - r) * pc / (p + 1 - pc)
        return Feasibility(k_star, q / k_star + s / pc < 1, swapped)
    if p == pc - 1 or r >= 1:
        return Feasibility(INF, s / pc < 1, swapped)
    signed_recip = (p + 1 - pc) / (pc * (1 - r))
    return Feasibility(INF, q * signed_recip + s / pc < 1, swapped)
