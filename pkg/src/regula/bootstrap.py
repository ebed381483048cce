"""Bootstrap certificates: finite chains of norm-improvement steps.

A certificate starts from bounds |u|_k, |v|_k for base exponents k < p_c and
applies one linear smoothing estimate per step.  Each step bounds the right
hand side of one equation by Holder's inequality,

    first equation:  1/rho = r/u_exp + p/v_exp,   varrho = u_exp/gamma
    second equation: 1/rho = q/u_exp + s/v_exp,   varrho = v_exp/sigma

takes the source exponent h = min(rho, varrho, theta) and gains at most the
smoothing gap: 1/h - 1/result < 1/p_c'.  A result of inf needs h > p_c'.

The planner follows the case split on p against p_c - 1 (after exchanging the
equations so that q+s >= p+r) and picks its free parameters by deterministic
halving searches; every candidate chain is checked step by step with the same
routine the validator uses, so an emitted certificate is valid by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classifier import VerdictTag, classify, feasibility_kstar
from .exponents import INF, ExtRational, SystemParams, fmt, recip

FIRST = "first"
SECOND = "second"

MAX_ROUNDS = 64
MAX_CHAIN = 2000
K1_CAP = Fraction(10**6)


@dataclass(frozen=True)
class Step:
    equation: str
    target: str
    u_exp: ExtRational
    v_exp: ExtRational
    holder_exp: ExtRational
    pure_exp: ExtRational
    h_cap: ExtRational
    result_exp: ExtRational
    margin: Fraction


@dataclass(frozen=True)
class SelectedParameters:
    case: str
    swapped: bool
    k: Fraction
    k1: ExtRational | None = None
    epsilon: Fraction | None = None
    tau: Fraction | None = None
    eta: Fraction | None = None
    target: ExtRational | None = None


@dataclass(frozen=True)
class Certificate:
    params: SystemParams
    selected: SelectedParameters
    base: tuple[tuple[str, Fraction], ...]
    steps: tuple[Step, ...]

    def working_params(self) -> SystemParams:
        return self.params.swapped() if self.selected.swapped else self.params


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    step: int | None = None
    violation: str = ""

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        where = "certificate" if self.step is None else f"step {self.step}"
        return f"invalid at {where}: {self.violation}"


class PlanningError(RuntimeError):
    pass


class _Reject(Exception):
    """A candidate parameter choice produced an invalid step."""


class _Stalled(_Reject):
    """A chain ran out of steps; finer parameters would only lengthen it."""


def _coefficients(work: SystemParams, equation: str):
    """(self coefficient, other coefficient, pure exponent, target) of one equation."""
    if equation == FIRST:
        return work.r, work.p, work.gamma, "u"
    if equation == SECOND:
        return work.s, work.q, work.sigma, "v"
    raise ValueError(f"unknown equation {equation!r}")


def source_exponents(work: SystemParams, equation: str, u_exp: ExtRational, v_exp: ExtRational):
    """Return (1/rho, rho, varrho, h) for one equation at the given norms."""
    a, b, pure, target = _coefficients(work, equation)
    own, other = (u_exp, v_exp) if target == "u" else (v_exp, u_exp)
    inv_rho = a * recip(own) + b * recip(other)
    rho = INF if inv_rho == 0 else 1 / inv_rho
    varrho = own / pure
    return inv_rho, rho, varrho, min(rho, varrho, work.theta)


def derive_step(work: SystemParams, equation: str, u_exp, v_exp, result_exp) -> Step:
    """Fill in every derived field of a step (no validity check)."""
    _, rho, varrho, h = source_exponents(work, equation, u_exp, v_exp)
    margin = work.gap - (recip(h) - recip(result_exp))
    target = "u" if equation == FIRST else "v"
    return Step(equation, target, u_exp, v_exp, rho, varrho, h, result_exp, margin)


def check_step(work: SystemParams, step: Step, strict: bool = False) -> str | None:
    """Return a description of the first violated inequality, or None."""
    if step.equation not in (FIRST, SECOND):
        return f"unknown equation {step.equation!r}"
    expected_target = "u" if step.equation == FIRST else "v"
    if step.target != expected_target:
        return f"{step.equation} equation bootstraps {expected_target}, not {step.target}"
    for name in ("u_exp", "v_exp", "result_exp"):
        if getattr(step, name) < 1:
            return f"{name}={fmt(getattr(step, name))} below 1"
    inv_rho, rho, varrho, h = source_exponents(work, step.equation, step.u_exp, step.v_exp)
    if inv_rho > 1 or (strict and inv_rho >= 1):
        rel = ">=" if strict else ">"
        return f"Holder combination 1/rho={fmt(inv_rho)} {rel} 1"
    if varrho < 1:
        return f"pure term exponent {fmt(varrho)} below 1"
    if step.holder_exp != rho:
        return f"holder_exp {fmt(step.holder_exp)} != recomputed {fmt(rho)}"
    if step.pure_exp != varrho:
        return f"pure_exp {fmt(step.pure_exp)} != recomputed {fmt(varrho)}"
    if step.h_cap != h:
        return f"h_cap {fmt(step.h_cap)} != min(rho, varrho, theta) = {fmt(h)}"
    if h > work.theta:
        return f"h_cap {fmt(h)} exceeds theta {fmt(work.theta)}"
    pcc = work.critical_conjugate
    if step.result_exp is INF and not h > pcc:
        return f"sup-norm step needs h_cap > p_c' but {fmt(h)} <= {fmt(pcc)}"
    gain = recip(h) - recip(step.result_exp)
    margin = work.gap - gain
    if margin <= 0:
        return f"smoothing gain 1/{fmt(h)} - 1/{fmt(step.result_exp)} = {fmt(gain)} >= gap {fmt(work.gap)}"
    if step.margin != margin:
        return f"margin {fmt(step.margin)} != recomputed {fmt(margin)}"
    return None


def validate(cert: Certificate, params: SystemParams, strict: bool = False) -> ValidationReport:
    """Re-derive every inequality of ``cert`` in exact arithmetic."""
    if cert.params != params:
        return ValidationReport(False, None, "certificate was issued for different parameters")
    work = cert.working_params()
    pc = work.critical
    known = {"u": None, "v": None}
    for function, exponent in cert.base:
        if function not in known:
            return ValidationReport(False, None, f"unknown base function {function!r}")
        if exponent is INF or exponent < 1 or not exponent < pc:
            return ValidationReport(False, None, f"base exponent {fmt(exponent)} for {function} outside [1, p_c)")
        if known[function] is None or exponent > known[function]:
            known[function] = exponent
    for i, step in enumerate(cert.steps):
        for function, used in (("u", step.u_exp), ("v", step.v_exp)):
            if known[function] is None or used > known[function]:
                return ValidationReport(False, i, f"uses |{function}|_{fmt(used)} before it is established")
        problem = check_step(work, step, strict)
        if problem is not None:
            return ValidationReport(False, i, problem)
        if step.result_exp > known[step.target]:
            known[step.target] = step.result_exp
    for function in ("u", "v"):
        if known[function] is not INF:
            return ValidationReport(False, None, f"{function} never reaches the sup norm")
    return ValidationReport(True)


# --- exact helpers -------------------------------------------------------

def midpoint(a: Fraction, b: ExtRational) -> Fraction:
    """Midpoint of (a, b); for b = inf the point a + 1."""
    return a + 1 if b is INF else (a + b) / 2


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the open interval (lo, hi), lo >= 0."""
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    whole = math.floor(lo)
    if whole + 1 < hi:
        return Fraction(whole + 1)
    if lo == whole:
        return whole + 1 / Fraction(math.floor(1 / (hi - whole)) + 1)
    return whole + 1 / simplest_between(1 / (hi - whole), 1 / (lo - whole))


def _advance(current: Fraction, ideal: Fraction) -> Fraction:
    """Simplest rational in the top quarter of (current, ideal).

    Exact geometric or contracting recursions square their denominators every
    few steps; stepping slightly short of the ideal exponent keeps every
    step at least as easy to justify and the numbers small.
    """
    return simplest_between(current + 3 * (ideal - current) / 4, ideal)


def _threshold(work: SystemParams, equation: str, other: ExtRational) -> ExtRational:
    """Own exponent beyond which h_cap > p_c' with the other norm frozen."""
    a, b, pure, _ = _coefficients(work, equation)
    room = work.gap - b * recip(other)
    if room <= 0:
        return INF
    bound = pure * work.critical_conjugate
    return max(bound, a / room) if a > 0 else bound


def _epsilon_start(work: SystemParams, equation: str, start: Fraction, other: ExtRational) -> Fraction:
    """Initial arithmetic increment: half the room below p_c, or a
    sixteenth of the distance to the threshold when that is larger."""
    pc = work.critical
    eps = start if pc is INF else (pc - start) / 2
    far = _threshold(work, equation, other)
    if far is not INF and far > start:
        eps = max(eps, (far - start) / 16)
    return eps


# --- chain construction ----------------------------------------------------

class _Chain:
    def __init__(self, work: SystemParams, base: dict[str, Fraction]):
        self.work = work
        self.known = dict(base)
        self.steps: list[Step] = []

    def copy(self) -> "_Chain":
        other = _Chain(self.work, self.known)
        other.steps = list(self.steps)
        return other

    def emit(self, equation: str, u_exp, v_exp, result) -> Step:
        if len(self.steps) >= 8 * MAX_CHAIN:
            raise _Stalled("chain too long")
        step = derive_step(self.work, equation, u_exp, v_exp, result)
        problem = check_step(self.work, step)
        if problem is not None:
            raise _Reject(problem)
        self.steps.append(step)
        if result > self.known[step.target]:
            self.known[step.target] = result
        return step

    def h(self, equation: str, u_exp, v_exp):
        inv_rho, _, varrho, h = source_exponents(self.work, equation, u_exp, v_exp)
        if inv_rho > 1 or varrho < 1:
            raise _Reject("Holder exponents out of range")
        return h


def _pair(target: str, own, other):
    return (own, other) if target == "u" else (other, own)


def _finish(chain: _Chain, equation: str, start: ExtRational, other: ExtRational) -> None:
    """Scalar bootstrap of one equation with the other norm frozen.

    Each result is the simplest rational (in reciprocal scale) inside the
    middle half of the admissible interval.
    """
    work = chain.work
    target = "u" if equation == FIRST else "v"
    current = start
    for _ in range(MAX_CHAIN):
        u_exp, v_exp = _pair(target, current, other)
        h = chain.h(equation, u_exp, v_exp)
        if h > work.critical_conjugate:
            chain.emit(equation, u_exp, v_exp, INF)
            return
        lo, hi = recip(h) - work.gap, recip(current)
        if lo >= hi:
            raise _Reject(f"scalar bootstrap of {target} stalls at {fmt(current)}")
        quarter = (hi - lo) / 4
        current = 1 / simplest_between(lo + quarter, hi - quarter)
        chain.emit(equation, u_exp, v_exp, current)
    raise _Stalled("scalar bootstrap did not terminate")


def _single_equation(chain: _Chain, equation: str, start: Fraction, other: ExtRational,
                     epsilon: Fraction | None = None, eta: Fraction | None = None) -> ExtRational:
    """Bootstrap one equation with the other norm frozen until the sup norm.

    Arithmetic exponents start + m*epsilon, or geometric eta**m * start.
    """
    target = "u" if equation == FIRST else "v"
    current = start
    for _ in range(MAX_CHAIN):
        u_exp, v_exp = _pair(target, current, other)
        h = chain.h(equation, u_exp, v_exp)
        if h > chain.work.critical_conjugate:
            chain.emit(equation, u_exp, v_exp, INF)
            return INF
        nxt = current + epsilon if epsilon is not None else _advance(current, current * eta)
        chain.emit(equation, u_exp, v_exp, nxt)
        current = nxt
    raise _Stalled("single-equation chain did not terminate")


def _eta_bound(terms) -> ExtRational:
    """Largest eta keeping every A + B/eta < gap that holds at eta = 1.

    ``terms`` are (A, B, gap) triples; only B < 0 with A >= gap restricts eta.
    """
    bound: ExtRational = INF
    for a, b, gap in terms:
        if b < 0 and a > gap:
            bound = min(bound, -b / (a - gap))
    return bound


def _initial_eta(terms) -> Fraction:
    bound = _eta_bound(terms)
    return Fraction(2) if bound is INF else min(Fraction(2), midpoint(Fraction(1), bound))


def _case_of(work: SystemParams) -> str:
    pc = work.critical
    if pc is INF or work.p < pc - 1:
        return "I"
    if work.p == pc - 1:
        return "II"
    return "III"


def case_of(params: SystemParams) -> str:
    """Case tag I, II or III of the (WLOG-normalized) parameters."""
    if params.q + params.s < params.p + params.r:
        params = params.swapped()
    return _case_of(params)


def _plan_case_one(work: SystemParams):
    pc, pcc = work.critical, work.critical_conjugate
    r, p, gamma = work.r, work.p, work.gamma
    lower = max(p + r, gamma, p * pcc, (gamma - 1) * pcc, Fraction(1))
    if r >= 1:
        lower = max(lower, (r + p - 1) * pcc)
    k = midpoint(lower, pc)
    e_v = max(work.s, work.sigma)
    lower_v = max(e_v, (e_v - 1) * pcc)
    kv = k if k > lower_v else midpoint(lower_v, pc)
    base = {"u": k, "v": kv}

    if r < 1:
        eps0 = _epsilon_start(work, FIRST, k, kv)
        candidates = [("epsilon", eps0 / 2**t) for t in range(MAX_ROUNDS)]
    else:
        eta0 = _initial_eta([(r / k + p / kv, -1 / k, work.gap), (gamma / k, -1 / k, work.gap)])
        candidates = [("eta", 1 + (eta0 - 1) / 2**t) for t in range(MAX_ROUNDS)]

    last = None
    for name, value in candidates:
        chain = _Chain(work, base)
        try:
            _single_equation(chain, FIRST, k, kv, **{name: value})
            _finish(chain, SECOND, kv, INF)
        except _Stalled as exc:
            last = exc
            break
        except _Reject as exc:
            last = exc
            continue
        selected = dict(case="I", k=k, **{name: value})
        return selected, base, chain.steps
    raise PlanningError(f"case I parameter search failed: {last}")


def _contraction(chain: _Chain, start: Fraction, limit: Fraction, stop: Fraction,
                 tau: Fraction, v_exp: Fraction) -> Fraction:
    """First-equation chain limit - tau**m (limit - start) until it passes ``stop``.

    Far below ``limit`` a contraction step can exceed what one smoothing step
    gains, so each step is also capped at half the admissible gain (in the
    reciprocal scale); the chain is then geometric until the contraction
    takes over.
    """
    gap = chain.work.gap
    current = start
    for _ in range(MAX_CHAIN):
        if current >= stop:
            return current
        ideal = limit - tau * (limit - current)
        inv_floor = recip(chain.h(FIRST, current, v_exp)) - gap
        if inv_floor > 0:
            ideal = min(ideal, 2 / (1 / current + inv_floor))
        if not ideal > current:
            raise _Reject("contraction step gains nothing")
        nxt = _advance(current, ideal)
        chain.emit(FIRST, current, v_exp, nxt)
        current = nxt
    raise _Stalled("contraction did not reach the target")


def _contracted(work: SystemParams, base: dict[str, Fraction], k: Fraction,
                limit: Fraction, stop: Fraction) -> tuple[_Chain, Fraction]:
    """Contraction chain for the first ratio tau = 1 - (1-r)/2**t that works.

    A stalled chain ends the search: ratios closer to 1 only lengthen it.
    """
    last: _Reject | None = None
    for t in range(1, 24):
        tau = 1 - (1 - work.r) / 2**t
        if tau <= work.r:
            continue
        chain = _Chain(work, base)
        try:
            _contraction(chain, k, limit, stop, tau, k)
        except _Stalled:
            raise
        except _Reject as exc:
            last = exc
            continue
        return chain, tau
    raise _Reject(f"no contraction ratio works ({last})")


def _plan_case_two(work: SystemParams):
    pc, pcc, gap = work.critical, work.critical_conjugate, work.gap
    r, s, p, q = work.r, work.s, work.p, work.q
    # u must reach k1 with q/k1 below both gap and 1 - s/p_c.
    c0 = min(gap, 1 - s / pc) / 2
    k1 = max(q / c0, pc + 1)
    if k1 > K1_CAP:
        raise PlanningError(f"case II needs k1={fmt(k1)} beyond the cap {K1_CAP}")
    lower_v = max(s / (1 - c0), work.sigma, (work.sigma - 1) * pcc, Fraction(1))
    if s >= 1:
        lower_v = max(lower_v, (s - 1) / (gap - c0))
    lower = max(lower_v, p + r, work.gamma, (work.gamma - 1) * pcc, Fraction(1))
    target = 2 * k1
    last = None
    for i in range(1, MAX_ROUNDS):
        k = pc - (pc - lower) / 2**i
        # The contraction toward ``target`` needs r + (p/k - gap)*target < 1.
        if 2 * (p / k - gap) * target > 1 - r:
            continue
        base = {"u": k, "v": k}
        try:
            chain, tau = _contracted(work, base, k, target, k1)
        except _Reject as exc:
            last = exc
            continue
        eps0 = _epsilon_start(work, SECOND, k, k1)
        for t in range(MAX_ROUNDS):
            trial = chain.copy()
            try:
                if s < 1:
                    _single_equation(trial, SECOND, k, k1, epsilon=eps0 / 2**t)
                else:
                    eta0 = _initial_eta([(q / k1 + s / k, -1 / k, gap), (work.sigma / k, -1 / k, gap)])
                    _single_equation(trial, SECOND, k, k1, eta=1 + (eta0 - 1) / 2**t)
                _finish(trial, FIRST, k1, INF)
            except _Stalled as exc:
                last = exc
                break
            except _Reject as exc:
                last = exc
                continue
            selected = dict(case="II", k=k, k1=k1, tau=tau, target=target)
            if s < 1:
                selected["epsilon"] = eps0 / 2**t
            else:
                selected["eta"] = 1 + (eta0 - 1) / 2**t
            return selected, base, trial.steps
    raise PlanningError(f"case II parameter search failed: {last}")


def _alternate(chain: _Chain, k1: Fraction, k: Fraction, eta: Fraction) -> None:
    """Alternate bootstrap on the scales eta**m * k1 (u) and eta**m * k (v)."""
    pcc = chain.work.critical_conjugate
    a, b = k1, k
    for _ in range(MAX_CHAIN):
        if chain.h(SECOND, a, b) > pcc:
            chain.emit(SECOND, a, b, INF)
            _finish(chain, FIRST, a, INF)
            return
        b_next = _advance(b, eta * b)
        chain.emit(SECOND, a, b, b_next)
        b = b_next
        if chain.h(FIRST, a, b) > pcc:
            chain.emit(FIRST, a, b, INF)
            _finish(chain, SECOND, b, INF)
            return
        a_next = _advance(a, eta * a)
        chain.emit(FIRST, a, b, a_next)
        a = a_next
    raise _Stalled("alternate bootstrap did not terminate")


def _plan_case_three(work: SystemParams):
    pc, gap = work.critical, work.gap
    r, s, p, q = work.r, work.s, work.p, work.q
    gamma, sigma = work.gamma, work.sigma
    feas = feasibility_kstar(work)
    if not feas.feasible:
        raise PlanningError("case III requires q/k* + s/p_c < 1")
    k_star = feas.k_star
    lower = max(p + r, gamma, sigma, s, Fraction(1))
    last = None
    for j in range(1, MAX_ROUNDS):
        k1 = k_star - (k_star - pc) / 2**j
        if not q / k1 + s / pc < 1:
            continue
        k_eps = (k1 + k_star) / 2
        for i in range(1, MAX_ROUNDS):
            k = pc - (pc - lower) / 2**i
            if (r / k_eps + p / k - 1 / k_eps < gap
                    and q / k1 + s / k < 1
                    and r / k1 + p / k - 1 / k1 < gap
                    and q / k1 + (s - 1) / k < gap
                    and (sigma - 1) / k < gap
                    and (gamma - 1) / k1 < gap):
                break
        else:
            continue
        base = {"u": k, "v": k}
        try:
            chain, tau = _contracted(work, base, k, k_eps, k1)
        except _Reject as exc:
            last = exc
            continue
        eta0 = _initial_eta([
            (r / k1, p / k - 1 / k1, gap),
            (q / k1 + s / k, -1 / k, gap),
            (gamma / k1, -1 / k1, gap),
            (sigma / k, -1 / k, gap),
        ])
        for t in range(MAX_ROUNDS):
            eta = 1 + (eta0 - 1) / 2**t
            trial = chain.copy()
            try:
                _alternate(trial, k1, k, eta)
            except _Stalled as exc:
                last = exc
                break
            except _Reject as exc:
                last = exc
                continue
            selected = dict(case="III", k=k, k1=k1, epsilon=k_star - k_eps, tau=tau, eta=eta, target=k_eps)
            return selected, base, trial.steps
    raise PlanningError(f"case III parameter search failed: {last}")


_PLANNERS = {"I": _plan_case_one, "II": _plan_case_two, "III": _plan_case_three}


def plan(params: SystemParams) -> Certificate:
    """Build a certificate of L-infinity regularity for certified parameters."""
    verdict, _ = classify(params)
    if verdict.tag is not VerdictTag.REGULARITY_CERTIFIED:
        raise PlanningError(f"refusing to plan: verdict is {verdict}")
    swapped = params.q + params.s < params.p + params.r
    work = params.swapped() if swapped else params
    case = _case_of(work)
    selected, base, steps = _PLANNERS[case](work)
    cert = Certificate(
        params=params,
        selected=SelectedParameters(swapped=swapped, **selected),
        base=tuple(sorted(base.items())),
        steps=tuple(steps),
    )
    report = validate(cert, params)
    if not report.ok:
        raise PlanningError(f"planner defect: {report}")
    return cert


def select_parameters(params: SystemParams) -> SelectedParameters:
    return plan(params).selected
