import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given

from regula import INF, SystemParams, case_of, plan, select_parameters, validate
from regula import serialization
from regula.bootstrap import (
    FIRST,
    SECOND,
    Certificate,
    PlanningError,
    check_step,
    derive_step,
    simplest_between,
)
from regula.sampling import random_certified
from mutations import mutations
from strategies import certified_params, fractions

CASE_I_EXAMPLE = SystemParams(3, "l1delta", 0, 0, Fraction(4, 5), Fraction(3, 2), theta=3)
CASE_III_EXAMPLE = SystemParams(2, "l1delta", 0, 0, Fraction(5, 2), 5, theta=2)


def test_case_examples():
    assert case_of(CASE_I_EXAMPLE) == "I"
    assert case_of(SystemParams(3, "l1delta", 0, 0, 1, 3)) == "II"
    assert case_of(CASE_III_EXAMPLE) == "III"
    assert case_of(SystemParams(2, "h01", 0, 0, 50, 50)) == "I"
    # the WLOG swap is applied before the case split
    assert case_of(SystemParams(2, "l1delta", 0, 0, 5, Fraction(5, 2))) == "III"


def assert_terminal(cert: Certificate):
    finals = {st.target for st in cert.steps if st.result_exp is INF}
    assert finals == {"u", "v"}
    assert all(st.margin > 0 for st in cert.steps)


def test_case_one_example_structure():
    cert = plan(CASE_I_EXAMPLE)
    sel = cert.selected
    assert sel.case == "I" and not sel.swapped
    assert sel.k == Fraction(9, 5) and sel.epsilon is not None
    assert dict(cert.base) == {"u": Fraction(9, 5), "v": Fraction(9, 5)}
    u_steps = [st for st in cert.steps if st.target == "u"]
    v_steps = [st for st in cert.steps if st.target == "v"]
    # the u chain comes first and ends in the sup norm, then v is finished
    assert cert.steps[: len(u_steps)] == tuple(u_steps)
    assert u_steps[-1].result_exp is INF and v_steps[-1].result_exp is INF
    assert all(st.v_exp == Fraction(9, 5) for st in u_steps)
    assert all(st.u_exp is INF for st in v_steps)
    assert validate(cert, CASE_I_EXAMPLE).ok
    assert_terminal(cert)


def test_case_three_example():
    cert = plan(CASE_III_EXAMPLE)
    sel = cert.selected
    assert sel.case == "III"
    k_star = sel.target + sel.epsilon
    assert k_star == 6
    assert CASE_III_EXAMPLE.critical < sel.k1 < k_star
    assert sel.k < CASE_III_EXAMPLE.critical
    assert validate(cert, CASE_III_EXAMPLE).ok
    assert_terminal(cert)


def test_plan_refuses_uncertified():
    with pytest.raises(PlanningError, match="refusing"):
        plan(SystemParams(6, "l1delta", 1, 0, 1, 1, theta=3))


@pytest.mark.parametrize("case", ["I", "II", "III"])
def test_plan_validates_per_case(case):
    rng = random.Random(sum(map(ord, case)))
    for _ in range(40):
        params = random_certified(rng, case)
        cert = plan(params)
        assert case_of(params) == case == cert.selected.case
        assert validate(cert, params).ok
        assert_terminal(cert)


@given(certified_params())
def test_plan_is_deterministic_and_sound(params):
    cert = plan(params)
    assert plan(params) == cert
    assert select_parameters(params) == cert.selected
    report = validate(cert, params)
    assert report.ok and report.step is None
    strict = validate(cert, params, strict=True)
    assert strict.ok or "1/rho" in strict.violation


@given(certified_params())
def test_every_mutation_is_rejected(params):
    cert = plan(params)
    inflated = set()
    for name, mutated, index in mutations(cert):
        report = validate(mutated, params)
        assert not report.ok, name
        if name.startswith("inflate"):
            inflated.add(index)
            assert report.step == index, name
    # steps with h_cap > p_c' admit any result, so only the others can overshoot
    pcc = cert.working_params().critical_conjugate
    assert inflated == {i for i, st in enumerate(cert.steps) if st.h_cap <= pcc}


def test_sup_step_at_conjugate_is_rejected():
    params = CASE_I_EXAMPLE
    cert = plan(params)
    pcc = params.critical_conjugate
    assert pcc == 2
    u_part = tuple(st for st in cert.steps if st.target == "u")
    step1 = derive_step(params, SECOND, INF, Fraction(9, 5), Fraction(2))
    step2 = derive_step(params, SECOND, INF, Fraction(2), INF)
    assert step2.h_cap == pcc
    forged = dataclasses.replace(cert, steps=u_part + (step1, step2))
    report = validate(forged, params)
    assert not report.ok
    assert report.step == len(u_part) + 1
    assert "p_c'" in report.violation


def test_strict_mode_rejects_unit_holder_exponent():
    params = SystemParams(3, "l1delta", 0, 0, 1, 1, theta=3)
    step = derive_step(params, FIRST, Fraction(1), Fraction(1), Fraction(3, 2))
    assert step.holder_exp == 1
    assert check_step(params, step) is None
    assert "1/rho" in check_step(params, step, strict=True)


def test_validator_diagnoses_structural_errors():
    cert = plan(CASE_I_EXAMPLE)
    st = cert.steps[0]
    bad = dataclasses.replace(cert, steps=(dataclasses.replace(st, target="v"),) + cert.steps[1:])
    assert "bootstraps u" in validate(bad, CASE_I_EXAMPLE).violation
    bad = dataclasses.replace(cert, steps=(dataclasses.replace(st, equation="third"),) + cert.steps[1:])
    assert "unknown equation" in validate(bad, CASE_I_EXAMPLE).violation
    bad = dataclasses.replace(cert, base=(("w", Fraction(3, 2)),))
    assert not validate(bad, CASE_I_EXAMPLE).ok


@given(fractions(0, 20, 50), fractions(0, 20, 50))
def test_simplest_between(a, b):
    lo, hi = min(a, b), max(a, b)
    if lo == hi:
        return
    x = simplest_between(lo, hi)
    assert lo < x < hi
    # no fraction with a smaller denominator lies strictly inside
    for den in range(1, x.denominator):
        num = (lo * den).__floor__() + 1
        assert not Fraction(num, den) < hi


@given(certified_params())
def test_serialization_round_trip(params):
    cert = plan(params)
    text = serialization.dumps(cert)
    back = serialization.loads(text)
    assert back == cert
    assert serialization.dumps(back) == text
    assert validate(back, params) == validate(cert, params)


def test_serialization_errors():
    text = serialization.dumps(plan(CASE_I_EXAMPLE))
    with pytest.raises(serialization.CertificateFormatError, match="schema"):
        serialization.loads(text.replace("regula-certificate/1", "other/9"))
    with pytest.raises(serialization.CertificateFormatError, match="JSON"):
        serialization.loads(text[:-20])
    with pytest.raises(serialization.CertificateFormatError, match="malformed"):
        serialization.loads(text.replace('"9/5"', '"9/x"', 1))
    assert '"inf"' in text and "9/5" in text
