import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from regula import INF, SystemParams, VerdictTag, classify, feasibility_kstar
from regula.classifier import MIN_SUM, SCALING, SCALING_ALT, THETA, Relation
from regula.sampling import random_feasibility_domain
from strategies import system_params

CERT = VerdictTag.REGULARITY_CERTIFIED
SING = VerdictTag.SINGULAR_EXAMPLE_EXISTS
CRIT = VerdictTag.CRITICAL_BOUNDARY
OUT = VerdictTag.OUTSIDE_SCOPE


def reactor(n):
    return SystemParams(n, "l1delta", r=1, s=0, p=1, q=1, gamma=1, sigma=1, theta=3)


def test_reactor_examples():
    assert classify(reactor(4))[0].tag is CERT
    verdict, report = classify(reactor(5))
    assert verdict.tag is CRIT
    assert report.check(SCALING).lhs == 2 == report.check(SCALING).rhs
    verdict, _ = classify(reactor(6))
    assert verdict.tag is SING and verdict.constructible is False
    assert str(verdict) == "SingularExampleExists(constructible=False)"
    assert verdict.code == 10


def test_power_three_in_dimension_three():
    verdict, report = classify(SystemParams(3, "l1delta", 0, 0, 3, 3, theta=3))
    assert verdict.tag is SING and not verdict.constructible
    assert report.indices.alpha == report.indices.beta == Fraction(1, 2)


def test_constructible_singular_example_for_h01():
    verdict, _ = classify(SystemParams(5, "h01", 0, 0, 3, 3))
    assert verdict.tag is SING and verdict.constructible


@pytest.mark.parametrize("kind", ["h01", "l1", "l1delta"])
def test_negative_denominator_branch(kind):
    verdict, report = classify(SystemParams(3, kind, 0, 0, Fraction(1, 2), Fraction(1, 2), theta=3))
    check = report.check(SCALING_ALT)
    assert check.lhs == Fraction(-3, 4) and check.satisfied
    assert verdict.tag is CERT


def test_nonpositive_index_is_outside_scope():
    # alpha = (p+1-s)/D <= 0 with D > 0
    verdict, _ = classify(SystemParams(3, "h01", 0, 3, 2, 2))
    assert verdict.tag is OUT and verdict.code == 30


def test_theta_and_power_checks():
    _, report = classify(SystemParams(3, "l1delta", 0, 0, Fraction(1, 2), Fraction(1, 2), theta=2))
    assert report.check(THETA).on_boundary
    assert classify(SystemParams(3, "l1delta", 0, 0, Fraction(1, 2), Fraction(1, 2), theta=2))[0].tag is CRIT
    verdict, report = classify(SystemParams(3, "l1delta", 0, 0, Fraction(1, 2), Fraction(1, 2), theta=Fraction(3, 2)))
    assert not report.check(THETA).satisfied and verdict.tag is CRIT


def test_min_sum_redundancy_note():
    _, report = classify(SystemParams(3, "h01", Fraction(1, 2), 1, 1, 1))
    assert report.check(MIN_SUM).redundant and report.redundancy_notes
    _, report = classify(SystemParams(3, "h01", 2, 0, 2, 2))
    assert not report.check(MIN_SUM).redundant


def test_relation_semantics():
    assert Relation.LT.holds(Fraction(1), INF)
    assert not Relation.GT.holds(INF, INF)
    assert Relation.GE.holds(INF, Fraction(3))


@given(system_params())
def test_symmetry(params):
    a, b = classify(params)[0], classify(params.swapped())[0]
    assert a == b


@given(system_params())
def test_verdicts_follow_the_checks(params):
    verdict, report = classify(params)
    if verdict.tag is CERT:
        assert all(c.satisfied or c.redundant for c in report.checks)
        assert not any(c.on_boundary for c in report.checks)
    elif verdict.tag is SING:
        idx = report.indices
        assert idx.denom > 0
        assert max(idx.alpha, idx.beta) < 1 / (report.p_c - 1)
    elif verdict.tag is OUT:
        assert report.checks == ()


def test_feasibility_examples():
    f = feasibility_kstar(SystemParams(2, "l1delta", 0, 0, Fraction(5, 2), 5))
    assert f.k_star == 6 and f.feasible and not f.swapped
    f = feasibility_kstar(SystemParams(2, "l1delta", 0, 0, 5, Fraction(5, 2)))
    assert f.k_star == 6 and f.swapped
    # p = p_c - 1: k* = inf, feasible iff s < p_c
    f = feasibility_kstar(SystemParams(3, "l1delta", 0, 1, 1, 3))
    assert f.k_star is INF and f.feasible
    with pytest.raises(ValueError, match="p\\+r < p_c"):
        feasibility_kstar(SystemParams(3, "l1delta", 1, 3, 1, 3))
    assert feasibility_kstar(SystemParams(2, "h01", 0, 0, 5, 5)).k_star is INF


@given(st.integers(0, 2**32 - 1).map(lambda seed: random_feasibility_domain(random.Random(seed))))
def test_feasibility_matches_beta(params):
    pc = params.critical
    beta = (params.q + 1 - params.r) / (params.p * params.q - (1 - params.r) * (1 - params.s))
    assert feasibility_kstar(params).feasible == (beta > 1 / (pc - 1))
