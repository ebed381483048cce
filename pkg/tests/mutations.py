"""Targeted corruptions of valid certificates, each of which must be rejected."""

import dataclasses
from fractions import Fraction

from regula import INF
from regula.bootstrap import Certificate, derive_step
from regula.exponents import recip


def inflate(cert: Certificate, index: int) -> Certificate | None:
    """Push one result exponent just past its smoothing bound, fields kept consistent."""
    work = cert.working_params()
    st = cert.steps[index]
    room = recip(st.h_cap) - work.gap
    if room > 0:
        bad = 1 / room  # gain exactly equal to the gap
    elif st.h_cap == work.critical_conjugate:
        bad = INF
    else:
        return None
    mutated = derive_step(work, st.equation, st.u_exp, st.v_exp, bad)
    steps = list(cert.steps)
    steps[index] = mutated
    return dataclasses.replace(cert, steps=tuple(steps))


def mutations(cert: Certificate, max_inflations: int | None = None):
    """Yield (name, corrupted certificate, step index expected in the report or None).

    ``max_inflations`` limits the inflated steps to evenly spaced indices,
    since each one costs a full validation.
    """
    work = cert.working_params()
    indices = range(len(cert.steps))
    if max_inflations is not None and len(indices) > max_inflations:
        stride = len(indices) / max_inflations
        indices = sorted({int(j * stride) for j in range(max_inflations)} | {len(indices) - 1})
    for i in indices:
        m = inflate(cert, i)
        if m is not None:
            yield f"inflate step {i}", m, i
    st = cert.steps[0]
    yield "margin", dataclasses.replace(cert, steps=(dataclasses.replace(st, margin=st.margin + 1),) + cert.steps[1:]), 0
    yield "h_cap", dataclasses.replace(cert, steps=(dataclasses.replace(st, h_cap=st.h_cap * 2),) + cert.steps[1:]), 0
    yield "holder", dataclasses.replace(cert, steps=(dataclasses.replace(st, holder_exp=INF if st.holder_exp is not INF else Fraction(1)),) + cert.steps[1:]), 0
    lifted = derive_step(work, st.equation, st.u_exp + 1 if st.u_exp is not INF else st.u_exp,
                         st.v_exp + 1 if st.v_exp is not INF else st.v_exp, st.result_exp)
    yield "unestablished source", dataclasses.replace(cert, steps=(lifted,) + cert.steps[1:]), 0
    yield "truncated", dataclasses.replace(cert, steps=cert.steps[:-1]), None
    base = tuple((fn, work.critical if work.critical is not INF else e) for fn, e in cert.base)
    if work.critical is not INF:
        yield "base at p_c", dataclasses.replace(cert, base=base), None
    other = dataclasses.replace(cert.params, theta=INF if cert.params.theta is not INF else Fraction(7))
    yield "other params", dataclasses.replace(cert, params=other), None
