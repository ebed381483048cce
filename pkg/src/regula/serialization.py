"""Versioned text format for certificates.

The first line is a schema tag; the rest is JSON with sorted keys.  Rationals
are written as "num/den" strings and infinity as "inf", so a round trip is
bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import fields

from .bootstrap import Certificate, SelectedParameters, Step
from .exponents import SystemParams, ext, fmt

SCHEMA = "regula-certificate/1"

_PARAM_FIELDS = ("r", "s", "p", "q", "gamma", "sigma", "theta")
_STEP_EXPONENTS = ("u_exp", "v_exp", "holder_exp", "pure_exp", "h_cap", "result_exp", "margin")


class CertificateFormatError(ValueError):
    pass


def _opt(x):
    return None if x is None else fmt(x)


def params_to_dict(params: SystemParams) -> dict:
    out = {"n": params.n, "kind": params.kind.value}
    out.update({name: fmt(getattr(params, name)) for name in _PARAM_FIELDS})
    if params.notes:
        out["notes"] = list(params.notes)
    return out


def params_from_dict(data: dict) -> SystemParams:
    values = {name: ext(data[name]) for name in _PARAM_FIELDS}
    return SystemParams(int(data["n"]), data["kind"], notes=tuple(data.get("notes", ())), **values)


def to_dict(cert: Certificate) -> dict:
    sel = cert.selected
    selected = {f.name: getattr(sel, f.name) for f in fields(sel)}
    for name, value in selected.items():
        if name not in ("case", "swapped"):
            selected[name] = _opt(value)
    return {
        "params": params_to_dict(cert.params),
        "selected": selected,
        "base": [{"function": fn, "exponent": fmt(e)} for fn, e in cert.base],
        "steps": [
            {"equation": st.equation, "target": st.target,
             **{name: fmt(getattr(st, name)) for name in _STEP_EXPONENTS}}
            for st in cert.steps
        ],
    }


def from_dict(data: dict) -> Certificate:
    try:
        sel = dict(data["selected"])
        for name, value in sel.items():
            if name not in ("case", "swapped") and value is not None:
                sel[name] = ext(value)
        steps = tuple(
            Step(st["equation"], st["target"], **{name: ext(st[name]) for name in _STEP_EXPONENTS})
            for st in data["steps"]
        )
        base = tuple((b["function"], ext(b["exponent"])) for b in data["base"])
        return Certificate(params_from_dict(data["params"]), SelectedParameters(**sel), base, steps)
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from exc


def dumps(cert: Certificate) -> str:
    return SCHEMA + "\n" + json.dumps(to_dict(cert), indent=1, sort_keys=True) + "\n"


def loads(text: str) -> Certificate:
    header, _, body = text.partition("\n")
    if header.strip() != SCHEMA:
        raise CertificateFormatError(f"expected schema line {SCHEMA!r}, got {header.strip()!r}")
    try:
        data = json.loads(body)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"invalid JSON body: {exc}") from exc
    return from_dict(data)
