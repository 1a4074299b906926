"""Text rendering that parses back to the same canonical expression."""

from __future__ import annotations

from fractions import Fraction

from .core import Den, Expr, Fn, Sym


def _factor(atom, power: int) -> str:
    if isinstance(atom, Sym):
        body = atom.name
    elif isinstance(atom, Fn):
        body = f"{atom.fn}({to_text(atom.arg)})"
    else:
        body = f"({to_text(atom.base)})"
    return body if power == 1 else f"{body}^{power}"


def _term(mono, coeff: Fraction) -> str:
    num = []
    den = []
    if coeff.numerator != 1 or not any(e > 0 for _, e in mono):
        num.append(str(coeff.numerator))
    if coeff.denominator != 1:
        den.append(str(coeff.denominator))
    for atom, e in mono:
        if e > 0:
            num.append(_factor(atom, e))
        else:
            den.append(_factor(atom, -e))
    text = "*".join(num)
    if den:
        tail = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
        text = f"{text}/{tail}"
    return text


def to_text(e: Expr) -> str:
    if e.is_structurally_zero:
        return "0"
    out = []
    for i, (mono, c) in enumerate(e.terms):
        body = _term(mono, abs(c))
        if i == 0:
            out.append("-" + body if c < 0 else body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
