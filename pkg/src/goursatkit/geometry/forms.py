"""Alternating forms stored sparsely by strictly increasing index tuples."""

from __future__ import annotations

from typing import Mapping

import mpmath

from ..expr import ZERO, Expr, add_all, as_expr, eval_numeric, is_zero
from .chart import Chart
from .fields import ChartMismatch, OneForm


def merge_sign(left: tuple, right: tuple):
    """Sign and sorted union for dx_left ^ dx_right, or (0, None) on overlap."""
    if set(left) & set(right):
        return 0, None
    inversions = 0
    for i in left:
        for j in right:
            if i > j:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


class AltForm:
    __slots__ = ("chart", "degree", "coeffs")

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping[tuple, Expr]):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.chart = chart
        self.degree = degree
        clean = {}
        for idx, c in coeffs.items():
            idx = tuple(idx)
            if len(idx) != degree or any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing of length {degree}")
            c = as_expr(c)
            if not c.is_structurally_zero:
                clean[idx] = c
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def from_oneform(cls, w: OneForm) -> "AltForm":
        return cls(w.chart, 1, {(i,): c for i, c in enumerate(w.coeffs)})

    @classmethod
    def function(cls, chart: Chart, f) -> "AltForm":
        return cls(chart, 0, {(): as_expr(f)})

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, ZERO) + c
        return AltForm(self.chart, self.degree, out)

    def __neg__(self):
        return AltForm(self.chart, self.degree, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "AltForm":
        f = as_expr(f)
        return AltForm(self.chart, self.degree, {i: f * c for i, c in self.coeffs.items()})

    def _check(self, other):
        if other.chart != self.chart:
            raise ChartMismatch("forms live on different charts")

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.coeffs.values())

    @property
    def is_structurally_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, p) -> dict:
        return {idx: eval_numeric(c, p) for idx, c in self.coeffs.items()}

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.chart.names
        parts = []
        for idx, c in self.coeffs.items():
            basis = "^".join("d" + names[i] for i in idx)
            parts.append(f"({c})*{basis}" if basis else str(c))
        return " + ".join(parts)

    def __repr__(self):
        return f"AltForm<{self.degree}>({self})"


def wedge(alpha: AltForm, beta: AltForm) -> AltForm:
    alpha._check(beta)
    out: dict = {}
    for i, a in alpha.coeffs.items():
        for j, b in beta.coeffs.items():
            sign, idx = merge_sign(i, j)
            if sign:
                term = a * b
                out.setdefault(idx, []).append(term if sign > 0 else -term)
    return AltForm(alpha.chart, alpha.degree + beta.degree, {k: add_all(v) for k, v in out.items()})


def exterior_derivative(omega: AltForm) -> AltForm:
    names = omega.chart.names
    out: dict = {}
    for idx, c in omega.coeffs.items():
        free = c.free_symbols
        for j, name in enumerate(names):
            if name not in free or j in idx:
                continue
            sign, new = merge_sign((j,), idx)
            d = c.diff(name)
            if not d.is_structurally_zero:
                out.setdefault(new, []).append(d if sign > 0 else -d)
    return AltForm(omega.chart, omega.degree + 1, {k: add_all(v) for k, v in out.items()})


# numeric counterparts, used where the symbolic wedge would be needlessly large

def numeric_wedge(alpha: dict, beta: dict) -> dict:
    out: dict = {}
    for i, a in alpha.items():
        for j, b in beta.items():
            sign, idx = merge_sign(i, j)
            if sign:
                v = a * b
                out[idx] = out.get(idx, 0) + (v if sign > 0 else -v)
    return out


def numeric_is_zero(values: dict, scale) -> bool:
    if not values:
        return True
    bound = mpmath.mpf(10) ** -30 * max(scale, mpmath.mpf(10) ** -200)
    return all(abs(v) <= bound for v in values.values())
