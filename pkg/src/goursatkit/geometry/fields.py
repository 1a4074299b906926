"""Vector fields and one-forms with expression coefficients."""

from __future__ import annotations

import functools
from typing import Mapping, Sequence

from ..expr import ONE, ZERO, Expr, add_all, as_expr, is_zero
from .chart import Chart


class ChartMismatch(ValueError):
    pass


def _coerce(chart: Chart, coeffs) -> tuple[Expr, ...]:
    if isinstance(coeffs, Mapping):
        out = [ZERO] * chart.dim
        for name, value in coeffs.items():
            out[chart.index(name)] = as_expr(value)
        return tuple(out)
    coeffs = tuple(as_expr(c) for c in coeffs)
    if len(coeffs) != chart.dim:
        raise ValueError(f"expected {chart.dim} coefficients, got {len(coeffs)}")
    return coeffs


class _Linear:
    __slots__ = ("chart", "coeffs", "_hash")

    def __init__(self, chart: Chart, coeffs: Sequence | Mapping):
        self.chart = chart
        self.coeffs = _coerce(chart, coeffs)
        self._hash = hash((type(self).__name__, chart, self.coeffs))

    def _check(self, other):
        if other.chart != self.chart:
            raise ChartMismatch("objects live on different charts")

    def __eq__(self, other):
        return type(other) is type(self) and self._hash == other._hash and self.coeffs == other.coeffs and self.chart == other.chart

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        self._check(other)
        return type(self)(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.chart, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return type(self)(self.chart, [-a for a in self.coeffs])

    def scale(self, f) -> "_Linear":
        f = as_expr(f)
        return type(self)(self.chart, [f * a for a in self.coeffs])

    __rmul__ = scale

    def subs(self, bindings):
        return type(self)(self.chart, [c.subs(bindings) for c in self.coeffs])

    @property
    def is_structurally_zero(self) -> bool:
        return all(c.is_structurally_zero for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.coeffs)

    def components(self) -> dict[str, Expr]:
        return {n: c for n, c in zip(self.chart.names, self.coeffs) if not c.is_structurally_zero}

    def size(self) -> int:
        return sum(c.size for c in self.coeffs)


def _render(pairs, prefix: str) -> str:
    parts = []
    for name, c in pairs:
        if c == 1:
            parts.append(f"{prefix}{name}")
        elif c == -1:
            parts.append(f"-{prefix}{name}")
        elif len(c.terms) == 1:
            parts.append(f"{c}*{prefix}{name}")
        else:
            parts.append(f"({c})*{prefix}{name}")
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


class VectorField(_Linear):
    """Sum of coefficient functions times coordinate derivations."""

    __slots__ = ()

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        coeffs = [ZERO] * chart.dim
        coeffs[chart.index(name)] = ONE
        return cls(chart, coeffs)

    def apply(self, f) -> Expr:
        """Directional derivative X(f)."""
        f = as_expr(f)
        free = f.free_symbols
        parts = []
        for name, c in zip(self.chart.names, self.coeffs):
            if name in free and not c.is_structurally_zero:
                parts.append(c * f.diff(name))
        return add_all(parts)

    def __str__(self):
        return _render(self.components().items(), "d_")

    def __repr__(self):
        return f"VectorField({self})"


class OneForm(_Linear):
    __slots__ = ()

    @classmethod
    def differential(cls, chart: Chart, f) -> "OneForm":
        f = as_expr(f)
        return cls(chart, [f.diff(n) for n in chart.names])

    def pair(self, X: VectorField) -> Expr:
        self._check(X)
        return add_all(a * b for a, b in zip(self.coeffs, X.coeffs)
                       if not a.is_structurally_zero and not b.is_structurally_zero)

    def __str__(self):
        pairs = self.components().items()
        return _render(pairs, "d")

    def __repr__(self):
        return f"OneForm({self})"


@functools.lru_cache(maxsize=1 << 16)
def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^i = X(Y^i) - Y(X^i)."""
    if X.chart != Y.chart:
        raise ChartMismatch("lie_bracket needs fields on the same chart")
    return VectorField(X.chart, [X.apply(b) - Y.apply(a) for a, b in zip(X.coeffs, Y.coeffs)])
