"""Distributions: sub-bundles of the tangent bundle spanned by vector fields."""

from __future__ import annotations

import itertools
import threading
from typing import Iterable, Sequence

from ..expr import ZERO
from .chart import Chart
from .fields import ChartMismatch, OneForm, VectorField, lie_bracket
from .linalg import SymMatrix, generic_rank, nullspace, select_independent


class Distribution:
    """Span of vector fields over a chart, with lazily cached rank data.

    Every rank and membership verdict is generic: it holds on an open dense
    subset of the chart.
    """

    def __init__(self, chart: Chart, generators: Iterable[VectorField] = ()):
        gens = []
        for g in generators:
            if g.chart != chart:
                raise ChartMismatch("generator lives on a different chart")
            if not g.is_structurally_zero:
                gens.append(g)
        self.chart = chart
        self.generators = tuple(gens)
        self._lock = threading.Lock()
        self._rank = None
        self._basis = None
        self._ann = None

    @classmethod
    def coordinate(cls, chart: Chart, names: Sequence[str]) -> "Distribution":
        return cls(chart, [VectorField.coordinate(chart, n) for n in names])

    @classmethod
    def tangent(cls, chart: Chart) -> "Distribution":
        return cls.coordinate(chart, chart.names)

    def _rows(self, fields=None):
        return [f.coeffs for f in (self.generators if fields is None else fields)]

    # rank data -------------------------------------------------------------

    @property
    def rank(self) -> int:
        if self._rank is None:
            value = generic_rank(self._rows(), self.chart.dim) if self.generators else 0
            with self._lock:
                self._rank = value
        return self._rank

    @property
    def basis(self) -> tuple[VectorField, ...]:
        """Generically independent generators, picked greedily in order."""
        if self._basis is None:
            if self.rank == len(self.generators):
                chosen = self.generators
            else:
                idx = select_independent(self._rows(), self.chart.dim, self.rank)
                chosen = tuple(self.generators[i] for i in idx)
            with self._lock:
                self._basis = tuple(chosen)
        return self._basis

    def pruned(self) -> "Distribution":
        d = Distribution(self.chart, self.basis)
        d._rank = self.rank
        d._basis = d.generators
        return d

    def annihilator(self) -> list[OneForm]:
        """Independent one-forms vanishing on every generator."""
        if self._ann is None:
            if not self.generators:
                forms = [OneForm(self.chart, [1 if i == j else 0 for i in range(self.chart.dim)])
                         for j in range(self.chart.dim)]
            else:
                vecs = nullspace(SymMatrix(self._rows(self.basis), self.chart.dim))
                forms = [OneForm(self.chart, v) for v in vecs]
            with self._lock:
                self._ann = forms
        return list(self._ann)

    # span relations -----------------------------------------------------------

    def _check(self, other):
        if other.chart != self.chart:
            raise ChartMismatch("distributions live on different charts")

    def with_fields(self, fields: Iterable[VectorField]) -> "Distribution":
        return Distribution(self.chart, list(self.basis) + list(fields))

    def contains(self, X: VectorField) -> bool:
        if X.chart != self.chart:
            raise ChartMismatch("field lives on a different chart")
        if X.is_structurally_zero:
            return True
        if self.rank == self.chart.dim:
            return True
        return generic_rank(self._rows(self.basis) + [X.coeffs], self.chart.dim) == self.rank

    def contains_all(self, other: "Distribution | Iterable[VectorField]") -> bool:
        fields = other.basis if isinstance(other, Distribution) else list(other)
        fields = [f for f in fields if not f.is_structurally_zero]
        if not fields:
            return True
        if self.rank == self.chart.dim:
            return True
        return generic_rank(self._rows(self.basis) + [f.coeffs for f in fields], self.chart.dim) == self.rank

    def equals(self, other: "Distribution") -> bool:
        self._check(other)
        return self.rank == other.rank and self.contains_all(other)

    def sum(self, other: "Distribution") -> "Distribution":
        self._check(other)
        return Distribution(self.chart, list(self.basis) + list(other.basis)).pruned()

    __add__ = sum

    def intersect(self, other: "Distribution") -> "Distribution":
        """Solve ``A c = B d`` over the expression field and map back to ``A c``."""
        self._check(other)
        if self.rank == 0 or other.rank == 0:
            return Distribution(self.chart, [])
        if self.contains_all(other):
            return other.pruned()
        if other.contains_all(self):
            return self.pruned()
        A, B = self.basis, other.basis
        n = self.chart.dim
        columns = [f.coeffs for f in A] + [(-f).coeffs for f in B]
        matrix = SymMatrix([[col[i] for col in columns] for i in range(n)], len(columns))
        kernel = nullspace(matrix)
        fields = []
        for v in kernel:
            fields.append(_combine(self.chart, A, v[: len(A)]))
        out = Distribution(self.chart, fields)
        expected = self.rank + other.rank - self.sum(other).rank
        if out.rank != expected:
            raise ArithmeticError("intersection rank disagrees with the dimension count")
        return out

    def brackets(self, other: "Distribution | None" = None) -> list[tuple[int, int, VectorField]]:
        """Brackets of basis fields, ``[E_a, E_b]`` for ``a < b`` (or all pairs with ``other``)."""
        A = self.basis
        if other is None:
            return [(a, b, lie_bracket(A[a], A[b])) for a, b in itertools.combinations(range(len(A)), 2)]
        B = other.basis
        return [(a, b, lie_bracket(A[a], B[b])) for a in range(len(A)) for b in range(len(B))]

    def derived(self) -> "Distribution":
        """``D + [D, D]`` with the new directions appended greedily after D's basis."""
        return Distribution(self.chart, list(self.basis) + [f for _, _, f in self.brackets()]).pruned()

    def frobenius_integrable(self):
        """``(True, None)`` or ``(False, (i, j, [E_i, E_j]))`` with a witness pair."""
        pairs = self.brackets()
        if not pairs or self.rank == self.chart.dim:
            return True, None
        if self.contains_all([f for _, _, f in pairs]):
            return True, None
        for a, b, f in pairs:
            if not self.contains(f):
                return False, (a, b, f)
        return True, None

    def is_integrable(self) -> bool:
        return self.frobenius_integrable()[0]

    def complement_in(self, bigger: "Distribution") -> list[VectorField]:
        """Fields of ``bigger``'s basis that extend this distribution to it."""
        chosen = Distribution(self.chart, list(self.basis) + list(bigger.basis)).basis
        return list(chosen[self.rank:])

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"Distribution(rank={self.rank}, generators=[{', '.join(str(g) for g in self.generators)}])"


def _combine(chart: Chart, fields: Sequence[VectorField], coeffs) -> VectorField:
    out = [ZERO] * chart.dim
    for c, f in zip(coeffs, fields):
        if c.is_structurally_zero:
            continue
        for i, e in enumerate(f.coeffs):
            if not e.is_structurally_zero:
                out[i] = out[i] + c * e
    return VectorField(chart, out)


def combine(fields: Sequence[VectorField], coeffs) -> VectorField:
    if not fields:
        raise ValueError("need at least one field")
    return _combine(fields[0].chart, fields, coeffs)


def annihilator(D: Distribution) -> list[OneForm]:
    return D.annihilator()


def member(X: VectorField, D: Distribution) -> bool:
    return D.contains(X)


def frobenius_integrable(D: Distribution):
    return D.frobenius_integrable()


def sum_distributions(D1: Distribution, D2: Distribution) -> Distribution:
    return D1.sum(D2)


def intersect(D1: Distribution, D2: Distribution) -> Distribution:
    return D1.intersect(D2)


def kernel_of_forms(chart: Chart, forms: Sequence[OneForm]) -> Distribution:
    """The distribution annihilated by ``forms``."""
    forms = [w for w in forms if not w.is_structurally_zero]
    if not forms:
        return Distribution.tangent(chart)
    vecs = nullspace(SymMatrix([w.coeffs for w in forms], chart.dim))
    return Distribution(chart, [VectorField(chart, v) for v in vecs])


def pairing_matrix(forms: Sequence[OneForm], fields: Sequence[VectorField]) -> SymMatrix:
    return SymMatrix([[w.pair(X) for X in fields] for w in forms], len(fields))


__all__ = [
    "Distribution", "annihilator", "combine", "frobenius_integrable", "intersect",
    "kernel_of_forms", "member", "pairing_matrix", "sum_distributions",
]
