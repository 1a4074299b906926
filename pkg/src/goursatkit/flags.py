"""Derived flags, Cauchy and intersection bundles, and the integer invariants built on them."""

from __future__ import annotations

import dataclasses
import threading
from typing import Sequence

from .config import record_warning
from .expr import ZERO, symbol
from .geometry import Chart, Distribution, SymMatrix, VectorField, lie_bracket, nullspace
from .geometry.distribution import combine


class FlagError(ValueError):
    pass


# ------------------------------------------------------------------ types

@dataclasses.dataclass(frozen=True)
class Signature:
    """The deceleration ``<rho_1, ..., rho_k>``."""

    rho: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(int(r) for r in self.rho))

    @property
    def k(self) -> int:
        return len(self.rho)

    def velocity(self) -> list[int]:
        """``Delta_i = sum_{l >= i} rho_l``."""
        return [sum(self.rho[i:]) for i in range(len(self.rho))]

    def __iter__(self):
        return iter(self.rho)

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self.rho == other.rho
        if isinstance(other, (list, tuple)):
            return list(self.rho) == list(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.rho)

    def __str__(self):
        return "<" + ", ".join(str(r) for r in self.rho) + ">"


@dataclasses.dataclass(frozen=True)
class RefinedDerivedType:
    """``[[m0, chi0], [m1, chi1_0, chi1], ..., [mk, chik]]``."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in e) for e in self.entries)
        if not entries:
            raise ValueError("empty refined derived type")
        k = len(entries) - 1
        for i, e in enumerate(entries):
            want = 2 if i in (0, k) else 3
            if len(e) != want:
                raise ValueError(f"level {i} should have {want} entries, got {list(e)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def build(cls, m: Sequence[int], chi: Sequence[int], chi_int: Sequence[int]) -> "RefinedDerivedType":
        """From ranks ``m_i``, ``chi^i`` and intersections ``chi^i_{i-1}`` (1 <= i <= k-1)."""
        k = len(m) - 1
        rows = [(m[0], chi[0])]
        for i in range(1, k):
            rows.append((m[i], chi_int[i - 1], chi[i]))
        if k > 0:
            rows.append((m[k], chi[k]))
        return cls(tuple(rows))

    @property
    def k(self) -> int:
        return len(self.entries) - 1

    @property
    def m(self) -> list[int]:
        return [e[0] for e in self.entries]

    @property
    def chi(self) -> list[int]:
        return [e[-1] for e in self.entries]

    @property
    def chi_int(self) -> list[int]:
        """``chi^i_{i-1}`` for ``1 <= i <= k-1``."""
        return [e[1] for e in self.entries[1:-1]]

    def velocity(self) -> list[int]:
        m = self.m
        return [m[j] - m[j - 1] for j in range(1, len(m))]

    def deceleration(self) -> Signature:
        return _decel(self.velocity())

    def to_list(self) -> list[list[int]]:
        return [list(e) for e in self.entries]

    def __eq__(self, other):
        if isinstance(other, RefinedDerivedType):
            return self.entries == other.entries
        if isinstance(other, (list, tuple)):
            return self.to_list() == [list(e) for e in other]
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return str(self.to_list()).replace(" ", "")


def _decel(vel: Sequence[int]) -> Signature:
    k = len(vel)
    if k == 0:
        return Signature(())
    rho = [-(vel[j] - vel[j - 1]) for j in range(1, k)] + [vel[-1]]
    return Signature(tuple(rho))


# ------------------------------------------------------------- Cauchy bundle

def cauchy_bundle(D: Distribution, modulo: Distribution | None = None) -> Distribution:
    """Fields ``X`` in ``D`` with ``[X, D]`` inside ``D`` (or inside ``modulo``).

    Writing ``X = sum c_a E_a`` over a basis, ``[X, E_b] = sum c_a [E_a, E_b]``
    modulo terms ``E_b(c_a) E_a`` that already lie in ``D``.  So the condition
    is the pointwise-linear system ``sum_a c_a w([E_a, E_b]) = 0`` for every
    annihilating form ``w`` and every ``b``.  A larger ``modulo`` (which must
    contain ``D``) relaxes the target.
    """
    target = D if modulo is None else modulo
    if target.rank == D.chart.dim or D.rank == 0:
        return D.pruned()
    E = D.basis
    forms = target.annihilator()
    r = len(E)
    brackets = {}
    for a in range(r):
        for b in range(a + 1, r):
            brackets[a, b] = lie_bracket(E[a], E[b])
    rows = []
    for b in range(r):
        for w in forms:
            row = []
            for a in range(r):
                if a == b:
                    row.append(ZERO)
                elif a < b:
                    row.append(w.pair(brackets[a, b]))
                else:
                    row.append(-w.pair(brackets[b, a]))
            if any(not e.is_structurally_zero for e in row):
                rows.append(row)
    if not rows:
        return D.pruned()
    kernel = nullspace(SymMatrix(rows, r))
    out = Distribution(D.chart, [combine(E, v) for v in kernel])
    return out


# -------------------------------------------------------------- derived flag

class DerivedFlag:
    """``V = V^(0) < V^(1) < ... < V^(k)`` with cached Cauchy data per level."""

    def __init__(self, D: Distribution, max_length: int | None = None):
        self.chart = D.chart
        levels = [D.pruned()]
        new_dirs: list[list[VectorField]] = [list(levels[0].basis)]
        limit = max_length if max_length is not None else D.chart.dim
        while len(levels) <= limit:
            cur = levels[-1]
            if cur.rank == self.chart.dim:
                break
            # brackets among older directions already lie in the current level
            fresh = new_dirs[-1]
            candidates = []
            for X in fresh:
                for Y in cur.basis:
                    if X is not Y:
                        candidates.append(lie_bracket(X, Y))
            nxt = Distribution(self.chart, list(cur.basis) + candidates)
            if nxt.rank == cur.rank:
                break
            nxt = nxt.pruned()
            levels.append(nxt)
            new_dirs.append(list(nxt.basis[cur.rank:]))
        self.levels = levels
        self.new_directions = new_dirs
        self._lock = threading.Lock()
        self._cauchy: dict[int, Distribution] = {}
        self._intersections: dict[int, Distribution] = {}

    @property
    def derived_length(self) -> int:
        return len(self.levels) - 1

    k = derived_length

    @property
    def bracket_generating(self) -> bool:
        return self.levels[-1].rank == self.chart.dim

    @property
    def ranks(self) -> list[int]:
        return [L.rank for L in self.levels]

    def level(self, i: int) -> Distribution:
        return self.levels[min(i, len(self.levels) - 1)]

    def cauchy(self, i: int) -> Distribution:
        if i not in self._cauchy:
            C = cauchy_bundle(self.level(i))
            if C.rank and not C.is_integrable():
                record_warning(f"Cauchy bundle of level {i} failed the integrability check")
            with self._lock:
                self._cauchy.setdefault(i, C)
        return self._cauchy[i]

    def intersection(self, i: int) -> Distribution:
        """``V^(i-1)`` intersected with ``Char V^(i)``."""
        k = self.derived_length
        if not 1 <= i <= k:
            raise FlagError(f"intersection bundle index {i} outside 1..{k}")
        if i not in self._intersections:
            B = self.level(i - 1).intersect(self.cauchy(i))
            with self._lock:
                self._intersections.setdefault(i, B)
        return self._intersections[i]

    def velocity(self) -> list[int]:
        r = self.ranks
        return [r[j] - r[j - 1] for j in range(1, len(r))]

    def deceleration(self) -> Signature:
        return _decel(self.velocity())

    def refined_derived_type(self) -> RefinedDerivedType:
        if not self.bracket_generating:
            record_warning("distribution is not bracket generating; type numbers refer to the last level")
        k = self.derived_length
        m = self.ranks
        chi = [self.cauchy(i).rank for i in range(k + 1)]
        chi_int = [self.intersection(i).rank for i in range(1, k)]
        return RefinedDerivedType.build(m, chi, chi_int)


def derived_flag(D: Distribution) -> DerivedFlag:
    return DerivedFlag(D)


def intersection_bundle(flag: DerivedFlag, i: int) -> Distribution:
    if not 1 <= i <= flag.derived_length - 1:
        raise FlagError(f"intersection bundle index {i} outside 1..{flag.derived_length - 1}")
    return flag.intersection(i)


def refined_derived_type(D: Distribution | DerivedFlag) -> RefinedDerivedType:
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    return flag.refined_derived_type()


def velocity(D: Distribution | DerivedFlag) -> list[int]:
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    return flag.velocity()


def deceleration(D: Distribution | DerivedFlag) -> Signature:
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    return flag.deceleration()


# --------------------------------------------------------- Brunovsky forms

def _as_signature(kappa) -> Signature:
    return kappa if isinstance(kappa, Signature) else Signature(tuple(kappa))


def brunovsky_type(kappa, m: int | None = None) -> RefinedDerivedType:
    """Type numbers of the Brunovsky form with signature ``kappa`` and ``m`` controls."""
    kappa = _as_signature(kappa)
    rho = kappa.rho
    k = len(rho)
    if k == 0 or any(r < 0 for r in rho) or rho[-1] < 1:
        raise FlagError(f"invalid signature {kappa}")
    if m is None:
        m = sum(rho)
    if m < sum(rho):
        raise FlagError(f"signature {kappa} needs at least {sum(rho)} controls, got m={m}")
    delta = kappa.velocity()
    ms = [1 + m]
    for d in delta:
        ms.append(ms[-1] + d)
    chi = [2 * ms[j] - ms[j + 1] - 1 for j in range(k)] + [ms[k]]
    chi_int = [ms[i - 1] - 1 for i in range(1, k)]
    return RefinedDerivedType.build(ms, chi, chi_int)


@dataclasses.dataclass(frozen=True)
class TypeMatch:
    matches: bool
    signature: Signature | None
    reason: str | None = None

    def __bool__(self):
        return self.matches


def matches_goursat_type(rdt: RefinedDerivedType, allow_nontrivial_cauchy: bool = False) -> TypeMatch:
    """Check the Brunovsky type-number relations; ``chi^0`` may be nonzero in the relative case."""
    m = rdt.m
    k = rdt.k
    if k == 0:
        return TypeMatch(False, None, "derived length 0: the distribution is integrable")
    kappa = rdt.deceleration()
    if any(r < 0 for r in kappa.rho):
        return TypeMatch(False, kappa, f"velocity {rdt.velocity()} is not non-increasing")
    if kappa.rho[-1] < 1:
        return TypeMatch(False, kappa, "last velocity entry is zero")
    chi = rdt.chi
    if chi[k] != m[k]:
        return TypeMatch(False, kappa, f"top level Cauchy rank {chi[k]} differs from {m[k]}")
    for j in range(k):
        want = 2 * m[j] - m[j + 1] - 1
        if chi[j] != want:
            return TypeMatch(False, kappa, f"chi^{j} = {chi[j]} but 2*m_{j} - m_{j+1} - 1 = {want}")
    for i, c in enumerate(rdt.chi_int, start=1):
        want = m[i - 1] - 1
        if c != want:
            return TypeMatch(False, kappa, f"chi^{i}_{i - 1} = {c} but m_{i - 1} - 1 = {want}")
    if not allow_nontrivial_cauchy and chi[0] != 0:
        return TypeMatch(False, kappa, f"chi^0 = {chi[0]} but a Goursat bundle has no Cauchy directions")
    return TypeMatch(True, kappa, None)


def brunovsky_distribution(kappa) -> Distribution:
    """The contact distribution of the Brunovsky form with signature ``kappa``.

    Coordinates are ``t`` and ``z{a}_{l}``: variable ``a`` of order ``i`` carries
    jets ``l = 0..i``; the top jets are the controls.
    """
    kappa = _as_signature(kappa)
    orders = [i + 1 for i, r in enumerate(kappa.rho) for _ in range(r)]
    coords = [("t", "time")]
    for a, order in enumerate(orders, start=1):
        for l in range(order + 1):
            coords.append((f"z{a}_{l}", "control" if l == order else "state"))
    chart = Chart(coords)
    drift = {"t": 1}
    for a, order in enumerate(orders, start=1):
        for l in range(order):
            drift[f"z{a}_{l}"] = symbol(f"z{a}_{l + 1}")
    fields = [VectorField(chart, drift)]
    for a, order in enumerate(orders, start=1):
        fields.append(VectorField.coordinate(chart, f"z{a}_{order}"))
    return Distribution(chart, fields)
