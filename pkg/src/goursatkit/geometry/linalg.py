"""Generic-point linear algebra over the expression field.

Ranks are decided numerically at a few seeded sample points (the rank of a
matrix of functions is the maximum of its pointwise ranks, attained on an
open dense set).  When every entry is free of sin/cos/exp the pointwise
ranks are also recomputed exactly over the rationals as a cross-check.

Nullspaces are computed symbolically by Gauss-Jordan elimination.  A
numeric copy of the matrix at a reference point rides along and decides
which entries may serve as pivots, so the symbolic side never has to ask
whether a candidate pivot is zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import mpmath

from ..config import current_config, record_warning
from ..expr import (
    ONE,
    ZERO,
    Expr,
    PoleError,
    ResamplingExhausted,
    as_expr,
    eval_exact,
    eval_numeric,
    is_zero,
    sample_point,
)
from ..expr.core import Den, Fn, Sym, _monomial_expr


class LinalgError(RuntimeError):
    pass


class SymMatrix:
    """Rectangular matrix of expressions."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = tuple(tuple(as_expr(e) for e in r) for r in rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("matrix rows must all have the same length")
        self.ncols = ncols

    @property
    def shape(self):
        return len(self.rows), self.ncols

    def entries(self):
        for r in self.rows:
            yield from r

    def transpose(self) -> "SymMatrix":
        return SymMatrix([list(c) for c in zip(*self.rows)], len(self.rows)) if self.rows else SymMatrix([], 0)

    def rank(self) -> int:
        return generic_rank(self)

    def nullspace(self) -> list[list[Expr]]:
        return nullspace(self)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"


# ---------------------------------------------------------------- sampling

def good_points(exprs, count: int, start: int = 0):
    """Yield ``(index, point)`` pairs where none of ``exprs`` has a pole."""
    cfg = current_config()
    exprs = [e for e in exprs if e.has_denominators()]
    found = misses = 0
    index = start
    while found < count:
        p = sample_point(index, cfg)
        index += 1
        try:
            for e in exprs:
                eval_numeric(e, p)
        except PoleError:
            misses += 1
            if misses > cfg.max_resample:
                raise ResamplingExhausted("could not find a sample point avoiding every pole") from None
            continue
        found += 1
        yield index - 1, p


def evaluate_rows(rows, p) -> list[list]:
    return [[eval_numeric(e, p) if not e.is_structurally_zero else mpmath.mpf(0) for e in r] for r in rows]


def _tolerance():
    return mpmath.mpf(10) ** (-current_config().threshold_exp)


class NumericEchelon:
    """Incremental row reduction of numeric vectors with relative tolerance."""

    def __init__(self, ncols: int, precision: int):
        self.ncols = ncols
        self.precision = precision
        self.rows: list[tuple[int, list]] = []
        self.tol = _tolerance()

    def reduce(self, vec):
        with mpmath.workdps(self.precision):
            v = list(vec)
            norm = max((abs(x) for x in v), default=mpmath.mpf(0))
            if norm == 0:
                return v, norm
            for col, row in self.rows:
                f = v[col]
                if f:
                    v = [a - f * b for a, b in zip(v, row)]
            return v, norm

    def insert(self, vec) -> bool:
        """Add ``vec``; report whether it was independent of the rows so far."""
        v, norm = self.reduce(vec)
        if norm == 0:
            return False
        with mpmath.workdps(self.precision):
            col = max(range(self.ncols), key=lambda j: abs(v[j]))
            if abs(v[col]) <= self.tol * norm:
                return False
            piv = v[col]
            v = [a / piv for a in v]
            self.rows = [(c, [a - r[col] * b for a, b in zip(r, v)]) for c, r in self.rows]
            self.rows.append((col, v))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def numeric_rank(values, ncols: int, precision: int) -> int:
    ech = NumericEchelon(ncols, precision)
    for v in values:
        ech.insert(v)
    return ech.rank


def exact_rank(values) -> int:
    """Fraction-free (Bareiss) rank of an integer or rational matrix."""
    rows = [list(r) for r in values]
    if not rows:
        return 0
    # clear denominators row by row so the elimination runs over integers
    mat = []
    for r in rows:
        den = 1
        for x in r:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        mat.append([int(Fraction(x) * den) for x in r])
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    prev = 1
    col = 0
    while rank < nrows and col < ncols:
        piv = next((i for i in range(rank, nrows) if mat[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                mat[i][j] = (p * mat[i][j] - mat[i][col] * mat[rank][j]) // prev
            mat[i][col] = 0
        prev = p
        rank += 1
        col += 1
    return rank


def _function_free(rows) -> bool:
    return all(not e.has_functions() for r in rows for e in r)


def generic_rank(M: SymMatrix | Sequence[Sequence[Expr]], ncols: int | None = None) -> int:
    """Maximum pointwise rank over ``rank_samples`` seeded points.

    Disagreeing sample ranks are reported through the warning log.
    """
    if not isinstance(M, SymMatrix):
        M = SymMatrix(M, ncols)
    rows = [r for r in M.rows if any(not e.is_structurally_zero for e in r)]
    if not rows or M.ncols == 0:
        return 0
    cfg = current_config()
    exact = _function_free(rows)
    ranks = []
    entries = [e for r in rows for e in r]
    for _, p in good_points(entries, cfg.rank_samples):
        if exact:
            ranks.append(exact_rank([[eval_exact(e, p) for e in r] for r in rows]))
        else:
            ranks.append(numeric_rank(evaluate_rows(rows, p), M.ncols, p.precision))
    best = max(ranks)
    if len(set(ranks)) > 1:
        record_warning(f"sample ranks {ranks} disagree; using the generic value {best}")
    return best


def select_independent(rows, ncols: int, target: int | None = None) -> list[int]:
    """Indices of a maximal generically independent subset, chosen greedily in order."""
    rows = list(rows)
    if target is None:
        target = generic_rank(rows, ncols)
    if target == 0:
        return []
    cfg = current_config()
    entries = [e for r in rows for e in r]
    best: list[int] = []
    for _, p in good_points(entries, cfg.rank_samples + 4):
        ech = NumericEchelon(ncols, p.precision)
        chosen = [i for i, v in enumerate(evaluate_rows(rows, p)) if ech.insert(v)]
        if len(chosen) > len(best):
            best = chosen
        if len(best) >= target:
            break
    return best


# --------------------------------------------------------------- nullspace

def _clear_denominators(vec: list[Expr]) -> list[Expr]:
    need: dict = {}
    for e in vec:
        for mono, _ in e.terms:
            for atom, k in mono:
                if k < 0 and -k > need.get(atom, 0):
                    need[atom] = -k
    if need:
        plain = tuple(sorted(((a, k) for a, k in need.items() if not isinstance(a, Den)), key=lambda p: p[0].key))
        factor = _monomial_expr(plain, 1) if plain else ONE
        out = [e * factor for e in vec]
        for atom, k in sorted(((a, k) for a, k in need.items() if isinstance(a, Den)), key=lambda p: p[0].key):
            for _ in range(k):
                out = [e * atom.base for e in out]
        vec = out
    return _strip_common(vec)


def _strip_common(vec: list[Expr]) -> list[Expr]:
    """Divide out the rational content and any common monomial factor."""
    terms = [t for e in vec for t in e.terms]
    if not terms:
        return vec
    common = None
    for mono, _ in terms:
        d = {a: k for a, k in mono if k > 0 and not isinstance(a, Den)}
        if common is None:
            common = d
        else:
            common = {a: min(k, d[a]) for a, k in common.items() if a in d}
        if not common:
            break
    num = 0
    den = 0
    for _, c in terms:
        num = gcd(num, c.numerator)
        den = gcd(den, c.denominator)
    lead = next(e for e in vec if not e.is_structurally_zero).terms[0][1]
    scale = Fraction(den, num) if lead > 0 else Fraction(-den, num)
    if common:
        inv = tuple(sorted(((a, -k) for a, k in common.items()), key=lambda p: p[0].key))
        f = _monomial_expr(inv, scale)
        return [e * f for e in vec]
    if scale != 1:
        return [e.scale(scale) for e in vec]
    return vec


def _reference_points(entries, count=6):
    return list(good_points(entries, count))


def nullspace(M: SymMatrix | Sequence[Sequence[Expr]], ncols: int | None = None, *, clean: bool = True) -> list[list[Expr]]:
    """Basis of ``{v : M v = 0}`` over the expression field.

    The vectors are independent at generic points and their number is
    ``ncols - generic_rank(M)``.
    """
    if not isinstance(M, SymMatrix):
        M = SymMatrix(M, ncols)
    n = M.ncols
    rows = [r for r in M.rows if any(not e.is_structurally_zero for e in r)]
    if not rows:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    r = generic_rank(rows, n)
    if r == 0:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    entries = [e for row in rows for e in row]
    points = _reference_points(entries)
    last_error = None
    for _, p in points:
        try:
            vecs = _gauss_jordan_kernel(rows, n, r, p)
        except _Degenerate as err:
            last_error = err
            continue
        if clean:
            vecs = [_clear_denominators(v) for v in vecs]
        _verify_kernel(rows, vecs, p)
        return vecs
    raise LinalgError(f"nullspace elimination failed at every reference point: {last_error}")


class _Degenerate(Exception):
    pass


def _gauss_jordan_kernel(rows, n: int, r: int, p) -> list[list[Expr]]:
    prec = p.precision
    values = evaluate_rows(rows, p)
    ech = NumericEchelon(n, prec)
    chosen = [i for i, v in enumerate(values) if ech.insert(v)]
    if len(chosen) < r:
        raise _Degenerate("reference point is not generic")
    sym = [list(rows[i]) for i in chosen]
    num = [list(values[i]) for i in chosen]
    tol = _tolerance()
    pivots: list[tuple[int, int]] = []
    used_rows: set = set()
    with mpmath.workdps(prec):
        scales = [max(abs(x) for x in row) for row in num]
        for _ in range(r):
            best = None
            for i in range(len(sym)):
                if i in used_rows:
                    continue
                for j in range(n):
                    if any(j == c for _, c in pivots):
                        continue
                    if abs(num[i][j]) <= tol * scales[i]:
                        continue
                    key = (sym[i][j].size, j, i)
                    if best is None or key < best[0]:
                        best = (key, i, j)
            if best is None:
                raise _Degenerate("ran out of pivots")
            _, pi, pj = best
            inv = sym[pi][pj].inverse()
            nv = 1 / num[pi][pj]
            sym[pi] = [e * inv if not e.is_structurally_zero else e for e in sym[pi]]
            sym[pi][pj] = ONE
            num[pi] = [x * nv for x in num[pi]]
            num[pi][pj] = mpmath.mpf(1)
            for i in range(len(sym)):
                if i == pi:
                    continue
                f = sym[i][pj]
                if f.is_structurally_zero:
                    continue
                fv = num[i][pj]
                new_sym = []
                new_num = []
                for j in range(n):
                    if j == pj:
                        new_sym.append(ZERO)
                        new_num.append(mpmath.mpf(0))
                        continue
                    b = sym[pi][j]
                    if b.is_structurally_zero:
                        new_sym.append(sym[i][j])
                        new_num.append(num[i][j])
                        continue
                    e = sym[i][j] - f * b
                    v = num[i][j] - fv * num[pi][j]
                    if abs(v) <= tol * scales[i] and not e.is_structurally_zero:
                        if is_zero(e):
                            e = ZERO
                            v = mpmath.mpf(0)
                    new_sym.append(e)
                    new_num.append(v)
                sym[i] = new_sym
                num[i] = new_num
            used_rows.add(pi)
            pivots.append((pi, pj))
    pivot_cols = {j: i for i, j in pivots}
    vecs = []
    for f in range(n):
        if f in pivot_cols:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for j, i in pivot_cols.items():
            v[j] = -sym[i][f]
        vecs.append(v)
    return vecs


def _verify_kernel(rows, vecs, p) -> None:
    if not vecs:
        return
    tol = _tolerance()
    with mpmath.workdps(p.precision):
        vals = evaluate_rows(rows, p)
        for v in vecs:
            try:
                vn = [eval_numeric(e, p) for e in v]
            except PoleError:
                continue
            vnorm = max(abs(x) for x in vn)
            for row in vals:
                s = mpmath.fsum(a * b for a, b in zip(row, vn))
                scale = max(abs(a) for a in row) * vnorm
                if abs(s) > mpmath.mpf(10) ** 5 * tol * max(scale, tol):
                    raise LinalgError("nullspace vector failed the numeric check")


def solve_in_span(basis_rows, target, ncols: int):
    """Coefficients ``c`` with ``sum c_i basis_i = target`` (basis independent)."""
    cols = [list(c) for c in zip(*basis_rows, target)]
    kernel = nullspace(SymMatrix(cols, len(basis_rows) + 1), clean=False)
    for v in kernel:
        last = v[-1]
        if not last.is_structurally_zero and not is_zero(last):
            inv = last.inverse()
            return [-(e * inv) for e in v[:-1]]
    raise LinalgError("target is not in the span")
