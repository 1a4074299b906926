"""Goursat-bundle recognition and static/orbital feedback linearization verdicts."""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from math import gcd
from typing import Sequence

import mpmath

from .config import current_config
from .expr.core import Den, _monomial_expr
from .expr import ONE, ZERO, Expr, PoleError, as_expr, eval_numeric, is_zero, parse, symbol
from .flags import DerivedFlag, RefinedDerivedType, Signature, matches_goursat_type
from .geometry import (
    AltForm,
    Distribution,
    OneForm,
    SymMatrix,
    VectorField,
    exterior_derivative,
    generic_rank,
    lie_bracket,
    numeric_wedge,
)
from .geometry.distribution import combine
from .geometry.linalg import good_points, select_independent


class GoursatError(ValueError):
    pass


class NoWeberStructure(GoursatError):
    """The rank-one locus of the polar matrix is empty or not a linear space of the right size."""


@dataclasses.dataclass
class Indeterminate:
    """The rank-one system could not be solved by linear elimination."""

    reason: str
    residual: list[str] = dataclasses.field(default_factory=list)

    def __bool__(self):
        return False


@dataclasses.dataclass
class Absent:
    """No Bryant sub-bundle exists (or none is produced by this route)."""

    reason: str

    def __bool__(self):
        return False


# -------------------------------------------------------------- Engel rank

def _numeric_form(form: AltForm, p) -> dict:
    return {idx: eval_numeric(c, p) for idx, c in form.coeffs.items()}


def _normalized(values: dict) -> dict:
    norm = max((abs(v) for v in values.values()), default=0)
    if norm == 0:
        return values
    return {k: v / norm for k, v in values.items()}


def engel_rank(forms: Sequence[OneForm]) -> int:
    """Smallest ``rho`` with ``(sum t_i d w_i)^(rho+1) = 0 mod I`` for generic ``t``.

    Vanishing modulo ``I`` is tested by wedging with ``w_1 ^ ... ^ w_s``.  The
    formal ``t_i`` are sampled like any other symbol, so the test is the same
    probabilistic identity check used everywhere else.
    """
    forms = [w for w in forms if not w.is_structurally_zero]
    if not forms:
        return 0
    chart = forms[0].chart
    thetas = [AltForm.from_oneform(w) for w in forms]
    dthetas = [exterior_derivative(th) for th in thetas]
    exprs = [c for f in thetas + dthetas for c in f.coeffs.values()]
    cfg = current_config()
    tol = mpmath.mpf(10) ** (-cfg.threshold_exp)
    best = 0
    for _, p in good_points(exprs, cfg.rank_samples):
        with mpmath.workdps(p.precision):
            big = {(): mpmath.mpf(1)}
            for th in thetas:
                big = numeric_wedge(big, _normalized(_numeric_form(th, p)))
            if all(abs(v) <= tol for v in big.values()):
                raise GoursatError("the forms are dependent at a sample point")
            big = _normalized(big)
            omega: dict = {}
            for i, dth in enumerate(dthetas):
                ti = p.real(f"@t{i + 1}")
                for idx, v in _numeric_form(dth, p).items():
                    omega[idx] = omega.get(idx, 0) + ti * v
            omega = _normalized(omega)
            rho = 0
            power = big
            while True:
                power = numeric_wedge(power, omega)
                if all(abs(v) <= tol for v in power.values()):
                    break
                power = _normalized(power)
                rho += 1
                if rho > chart.dim:
                    raise GoursatError("Engel rank iteration did not terminate")
        best = max(best, rho)
    return best


# ------------------------------------------------------------ polar matrix

@dataclasses.dataclass
class PolarProblem:
    base: Distribution
    cauchy: Distribution
    reduced: list[VectorField]
    complement: list[VectorField]
    unknowns: list[str]
    matrix: SymMatrix

    @property
    def q(self) -> int:
        return len(self.complement)

    def display_matrix(self) -> list[list[str]]:
        return [[str(e).replace("@a", "a") for e in row] for row in self.matrix.rows]


def _unknown(i: int) -> str:
    return f"@a{i}"


def polar_problem(D: Distribution, cauchy: Distribution | None = None, derived: Distribution | None = None) -> PolarProblem:
    """Polar matrix of the general line ``sum a_i Y_i`` in ``D / Char D``.

    Columns are indexed by the reduced basis ``Y_j``; rows by annihilating
    forms of ``D`` that restrict to a coframe on ``D^(1) / D``.  Any such row
    choice differs from any other by an invertible left factor, which does
    not move the rank-one locus.
    """
    from .flags import cauchy_bundle

    C = cauchy if cauchy is not None else cauchy_bundle(D)
    D1 = derived if derived is not None else D.derived()
    c = C.rank
    reduced = Distribution(D.chart, list(C.basis) + list(D.basis)).basis[c:]
    complement = D.complement_in(D1)
    q = len(complement)
    if len(reduced) != D.rank - c:
        raise GoursatError("could not split off the Cauchy directions")
    if q == 0:
        raise GoursatError("D is integrable; there is no polar matrix")
    forms = D.annihilator()
    rows_on_z = [[w.pair(Z) for Z in complement] for w in forms]
    chosen = select_independent(rows_on_z, q, q)
    if len(chosen) != q:
        raise GoursatError("annihilator does not restrict to a coframe on D^(1)/D")
    forms = [forms[i] for i in chosen]
    n = len(reduced)
    unknowns = [_unknown(i + 1) for i in range(n)]
    avars = [symbol(u) for u in unknowns]
    pair = {}
    for i in range(n):
        for j in range(i + 1, n):
            B = lie_bracket(reduced[i], reduced[j])
            pair[i, j] = [w.pair(B) for w in forms]
    rows = []
    for k in range(q):
        row = []
        for j in range(n):
            terms = []
            for i in range(n):
                if i == j:
                    continue
                v = pair[i, j][k] if i < j else -pair[j, i][k]
                if not v.is_structurally_zero:
                    terms.append(avars[i] * v)
            row.append(sum(terms, ZERO))
        rows.append(row)
    return PolarProblem(D, C, list(reduced), complement, unknowns, SymMatrix(rows, n))


# --------------------------------------------------------------- resolvent

@dataclasses.dataclass
class WeberStructure:
    singular: list[VectorField]
    resolvent: Distribution
    integrable: bool
    witness: tuple | None
    coefficients: list[list[Expr]]
    q: int

    def __bool__(self):
        return True


def _clear_equation(e: Expr, unknowns: set) -> Expr:
    """Multiply out denominators; divide only by content and chart monomials."""
    need: dict = {}
    for mono, _ in e.terms:
        for atom, k in mono:
            if k < 0 and -k > need.get(atom, 0):
                need[atom] = -k
    for atom, k in sorted(need.items(), key=lambda p: p[0].key):
        base = atom.base if isinstance(atom, Den) else _monomial_expr(((atom, 1),), Fraction(1))
        for _ in range(k):
            e = e * base
    if e.is_structurally_zero:
        return e
    num = 0
    den = 0
    for _, c in e.terms:
        num = gcd(num, c.numerator)
        den = gcd(den, c.denominator)
    return e.scale(Fraction(den, num))


def _linear_choice(equations: list[Expr], unknowns: list[str]):
    best = None
    uset = set(unknowns)
    for ei, e in enumerate(equations):
        free = e.free_symbols & uset
        for u in sorted(free):
            A = e.diff(u)
            if u in A.free_symbols:
                continue
            others = len(A.free_symbols & uset)
            key = (others, A.size + e.size, ei, u)
            if best is not None and key >= best[0]:
                continue
            if is_zero(A):
                continue
            best = (key, ei, u, A)
    return best


def _solve_branch(minors: list[Expr], unknowns: list[str], p: int):
    """Normalize ``a_p = 1`` and eliminate linearly appearing unknowns."""
    fixed = {unknowns[p]: ONE}
    sol: dict[str, Expr] = dict(fixed)
    remaining = [u for u in unknowns if u != unknowns[p]]
    eqs = []
    for m in minors:
        e = m.subs(fixed)
        if not e.is_structurally_zero and not is_zero(e):
            eqs.append(_clear_equation(e, set(remaining)))
    while eqs:
        for e in eqs:
            if not (e.free_symbols & set(remaining)):
                return None, f"inconsistent equation {e}"
        choice = _linear_choice(eqs, remaining)
        if choice is None:
            return Indeterminate("no unknown appears linearly", [str(e).replace("@a", "a") for e in eqs]), None
        _, ei, u, A = choice
        e = eqs[ei]
        B = e.subs({u: ZERO})
        value = -(B * A.inverse())
        sol = {k: v.subs({u: value}) for k, v in sol.items()}
        sol[u] = value
        remaining.remove(u)
        new = []
        for other in eqs[:ei] + eqs[ei + 1:]:
            f = other.subs({u: value})
            if f.is_structurally_zero or is_zero(f):
                continue
            new.append(_clear_equation(f, set(remaining)))
        eqs = new
    return (sol, remaining), None


def _affine_basis(sol: dict, unknowns: list[str], params: list[str]):
    vec = [sol.get(u, symbol(u)) for u in unknowns]
    pset = set(params)
    for e in vec:
        for s in params:
            d = e.diff(s)
            if d.free_symbols & pset:
                for s2 in params:
                    dd = d.diff(s2)
                    if not dd.is_structurally_zero and not is_zero(dd):
                        return None
    zero = {s: ZERO for s in params}
    base = [e.subs(zero) for e in vec]
    out = [base]
    for s in params:
        out.append([e.diff(s).subs(zero) for e in vec])
    return out


def resolvent(D: Distribution, problem: PolarProblem | None = None):
    """Resolvent bundle of the Weber structure of ``D``.

    Returns a :class:`WeberStructure`, or :class:`Indeterminate` when the
    rank-one equations need more than linear elimination.  Raises
    :class:`NoWeberStructure` when the rank-one locus is not a rank-q space.
    """
    P = problem or polar_problem(D)
    q = P.q
    n = len(P.reduced)
    if q < 2:
        raise NoWeberStructure(f"a Weber structure needs q >= 2, got q = {q}")
    if n != q + 1:
        raise NoWeberStructure(f"reduced bundle has rank {n}, expected q + 1 = {q + 1}")
    rows = P.matrix.rows
    minors = []
    for r1, r2 in itertools.combinations(range(len(rows)), 2):
        for c1, c2 in itertools.combinations(range(n), 2):
            m = rows[r1][c1] * rows[r2][c2] - rows[r1][c2] * rows[r2][c1]
            if not m.is_structurally_zero:
                minors.append(m)
    stuck = None
    found = None
    for p in range(n):
        result, failure = _solve_branch(minors, P.unknowns, p)
        if isinstance(result, Indeterminate):
            stuck = stuck or result
            continue
        if result is None:
            continue
        sol, params = result
        if len(params) != q - 1:
            continue
        basis = _affine_basis(sol, P.unknowns, params)
        if basis is None:
            stuck = stuck or Indeterminate("rank-one component is not linear in the free parameters")
            continue
        if generic_rank(basis, n) != q:
            continue
        found = basis
        break
    if found is None:
        if stuck is not None:
            return stuck
        raise NoWeberStructure("the polar matrix has no rank-one locus of dimension q")
    singular = [combine(P.reduced, b) for b in found]
    R = Distribution(D.chart, list(P.cauchy.basis) + singular)
    if R.rank != P.cauchy.rank + q:
        raise NoWeberStructure("lifted resolvent has the wrong rank")
    ok, witness = R.frobenius_integrable()
    return WeberStructure(singular, R.pruned(), ok, witness, found, q)


# ------------------------------------------------------- Bryant sub-bundles

def bryant_sub_bundle(D: Distribution, flag: DerivedFlag | None = None):
    """Corank-one ``B`` in ``D`` with ``[B, B]`` inside ``D``, or :class:`Absent`."""
    from .flags import cauchy_bundle

    D1 = D.derived()
    m0, m1 = D.rank, D1.rank
    q = m1 - m0
    if q == 0:
        return Absent("D is integrable")
    C = cauchy_bundle(D)
    if C.rank != 2 * m0 - m1 - 1:
        return Absent(f"rank Char D = {C.rank} differs from 2*m0 - m1 - 1 = {2 * m0 - m1 - 1}")
    if q == 1:
        if D1.rank == D.chart.dim:
            return Absent("D^(1) is the whole tangent bundle; the fundamental bundle plays this role")
        B = D.intersect(cauchy_bundle(D1))
        if B.rank != m0 - 1:
            return Absent("D intersected with Char D^(1) is not of corank one")
        return B
    if engel_rank(D.annihilator()) != 1:
        return Absent("the annihilator does not have Engel rank 1")
    P = polar_problem(D, C, D1)
    try:
        W = resolvent(D, P)
    except NoWeberStructure as err:
        return Absent(str(err))
    if isinstance(W, Indeterminate):
        return W
    return W.resolvent


# ------------------------------------------------------- fundamental bundle

def _tau_expr(chart, tau) -> Expr:
    if tau is None:
        if chart.time is None:
            raise GoursatError("chart has no time coordinate; supply tau")
        return symbol(chart.time)
    if isinstance(tau, str):
        return parse(tau, chart.symbols)
    return as_expr(tau)


def is_first_integral(D: Distribution, tau) -> bool:
    tau = _tau_expr(D.chart, tau)
    return all(is_zero(X.apply(tau)) for X in D.basis)


def fundamental_bundle(flag: DerivedFlag, Z: VectorField | None = None, tau=None) -> Distribution:
    """``Pi^0 = V cap Char V^(1)`` widened by ``ad(Z)`` ``k - 1`` times."""
    k = flag.derived_length
    vel = flag.velocity()
    if not vel or vel[-1] != 1:
        raise GoursatError("the fundamental bundle needs Delta_k = 1")
    V = flag.level(0)
    tau_e = _tau_expr(V.chart, tau)
    if Z is None:
        for X in V.basis:
            val = X.apply(tau_e)
            if not is_zero(val):
                Z = X.scale(val.inverse())
                break
        else:
            raise GoursatError("no generator of V moves tau")
    else:
        if not is_zero(Z.apply(tau_e) - ONE):
            raise GoursatError("Z(tau) must equal 1")
    if k >= 2:
        Pi = flag.intersection(1)
    else:
        # with k = 1 the Cauchy bundle of V^(1) is everything; use V cap ker d tau
        Pi = Distribution(V.chart, [X - Z.scale(X.apply(tau_e)) for X in V.basis])
    for _ in range(k - 1):
        Pi = Pi.with_fields([lie_bracket(Y, Z) for Y in Pi.basis]).pruned()
    return Pi


# ----------------------------------------------------------------- verdicts

@dataclasses.dataclass
class Obstruction:
    condition: str
    detail: str
    witness: str | None = None

    def as_dict(self) -> dict:
        return {"condition": self.condition, "detail": self.detail, "witness": self.witness}


@dataclasses.dataclass
class GoursatVerdict:
    is_goursat: bool
    signature: Signature | None
    derived_length: int
    rdt: RefinedDerivedType | None
    obstruction: Obstruction | None = None
    indeterminate: bool = False
    relative: bool = False
    notes: list[str] = dataclasses.field(default_factory=list)
    weber: WeberStructure | None = None
    fundamental: Distribution | None = None
    flag: DerivedFlag | None = None

    @property
    def top_bundle(self) -> Distribution | None:
        """``R(V^(k-1))`` when ``Delta_k > 1``, else ``Char V^(k-1)``."""
        if self.weber is not None:
            return self.weber.resolvent
        if self.flag is not None and self.derived_length >= 1:
            return self.flag.cauchy(self.derived_length - 1)
        return None


def _witness_text(flag_level: Distribution, witness) -> str | None:
    if witness is None:
        return None
    a, b, f = witness
    return f"[{flag_level.basis[a]}, {flag_level.basis[b]}] = {f}"


def goursat_verdict(D: Distribution | DerivedFlag, relative: bool = False, tau=None) -> GoursatVerdict:
    """Check the Goursat (or relative Goursat) conditions in order, stopping at the first failure."""
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    k = flag.derived_length
    if not flag.bracket_generating:
        return GoursatVerdict(False, None, k, None, Obstruction("bracket_generating", "derived flag stops short of TM"), flag=flag)
    rdt = flag.refined_derived_type()
    match = matches_goursat_type(rdt, allow_nontrivial_cauchy=relative)
    verdict = GoursatVerdict(False, match.signature, k, rdt, relative=relative, flag=flag)
    if not match:
        verdict.obstruction = Obstruction("type", match.reason or "type numbers do not match")
        return verdict
    for i in range(1, k):
        B = flag.intersection(i)
        ok, witness = B.frobenius_integrable()
        if not ok:
            verdict.obstruction = Obstruction(
                "intersection_integrability",
                f"Char V^({i})_{i - 1} is not integrable",
                _witness_text(B, witness),
            )
            return verdict
    vel = flag.velocity()
    top = flag.level(k - 1)
    if vel[-1] > 1:
        try:
            W = resolvent(top)
        except NoWeberStructure as err:
            verdict.obstruction = Obstruction("weber_structure", str(err))
            return verdict
        if isinstance(W, Indeterminate):
            verdict.indeterminate = True
            verdict.notes.append(f"resolvent indeterminate: {W.reason}")
            return verdict
        verdict.weber = W
        if not W.integrable:
            verdict.obstruction = Obstruction(
                "resolvent_integrability", f"resolvent of V^({k - 1}) is not integrable",
                _witness_text(W.resolvent, W.witness),
            )
            return verdict
    else:
        tau_e = _tau_expr(flag.chart, tau)
        char_top = flag.cauchy(k - 1) if k >= 1 else None
        if k >= 2 and not is_first_integral(char_top, tau_e):
            verdict.notes.append(
                f"{tau_e} is not a first integral of Char V^({k - 1}); fundamental bundle check skipped"
            )
        else:
            try:
                Pi = fundamental_bundle(flag, tau=tau_e)
            except GoursatError as err:
                verdict.notes.append(f"fundamental bundle unavailable: {err}")
            else:
                verdict.fundamental = Pi
                ok, witness = Pi.frobenius_integrable()
                if not ok or Pi.rank != flag.chart.dim - 2:
                    verdict.obstruction = Obstruction(
                        "fundamental_bundle",
                        f"fundamental bundle has rank {Pi.rank} (want {flag.chart.dim - 2}) or is not integrable",
                        _witness_text(Pi, witness),
                    )
                    return verdict
    verdict.is_goursat = True
    return verdict


SFL = "SFL"
OFL_ONLY = "OFL_ONLY"
NOT_LINEARIZABLE = "NOT_LINEARIZABLE"
INDETERMINATE = "INDETERMINATE"


@dataclasses.dataclass
class SFLVerdict:
    status: str
    goursat: GoursatVerdict
    reason: str
    independence: str = "none"

    @property
    def is_sfl(self) -> bool:
        return self.status == SFL

    @property
    def is_ofl(self) -> bool:
        return self.status in (SFL, OFL_ONLY)


def sfl_verdict(D: Distribution | DerivedFlag | GoursatVerdict, relative: bool = False, tau=None) -> SFLVerdict:
    """Static feedback linearizability: Goursat plus ``dt`` killing the top bundle."""
    G = D if isinstance(D, GoursatVerdict) else goursat_verdict(D, relative=relative)
    if G.indeterminate:
        return SFLVerdict(INDETERMINATE, G, "; ".join(G.notes) or "indeterminate")
    if not G.is_goursat:
        reason = G.obstruction.detail if G.obstruction else "not Goursat"
        return SFLVerdict(NOT_LINEARIZABLE, G, reason)
    top = G.top_bundle
    chart = G.flag.chart
    which = "R(V^(k-1))" if G.weber is not None else "Char V^(k-1)"
    if chart.time is not None and is_first_integral(top, None):
        return SFLVerdict(SFL, G, f"t is a first integral of {which}", "t")
    if tau is not None and is_first_integral(top, tau):
        return SFLVerdict(OFL_ONLY, G, f"t is not a first integral of {which}; the supplied tau is", "tau")
    return SFLVerdict(OFL_ONLY, G, f"Goursat, but t is not a first integral of {which}")


__all__ = [
    "Absent", "GoursatError", "GoursatVerdict", "Indeterminate", "NoWeberStructure",
    "Obstruction", "PolarProblem", "SFLVerdict", "WeberStructure", "bryant_sub_bundle",
    "engel_rank", "fundamental_bundle", "goursat_verdict", "is_first_integral",
    "polar_problem", "resolvent", "sfl_verdict", "SFL", "OFL_ONLY", "NOT_LINEARIZABLE",
    "INDETERMINATE",
]
