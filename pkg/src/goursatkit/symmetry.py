"""Symmetry algebras of control systems: admissibility, transversality, augmented bundles, quotients."""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from .config import current_config, record_warning
from .expr import ZERO, Expr, Point, PoleError, as_expr, eval_exact, eval_numeric, is_zero, sample_point, symbol
from .flags import DerivedFlag, RefinedDerivedType, Signature, cauchy_bundle
from .geometry import Chart, Distribution, OneForm, VectorField, generic_rank, lie_bracket
from .geometry.chart import Coordinate
from .geometry.distribution import combine
from .geometry.linalg import LinalgError, good_points, solve_in_span
from .goursat import INDETERMINATE, NOT_LINEARIZABLE, GoursatVerdict, SFLVerdict, goursat_verdict, sfl_verdict


class SymmetryError(ValueError):
    pass


class TransversalityError(SymmetryError):
    pass


class BracketClosureError(SymmetryError):
    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


class QuotientError(SymmetryError):
    """Raised when a quotient specification does not verify; ``kind`` names the failed check."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclasses.dataclass
class SymmetryAlgebra:
    generators: list[VectorField]
    names: list[str] = dataclasses.field(default_factory=list)

    def __post_init__(self):
        self.generators = list(self.generators)
        if not self.names:
            self.names = [f"X{i + 1}" for i in range(len(self.generators))]
        if len(self.names) != len(self.generators):
            raise SymmetryError("one name per generator is required")
        charts = {g.chart for g in self.generators}
        if len(charts) > 1:
            raise SymmetryError("generators live on different charts")

    @property
    def dim(self) -> int:
        return len(self.generators)

    def distribution(self, chart: Chart | None = None) -> Distribution:
        if not self.generators:
            if chart is None:
                raise SymmetryError("empty algebra needs an explicit chart")
            return Distribution(chart, [])
        return Distribution(self.generators[0].chart, self.generators)

    def subalgebra(self, names: Sequence[str]) -> "SymmetryAlgebra":
        idx = [self.names.index(n) for n in names]
        return SymmetryAlgebra([self.generators[i] for i in idx], [self.names[i] for i in idx])


def _as_algebra(G) -> SymmetryAlgebra:
    if isinstance(G, SymmetryAlgebra):
        return G
    if isinstance(G, VectorField):
        return SymmetryAlgebra([G])
    return SymmetryAlgebra(list(G))


# ------------------------------------------------------------- symmetry tests

def is_infinitesimal_symmetry(X: VectorField, D: Distribution) -> bool:
    """``[X, E]`` lies in ``D`` for every basis field ``E``."""
    if X.chart != D.chart:
        raise SymmetryError("field and distribution live on different charts")
    return D.contains_all([lie_bracket(X, E) for E in D.basis])


@dataclasses.dataclass
class ControlSymmetryReport:
    ok: bool
    symmetries: list[bool]
    time_invariant: list[bool]
    feedback_form: list[bool]
    independent: bool
    projection_rank: int
    dim: int
    reasons: list[str]

    def __bool__(self):
        return self.ok


def _state_rows(G: SymmetryAlgebra, chart: Chart) -> list[list[Expr]]:
    keep = [i for i, c in enumerate(chart.coords) if c.role in ("time", "state")]
    return [[X.coeffs[i] for i in keep] for X in G.generators]


def is_control_symmetry(G, D: Distribution) -> ControlSymmetryReport:
    """Symmetry, ``X(t) = 0`` and a faithful projection to ``(t, x)``."""
    G = _as_algebra(G)
    chart = D.chart
    reasons = []
    sym = [is_infinitesimal_symmetry(X, D) for X in G.generators]
    for name, ok in zip(G.names, sym):
        if not ok:
            reasons.append(f"{name} is not an infinitesimal symmetry")
    if chart.time is not None:
        tt = chart.index(chart.time)
        tinv = [is_zero(X.coeffs[tt]) for X in G.generators]
    else:
        tinv = [True] * G.dim
    for name, ok in zip(G.names, tinv):
        if not ok:
            reasons.append(f"{name}(t) is not zero")
    controls = chart.names_with_role("control")
    state_idx = [i for i, c in enumerate(chart.coords) if c.role in ("time", "state")]
    form = []
    for X in G.generators:
        form.append(all(is_zero(X.coeffs[i].diff(u)) for i in state_idx for u in controls))
    independent = G.dim == 0 or generic_rank([X.coeffs for X in G.generators], chart.dim) == G.dim
    if not independent:
        reasons.append("generators are not pointwise independent")
    rows = _state_rows(G, chart)
    prank = generic_rank(rows, len(state_idx)) if rows and state_idx else 0
    if prank != G.dim:
        reasons.append(f"rank of the (t,x) projection is {prank}, not dim G = {G.dim}")
    ok = all(sym) and all(tinv) and independent and prank == G.dim
    return ControlSymmetryReport(ok, sym, tinv, form, independent, prank, G.dim, reasons)


@dataclasses.dataclass
class AdmissibilityReport:
    ok: bool
    control_symmetry: ControlSymmetryReport
    strongly_transverse: bool
    dimension_ok: bool
    reasons: list[str]

    def __bool__(self):
        return self.ok


def is_control_admissible(G, D: Distribution, flag: DerivedFlag | None = None) -> AdmissibilityReport:
    """Control symmetry, ``Gamma cap V^(1) = 0`` and ``dim G < dim X(M)``."""
    G = _as_algebra(G)
    cs = is_control_symmetry(G, D)
    flag = flag or DerivedFlag(D)
    Gam = G.distribution(D.chart)
    strong = flag.level(1).intersect(Gam).rank == 0
    nstates = len(D.chart.names_with_role("state"))
    dim_ok = G.dim < nstates
    reasons = list(cs.reasons)
    if not strong:
        reasons.append("Gamma meets V^(1)")
    if not dim_ok:
        reasons.append(f"dim G = {G.dim} is not below the number of states {nstates}")
    return AdmissibilityReport(bool(cs) and strong and dim_ok, cs, strong, dim_ok, reasons)


# ------------------------------------------------------------- transversality

@dataclasses.dataclass
class TransversalityReport:
    ell: int | None
    r: list[int]
    transverse: list[Distribution]
    p: list[int | None]
    p_prime: list[int | None]
    q: list[int | None]
    q_prime: list[int | None]
    K: list[list[VectorField]]
    dim: int
    notes: list[str] = dataclasses.field(default_factory=list)

    @property
    def strongly_transverse(self) -> bool:
        return self.ell is not None and self.ell >= 1

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "r": self.r,
            "p": self.p,
            "p_prime": self.p_prime,
            "q": self.q,
            "q_prime": self.q_prime,
            "transverse_bases": [[str(X) for X in T.basis] for T in self.transverse],
            "K": [[str(X) for X in Ks] for Ks in self.K],
            "notes": self.notes,
        }


def transversality(G, D: Distribution | DerivedFlag) -> TransversalityReport:
    """Transverse ranks ``r_i`` and the correction ranks ``p, p', q, q'``.

    ``K_i`` is computed in the original chart: the fields ``X`` of ``V^(i)``
    with ``[X, V^(i)]`` inside ``V^(i) + Gamma_(i+1)``, reported modulo
    ``Char V^(i)``.  Its rank, less ``chi^i``, is ``q_i``; ``q'_j`` subtracts
    ``chi^j_(j-1)`` from the rank of ``K_j cap V^(j-1)``.
    """
    G = _as_algebra(G)
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    chart = flag.chart
    Gam = G.distribution(chart)
    k = flag.derived_length
    transverse = [flag.level(i).intersect(Gam) for i in range(k + 1)]
    r = [T.rank for T in transverse]
    notes = []
    if any(a > b for a, b in zip(r, r[1:])):
        notes.append(f"transverse ranks {r} are not monotone")
    ell = None
    if r and r[0] == 0:
        ell = max(i for i in range(k + 1) if r[i] == 0)
    p = [Gam.intersect(flag.cauchy(i)).rank for i in range(k + 1)]
    p_prime: list[int | None] = [None]
    for j in range(1, k + 1):
        p_prime.append(transverse[j - 1].intersect(flag.cauchy(j)).rank)
    q = []
    K = []
    lifted = []
    for i in range(k):
        Vi = flag.level(i)
        target = Vi.with_fields(transverse[i + 1].basis).pruned()
        Ki = cauchy_bundle(Vi, modulo=target) if target.rank > Vi.rank else flag.cauchy(i)
        C = flag.cauchy(i)
        lifted.append(Ki)
        q.append(Ki.rank - C.rank)
        K.append(C.complement_in(Ki) if Ki.rank > C.rank else [])
    q.append(0)
    K.append([])
    q_prime: list[int | None] = [None]
    for j in range(1, k):
        inter = lifted[j].intersect(flag.level(j - 1))
        q_prime.append(inter.rank - flag.intersection(j).rank)
    q_prime.append(0)
    # the rank formulas only speak about levels whose augmented rank stays below n
    n = chart.dim
    valid = [flag.ranks[i] + G.dim - r[i] < n for i in range(k + 1)]
    for i in range(k + 1):
        if not valid[i]:
            p[i] = None
            q[i] = None
            K[i] = []
            if i >= 1:
                p_prime[i] = None
                q_prime[i] = None
    for j, pj in enumerate(p_prime):
        if pj:
            msg = f"p'_{j} = {pj}: Gamma_{j - 1} meets Char V^({j}) nontrivially"
            notes.append(msg)
            record_warning(msg)
    return TransversalityReport(ell, r, transverse, p, p_prime, q, q_prime, K, G.dim, notes)


def predict_augmented_rdt(G, D: Distribution | DerivedFlag, report: TransversalityReport | None = None) -> RefinedDerivedType:
    """Type numbers of ``V + Gamma`` from the transverse data of ``V``."""
    G = _as_algebra(G)
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    rep = report or transversality(G, flag)
    if rep.ell is None:
        raise TransversalityError("Gamma meets V itself; the augmented bundle is not a direct sum")
    n = flag.chart.dim
    rdt = flag.refined_derived_type()
    m, chi = rdt.m, rdt.chi
    chi_int = [None] + rdt.chi_int + [None]
    r = rep.dim
    rows = []
    for i in range(flag.derived_length + 1):
        m_hat = m[i] + r - rep.r[i]
        if m_hat >= n:
            rows.append((n, n))
            break
        chi_hat = chi[i] + r - rep.p[i] + rep.q[i]
        if i == 0:
            rows.append((m_hat, chi_hat))
        else:
            ci = chi_int[i] + r - rep.p_prime[i] + rep.q_prime[i]
            rows.append((m_hat, ci, chi_hat))
    if len(rows) == 1:
        return RefinedDerivedType(((n, n),))
    return RefinedDerivedType(tuple(rows))


def predicted_quotient_signature(G, D: Distribution | DerivedFlag, report: TransversalityReport | None = None) -> Signature:
    """Deceleration of ``V + Gamma`` from the velocity of ``V`` and the jumps of ``r_i``."""
    G = _as_algebra(G)
    flag = D if isinstance(D, DerivedFlag) else DerivedFlag(D)
    rep = report or transversality(G, flag)
    if rep.ell is None:
        raise TransversalityError("Gamma meets V itself")
    n = flag.chart.dim
    m = flag.ranks
    r = rep.dim
    k_hat = next(i for i in range(len(m)) if m[i] + r - rep.r[i] >= n)
    delta = [m[i] - m[i - 1] for i in range(1, k_hat + 1)]
    nabla = [rep.r[i] - rep.r[i - 1] for i in range(1, k_hat + 1)]
    # the top step is cut at n; the last jump absorbs the remainder
    delta_hat = [d - g for d, g in zip(delta, nabla)]
    delta_hat[-1] = n - (m[k_hat - 1] + r - rep.r[k_hat - 1])
    rho = [delta_hat[j - 1] - delta_hat[j] for j in range(1, len(delta_hat))] + [delta_hat[-1]]
    return Signature(tuple(rho))


# ------------------------------------------------------------ augmented bundle

def augmented(D: Distribution, G) -> Distribution:
    """``V + Gamma``, required to be a direct sum."""
    G = _as_algebra(G)
    if G.dim == 0:
        return D.pruned()
    out = Distribution(D.chart, list(D.basis) + G.generators)
    if out.rank != D.rank + G.dim:
        raise TransversalityError(f"V + Gamma has rank {out.rank}, expected {D.rank + G.dim}")
    return out.pruned()


@dataclasses.dataclass
class RelativeVerdict:
    is_relative_goursat: bool
    goursat: GoursatVerdict | None
    admissibility: AdmissibilityReport
    augmented_rdt: RefinedDerivedType | None
    signature: Signature | None
    notes: list[str]

    def __bool__(self):
        return self.is_relative_goursat


def relative_goursat_verdict(D: Distribution, G, flag: DerivedFlag | None = None) -> RelativeVerdict:
    """Goursat checks on ``V + Gamma`` with a nontrivial Cauchy bundle allowed."""
    G = _as_algebra(G)
    flag = flag or DerivedFlag(D)
    adm = is_control_admissible(G, D, flag)
    notes = []
    if flag.cauchy(0).rank:
        notes.append("Char V is nontrivial; the quotient construction assumes it vanishes")
    if not adm.control_symmetry.ok:
        return RelativeVerdict(False, None, adm, None, None, notes + adm.reasons)
    if not adm:
        notes.extend(adm.reasons)
    try:
        hat = augmented(D, G)
    except TransversalityError as err:
        return RelativeVerdict(False, None, adm, None, None, notes + [str(err)])
    verdict = goursat_verdict(hat, relative=True)
    notes.extend(verdict.notes)
    return RelativeVerdict(verdict.is_goursat, verdict, adm, verdict.rdt, verdict.signature, notes)


def sfl_quotient_verdict(D: Distribution, G, relative: RelativeVerdict | None = None) -> SFLVerdict:
    """Static feedback linearizability of ``V / G`` read off ``V + Gamma``."""
    rel = relative or relative_goursat_verdict(D, G)
    if rel.goursat is None:
        reason = "; ".join(rel.notes) or "not a control symmetry"
        dummy = GoursatVerdict(False, None, 0, None)
        return SFLVerdict(NOT_LINEARIZABLE, dummy, reason)
    if not rel.admissibility.ok:
        out = sfl_verdict(rel.goursat)
        if out.status != INDETERMINATE:
            out = SFLVerdict(NOT_LINEARIZABLE, rel.goursat, "; ".join(rel.admissibility.reasons))
        return out
    return sfl_verdict(rel.goursat)


# ------------------------------------------------------------------- quotient

@dataclasses.dataclass
class QuotientSpec:
    """Invariants ``(name, expression, role)`` and a partial cross-section."""

    invariants: list[tuple[str, Expr, str]]
    cross_section: dict[str, Expr]
    constants: tuple[str, ...] = ()


@dataclasses.dataclass
class QuotientResult:
    distribution: Distribution
    chart: Chart
    section: dict[str, Expr]
    max_relative_error: float
    raw: Distribution | None = None


def _solve_section(spec: QuotientSpec, chart: Chart) -> dict[str, Expr]:
    """Complete the cross-section by solving invariants that are linear in one missing coordinate."""
    section: dict[str, Expr] = {}
    for name, value in spec.cross_section.items():
        if name not in chart.names:
            raise QuotientError("section", f"cross-section names unknown coordinate {name}")
        section[name] = as_expr(value)
    missing = [n for n in chart.names if n not in section]
    progress = True
    while missing and progress:
        progress = False
        for name, phi, _ in spec.invariants:
            partial = phi.subs(section)
            unknown = [y for y in missing if y in partial.free_symbols]
            if len(unknown) != 1:
                continue
            y = unknown[0]
            A = partial.diff(y)
            if y in A.free_symbols or is_zero(A) or any(u in A.free_symbols for u in missing):
                continue
            B = partial.subs({y: ZERO})
            if any(u in B.free_symbols for u in missing if u != y):
                continue
            section[y] = (symbol(name) - B) * A.inverse()
            missing.remove(y)
            progress = True
    if missing:
        raise QuotientError("section", f"cross-section does not determine {', '.join(missing)}")
    return section


def quotient(D: Distribution, G, spec: QuotientSpec, points: int = 5) -> QuotientResult:
    """Push ``D`` through the invariants and restrict to the cross-section."""
    G = _as_algebra(G)
    chart = D.chart
    phis = [phi for _, phi, _ in spec.invariants]
    names = [name for name, _, _ in spec.invariants]
    for X, xname in zip(G.generators, G.names):
        for name, phi in zip(names, phis):
            if not is_zero(X.apply(phi)):
                raise QuotientError("invariance", f"{xname} does not annihilate invariant {name}")
    dphi = [OneForm.differential(chart, phi).coeffs for phi in phis]
    want = chart.dim - G.dim
    got = generic_rank(dphi, chart.dim)
    if got != want or len(phis) != want:
        raise QuotientError("rank", f"invariants have differential rank {got} (count {len(phis)}), need {want}")
    qchart = Chart([Coordinate(name, role) for name, _, role in spec.invariants],
                   constants=spec.constants or chart.constants)
    section = _solve_section(spec, chart)
    allowed = set(qchart.symbols)
    fields = []
    for Z in D.generators:
        comps = []
        for name, phi in zip(names, phis):
            c = Z.apply(phi).subs(section)
            stray = c.free_symbols - allowed
            if stray:
                raise QuotientError("residue", f"coordinate(s) {', '.join(sorted(stray))} survive in the {name} component")
            comps.append(c)
        fields.append(VectorField(qchart, comps))
    err = _validate_quotient(D, phis, section, fields, qchart, points)
    if err > mpmath.mpf(10) ** -20:
        raise QuotientError("numeric", f"pushforward check failed with relative error {mpmath.nstr(err, 5)}")
    raw = Distribution(qchart, fields)
    return QuotientResult(control_normal_form(raw), qchart, section, float(err), raw)


def control_normal_form(D: Distribution) -> Distribution:
    """Drop control components from the other generators when every ``d_u`` lies in ``D``."""
    chart = D.chart
    controls = chart.names_with_role("control")
    if not controls:
        return D
    coord = [VectorField.coordinate(chart, u) for u in controls]
    if not D.contains_all(coord):
        return D
    idx = [chart.index(u) for u in controls]
    out = []
    for Z in D.generators:
        comps = list(Z.coeffs)
        for i in idx:
            comps[i] = ZERO
        R = VectorField(chart, comps)
        if not R.is_structurally_zero:
            out.append(R)
    return Distribution(chart, out + coord)


def _validate_quotient(D, phis, section, fields, qchart, points) -> mpmath.mpf:
    """Compare ``dpi(Z)`` at section points with the constructed fields at their images."""
    cfg = current_config()
    worst = mpmath.mpf(0)
    exprs = list(section.values()) + [c for f in fields for c in f.coeffs]
    index = 10_000
    checked = 0
    with mpmath.workdps(cfg.precision):
        for _, q in good_points(exprs, points, start=index):
            bindings = {name: q.real(name) for name in qchart.symbols}
            upstairs = {name: eval_numeric(e, q) for name, e in section.items()}
            upstairs.update({c: q.real(c) for c in D.chart.constants})
            p = Point.from_bindings(upstairs, cfg.precision)
            try:
                for phi, name in zip(phis, qchart.names):
                    val = eval_numeric(phi, p)
                    scale = max(abs(val), abs(bindings[name]), mpmath.mpf(1))
                    worst = max(worst, abs(val - bindings[name]) / scale)
                for Z, F in zip(D.generators, fields):
                    for phi, c in zip(phis, F.coeffs):
                        a = eval_numeric(Z.apply(phi), p)
                        b = eval_numeric(c, q)
                        worst = max(worst, abs(a - b) / max(abs(a), abs(b), mpmath.mpf(1)))
            except (PoleError, KeyError):
                continue
            checked += 1
    if checked == 0:
        raise QuotientError("numeric", "no sample point could be used to validate the quotient")
    return worst


# -------------------------------------------------------------- bracket table

@dataclasses.dataclass
class BracketTable:
    names: list[str]
    constants: list[list[list[Fraction]]]

    def entry(self, i: int, j: int) -> str:
        parts = []
        for k, c in enumerate(self.constants[i][j]):
            if c == 0:
                continue
            mag = abs(c)
            coef = "" if mag == 1 else (str(mag) if mag.denominator == 1 else f"({mag})")
            sign = "-" if c < 0 else "+"
            parts.append((sign, f"{coef}{self.names[k]}"))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def rows(self) -> list[list[str]]:
        n = len(self.names)
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def bracket(self, a: str, b: str) -> str:
        return self.entry(self.names.index(a), self.names.index(b))


def _apply_change(G: SymmetryAlgebra, change) -> list[VectorField]:
    fields = list(G.generators)
    if not change:
        return fields
    out = list(fields)
    for target, combo in change.items():
        i = G.names.index(target) if isinstance(target, str) else int(target)
        coeffs = [ZERO] * G.dim
        for src, c in combo.items():
            j = G.names.index(src) if isinstance(src, str) else int(src)
            coeffs[j] = coeffs[j] + as_expr(c)
        out[i] = combine(fields, coeffs)
    return out


def bracket_table(G, basis_change: Mapping | None = None) -> BracketTable:
    """Structure constants ``[X_i, X_j] = c^k_ij X_k`` with closure, antisymmetry and Jacobi checks.

    ``basis_change`` maps a generator name to a combination ``{name: coeff}``
    of the original generators; the substitutions are simultaneous.
    """
    G = _as_algebra(G)
    fields = _apply_change(G, basis_change)
    n = len(fields)
    if n == 0:
        return BracketTable([], [])
    chart = fields[0].chart
    rows = [f.coeffs for f in fields]
    if generic_rank(rows, chart.dim) != n:
        raise SymmetryError("generators are not pointwise independent")
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    probe = sample_point(7919)
    for i in range(n):
        for j in range(i + 1, n):
            B = lie_bracket(fields[i], fields[j])
            if B.is_structurally_zero or B.is_zero():
                continue
            try:
                coeffs = solve_in_span(rows, B.coeffs, chart.dim)
            except LinalgError:
                raise BracketClosureError(
                    f"[{G.names[i]}, {G.names[j]}] leaves the span", f"[{G.names[i]}, {G.names[j]}] = {B}"
                ) from None
            consts = []
            for c in coeffs:
                if any(not is_zero(c.diff(v)) for v in chart.names if v in c.free_symbols):
                    raise BracketClosureError(
                        f"[{G.names[i]}, {G.names[j]}] has a non-constant coefficient", str(c)
                    )
                consts.append(_constant_value(c, probe))
            table[i][j] = consts
            table[j][i] = [-c for c in consts]
    _check_jacobi(table, G.names)
    return BracketTable(list(G.names), table)


def _constant_value(c: Expr, probe) -> Fraction:
    """Exact value of a coefficient already known to be constant."""
    if c.is_const:
        return c.const_value()
    if not c.has_functions():
        return eval_exact(c, probe)
    # trigonometric identities: read the number off numerically and rationalize
    with mpmath.workdps(probe.precision):
        value = eval_numeric(c, probe)
        guess = Fraction(mpmath.nstr(value, probe.precision - 5)).limit_denominator(10**6)
        if abs(value - mpmath.mpf(guess.numerator) / guess.denominator) > mpmath.mpf(10) ** -30:
            raise BracketClosureError(f"constant {c} is not a small rational", str(c))
    return guess


def _check_jacobi(c, names) -> None:
    n = len(c)
    for i in range(n):
        for j in range(n):
            if c[i][j] != [-x for x in c[j][i]]:
                raise BracketClosureError(f"table is not antisymmetric at ({names[i]}, {names[j]})")
    for a in range(n):
        for b in range(a + 1, n):
            for d in range(b + 1, n):
                total = [Fraction(0)] * n
                for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
                    for m in range(n):
                        cxy = c[x][y][m]
                        if cxy:
                            for l in range(n):
                                total[l] += cxy * c[m][z][l]
                if any(total):
                    raise BracketClosureError(f"Jacobi identity fails for ({names[a]}, {names[b]}, {names[d]})")


__all__ = [
    "AdmissibilityReport", "BracketClosureError", "BracketTable", "ControlSymmetryReport",
    "QuotientError", "QuotientResult", "QuotientSpec", "RelativeVerdict", "SymmetryAlgebra",
    "SymmetryError", "TransversalityError", "TransversalityReport", "augmented", "bracket_table", "control_normal_form",
    "is_control_admissible", "is_control_symmetry", "is_infinitesimal_symmetry", "predict_augmented_rdt",
    "predicted_quotient_signature", "quotient", "relative_goursat_verdict", "sfl_quotient_verdict",
    "transversality",
]
