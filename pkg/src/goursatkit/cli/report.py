"""Structured reports: one nested dict per command, rendered as JSON or indented text."""

from __future__ import annotations

import json
from typing import Any

from ..config import collect_warnings, current_config
from ..flags import DerivedFlag, refined_derived_type
from ..geometry import Distribution
from ..goursat import INDETERMINATE, GoursatVerdict, SFLVerdict, goursat_verdict, sfl_verdict
from ..sgs import DegenerateTau, pfaffian_of, sgs_quotient_test, sgs_test
from ..symmetry import (
    BracketClosureError,
    SymmetryAlgebra,
    SymmetryError,
    TransversalityError,
    augmented,
    bracket_table,
    is_control_admissible,
    is_control_symmetry,
    is_infinitesimal_symmetry,
    predict_augmented_rdt,
    predicted_quotient_signature,
    quotient,
    relative_goursat_verdict,
    sfl_quotient_verdict,
    transversality,
)
from .fileformat import SystemFile

SCHEMA = "goursatkit.report/1"


def _header(command: str, sf: SystemFile) -> dict:
    cfg = current_config()
    return {
        "schema": SCHEMA,
        "command": command,
        "system": sf.name,
        "seed": cfg.seed,
        "config": cfg.as_dict(),
    }


def _fields(fields) -> list[str]:
    return [str(X) for X in fields]


def _status_phrase(G: GoursatVerdict, L: SFLVerdict) -> str:
    if L.status == INDETERMINATE:
        return "indeterminate"
    if not G.is_goursat:
        return "not Goursat"
    sig = str(G.signature)
    if L.status == "SFL":
        return f"SFL, kappa={sig}"
    return f"Goursat {sig}; OFL-only"


def flag_section(flag: DerivedFlag) -> dict:
    k = flag.derived_length
    levels = []
    for i in range(k + 1):
        entry = {
            "level": i,
            "rank": flag.level(i).rank,
            "new_directions": _fields(flag.new_directions[i]) if i else _fields(flag.level(0).basis),
            "cauchy": _fields(flag.cauchy(i).basis),
        }
        if 1 <= i <= k:
            entry["intersection"] = _fields(flag.intersection(i).basis)
        levels.append(entry)
    return {
        "ranks": flag.ranks,
        "derived_length": k,
        "bracket_generating": flag.bracket_generating,
        "levels": levels,
    }


def goursat_section(G: GoursatVerdict) -> dict:
    out: dict[str, Any] = {
        "is_goursat": G.is_goursat,
        "relative": G.relative,
        "indeterminate": G.indeterminate,
        "signature": list(G.signature.rho) if G.signature else None,
        "obstruction": G.obstruction.as_dict() if G.obstruction else None,
        "notes": list(G.notes),
    }
    if G.weber is not None:
        out["resolvent"] = {
            "singular_bundle": _fields(G.weber.singular),
            "resolvent": _fields(G.weber.resolvent.basis),
            "integrable": G.weber.integrable,
        }
    if G.fundamental is not None:
        out["fundamental_bundle"] = _fields(G.fundamental.basis)
    return out


def _sgs_entry(I, tau) -> dict:
    try:
        res = sgs_test(I, tau)
    except DegenerateTau as err:
        return {"tau": str(tau) if tau is not None else "t", "error": str(err)}
    return {"tau": res.tau, "passed": res.passed, "levels": res.levels}


def analyze_distribution(D: Distribution, taus: dict | None = None) -> dict:
    flag = DerivedFlag(D)
    rdt = flag.refined_derived_type()
    G = goursat_verdict(flag)
    tau_list = list((taus or {}).items())
    L = sfl_verdict(G)
    for _, tau in tau_list:
        if L.status == "OFL_ONLY" and L.independence == "none":
            alt = sfl_verdict(G, tau=tau)
            if alt.independence == "tau":
                L = alt
    out = {
        "refined_derived_type": rdt.to_list(),
        "velocity": flag.velocity(),
        "deceleration": list(flag.deceleration().rho),
        "flag": flag_section(flag),
        "goursat": goursat_section(G),
        "linearization": {"status": L.status, "reason": L.reason, "independence": L.independence},
        "verdict": _status_phrase(G, L),
    }
    if flag.chart.time is not None and flag.bracket_generating:
        I = pfaffian_of(flag)
        sgs = {"ranks": I.ranks, "t": _sgs_entry(I, None)}
        for name, tau in tau_list:
            sgs[name] = _sgs_entry(I, tau)
        out["sgs"] = sgs
    return out


def analyze_report(sf: SystemFile) -> dict:
    with collect_warnings() as log:
        D = Distribution(sf.chart, sf.generators())
        rep = _header("analyze", sf)
        rep["chart"] = {
            "coordinates": [[c.name, c.role] for c in sf.chart.coords],
            "constants": list(sf.chart.constants),
        }
        rep["distribution"] = {name: str(X) for name, X in sf.distribution}
        rep.update(analyze_distribution(D, sf.taus))
    rep["warnings"] = log.items()
    return rep


def _algebra(sf: SystemFile, name: str) -> SymmetryAlgebra:
    if name not in sf.symmetries:
        raise KeyError(f"no symmetry block named {name!r}")
    return sf.symmetries[name]


def symmetry_section(D: Distribution, G: SymmetryAlgebra, flag: DerivedFlag, change=None) -> dict:
    out: dict[str, Any] = {
        "generators": {n: str(X) for n, X in zip(G.names, G.generators)},
        "infinitesimal_symmetry": {n: is_infinitesimal_symmetry(X, D) for n, X in zip(G.names, G.generators)},
    }
    cs = is_control_symmetry(G, D)
    out["control_symmetry"] = {
        "verdict": cs.ok,
        "time_invariant": dict(zip(G.names, cs.time_invariant)),
        "feedback_form": dict(zip(G.names, cs.feedback_form)),
        "projection_rank": cs.projection_rank,
        "dim": cs.dim,
        "reasons": cs.reasons,
    }
    out["control_symmetry_per_generator"] = {
        n: is_control_symmetry(G.subalgebra([n]), D).ok for n in G.names
    }
    adm = is_control_admissible(G, D, flag)
    out["control_admissible"] = {
        "verdict": adm.ok,
        "strongly_transverse": adm.strongly_transverse,
        "dimension_ok": adm.dimension_ok,
        "reasons": adm.reasons,
    }
    try:
        T = bracket_table(G, change)
        out["bracket_table"] = {"names": T.names, "rows": T.rows()}
    except BracketClosureError as err:
        out["bracket_table"] = {"error": str(err), "witness": err.witness}
    except SymmetryError as err:
        out["bracket_table"] = {"error": str(err)}
    rep = transversality(G, flag)
    out["transversality"] = rep.as_dict()
    if rep.ell is None:
        out["augmented"] = {"error": "Gamma meets V; the augmented bundle is not a direct sum"}
        return out
    try:
        hat = augmented(D, G)
    except TransversalityError as err:
        out["augmented"] = {"error": str(err)}
        return out
    predicted = predict_augmented_rdt(G, flag, rep)
    hat_flag = DerivedFlag(hat)
    computed = hat_flag.refined_derived_type()
    out["augmented"] = {
        "predicted_rdt": predicted.to_list(),
        "computed_rdt": computed.to_list(),
        "agree": predicted == computed,
        "predicted_signature": list(predicted_quotient_signature(G, flag, rep).rho),
        "computed_deceleration": list(hat_flag.deceleration().rho),
    }
    rel = relative_goursat_verdict(D, G, flag)
    out["relative_goursat"] = {
        "verdict": rel.is_relative_goursat,
        "signature": list(rel.signature.rho) if rel.signature else None,
        "obstruction": rel.goursat.obstruction.as_dict() if rel.goursat and rel.goursat.obstruction else None,
        "notes": rel.notes,
    }
    sq = sfl_quotient_verdict(D, G, rel)
    out["sfl_quotient"] = {"status": sq.status, "reason": sq.reason}
    try:
        sg = sgs_quotient_test(D, G)
        out["sgs_quotient"] = {"passed": sg.passed, "levels": sg.levels}
    except DegenerateTau as err:
        out["sgs_quotient"] = {"error": str(err)}
    return out


def symmetry_report(sf: SystemFile, name: str) -> dict:
    G = _algebra(sf, name)
    with collect_warnings() as log:
        D = Distribution(sf.chart, sf.generators())
        flag = DerivedFlag(D)
        rep = _header("symmetry", sf)
        rep["algebra"] = name
        rep.update(symmetry_section(D, G, flag, sf.changes.get(name)))
    rep["warnings"] = log.items()
    return rep


def quotient_report(sf: SystemFile, name: str, qname: str) -> dict:
    G = _algebra(sf, name)
    if qname not in sf.quotients:
        raise KeyError(f"no quotient block named {qname!r}")
    spec = sf.quotients[qname]
    with collect_warnings() as log:
        D = Distribution(sf.chart, sf.generators())
        Q = quotient(D, G, spec)
        rep = _header("quotient", sf)
        rep["algebra"] = name
        rep["quotient"] = qname
        rep["chart"] = {
            "coordinates": [[c.name, c.role] for c in Q.chart.coords],
            "constants": list(Q.chart.constants),
        }
        rep["section"] = {k: str(v) for k, v in Q.section.items()}
        rep["distribution"] = _fields(Q.distribution.generators)
        rep["validation_max_relative_error"] = f"{float(Q.max_relative_error):.1e}"
        rep.update(analyze_distribution(Q.distribution))
    rep["warnings"] = log.items()
    return rep


def batch_row(sf: SystemFile, D: Distribution, flag: DerivedFlag, name: str) -> dict:
    row: dict[str, Any] = {"algebra": name}
    try:
        G = _algebra(sf, name)
        row["dim"] = G.dim
        rep = transversality(G, flag)
        row["ell"] = rep.ell
        row["r"] = rep.r
        if rep.ell is None:
            row["error"] = "Gamma meets V"
            return row
        predicted = predict_augmented_rdt(G, flag, rep)
        row["predicted_rdt"] = predicted.to_list()
        row["augmented_rdt"] = refined_derived_type(augmented(D, G)).to_list()
        row["predicted_signature"] = list(predicted_quotient_signature(G, flag, rep).rho)
        rel = relative_goursat_verdict(D, G, flag)
        row["relative_goursat"] = rel.is_relative_goursat
        row["sfl_quotient"] = sfl_quotient_verdict(D, G, rel).status
    except (KeyError, SymmetryError, ArithmeticError) as err:
        row["error"] = str(err)
    return row


def sgs_report(sf: SystemFile, tau=None) -> dict:
    with collect_warnings() as log:
        D = Distribution(sf.chart, sf.generators())
        I = pfaffian_of(D)
        rep = _header("sgs", sf)
        rep["ranks"] = I.ranks
        rep["generators"] = [str(w) for w in I.generators]
        res = sgs_test(I, tau)
        rep["tau"] = res.tau
        rep["levels"] = res.levels
        rep["passed"] = res.passed
        L = sfl_verdict(D)
        rep["sfl_status"] = L.status
    rep["warnings"] = log.items()
    return rep


# ---------------------------------------------------------------- rendering

def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v):
        return json.dumps(v, ensure_ascii=False).replace('"', "")
    return str(v)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _render(obj, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, dict):
                lines.append(f"{pad}{key}:")
                _render(value, indent + 1, lines)
            elif isinstance(value, list) and value and any(isinstance(x, dict) for x in value):
                lines.append(f"{pad}{key}:")
                for item in value:
                    lines.append(f"{pad}  -")
                    _render(item, indent + 2, lines)
            elif isinstance(value, list) and value and all(isinstance(x, str) for x in value) and len(value) > 1:
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}  - {x}" for x in value)
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    else:
        lines.append(pad + _scalar(obj))


def to_text(report: dict) -> str:
    lines: list[str] = []
    _render(report, 0, lines)
    return "\n".join(lines) + "\n"


__all__ = [
    "SCHEMA", "analyze_distribution", "analyze_report", "batch_row", "quotient_report",
    "sgs_report", "symmetry_report", "to_json", "to_text",
]
