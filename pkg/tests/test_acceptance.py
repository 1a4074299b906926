"""Acceptance criteria 1-9.

Each criterion is a function returning ``(label, ok, detail)`` checks; the
pytest wrappers assert every check, and the conftest prints one PASS/FAIL
line per criterion at the end of the run.  ``python3 tests/test_acceptance.py``
prints the same lines without pytest.
"""

from __future__ import annotations

import io
import json
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

import property_checks as pc
from goursatkit import (
    Distribution,
    DerivedFlag,
    VectorField,
    augmented,
    bracket_table,
    brunovsky_distribution,
    brunovsky_type,
    deceleration,
    engel_rank,
    goursat_verdict,
    is_control_symmetry,
    is_infinitesimal_symmetry,
    lie_bracket,
    load_fixture,
    pfaffian_of,
    predict_augmented_rdt,
    quotient,
    refined_derived_type,
    relative_goursat_verdict,
    sfl_quotient_verdict,
    sfl_verdict,
    sgs_quotient_test,
    sgs_test,
    transversality,
)
from goursatkit.cli.fileformat import parse_field
from goursatkit.cli.main import run
from goursatkit.goursat import INDETERMINATE, OFL_ONLY, SFL, is_first_integral
from goursatkit.symmetry import TransversalityError

FIXTURES = [
    "pvtol", "marino", "charlet", "example0", "example1", "w_system",
    "brunovsky_1_1", "brunovsky_0_2", "brunovsky_1_2_0_0_1",
]
FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "goursatkit" / "fixtures"


def _system(name):
    sf = load_fixture(name)
    return sf, Distribution(sf.chart, sf.generators())


def _check(label, ok, detail=""):
    return (label, bool(ok), detail)


def _span(D, texts):
    return Distribution(D.chart, [parse_field(t, D.chart) for t in texts])


def _cli(argv):
    out = io.StringIO()
    code = run(argv, stdout=out)
    return code, out.getvalue()


# ------------------------------------------------------------------ criteria

def criterion_1():
    start = time.perf_counter()
    sf, D = _system("pvtol")
    flag = DerivedFlag(D)
    rdt = flag.refined_derived_type()
    first = [
        "sin(th)*d_x1 - cos(th)*d_z1",
        "-h*cos(th)*d_x1 - h*sin(th)*d_z1 - d_th1",
    ]
    second = [
        "-sin(th)*d_x + th1*cos(th)*d_x1 + cos(th)*d_z + th1*sin(th)*d_z1",
        "h*cos(th)*d_x + h*th1*sin(th)*d_x1 + h*sin(th)*d_z - h*th1*cos(th)*d_z1",
    ]
    V1 = D.with_fields(_span(D, first).basis)
    V2 = V1.with_fields(_span(D, second).basis)
    verdict = goursat_verdict(flag)
    code, text = _cli(["analyze", str(FIXTURE_DIR / "pvtol.sys")])
    elapsed = time.perf_counter() - start
    return [
        _check("refined derived type", rdt == [[3, 0], [5, 2, 2], [7, 2, 2], [9, 9]], str(rdt)),
        _check("V^(1) spanned by V and the displayed directions", flag.level(1).equals(V1) and V1.rank == 5),
        _check("V^(2) spanned by V^(1) and the displayed directions", flag.level(2).equals(V2) and V2.rank == 7,
               "computed new directions: " + "; ".join(str(X) for X in flag.new_directions[2])),
        *[_check(f"displayed V^(2) direction {i + 1} lies in V^(2)", flag.level(2).contains(parse_field(t, D.chart)), t)
          for i, t in enumerate(second)],
        _check("V^(3) = TM", flag.level(3).rank == D.chart.dim),
        _check("Cauchy and intersection bundles are span{d_u1, d_u2}", all(
            flag.cauchy(i).equals(_span(D, ["d_u1", "d_u2"])) for i in (1, 2)
        ) and all(flag.intersection(i).equals(_span(D, ["d_u1", "d_u2"])) for i in (1, 2))),
        _check("verdict not Goursat", not verdict.is_goursat and "verdict: not Goursat" in text and code == 0),
        _check("under 30 s", elapsed < 30, f"{elapsed:.1f} s"),
    ]


EXPECTED_BRACKETS = [
    ["0", "2X1", "-X2", "0", "-X7", "-X8", "0", "0"],
    ["-2X1", "0", "2X3", "0", "X5", "X6", "-X7", "-X8"],
    ["X2", "-2X3", "0", "0", "0", "0", "-X5", "-X6"],
    ["0", "0", "0", "0", "-X5", "-X6", "-X7", "-X8"],
    ["X7", "-X5", "0", "X5", "0", "0", "0", "0"],
    ["X8", "-X6", "0", "X6", "0", "0", "0", "0"],
    ["0", "X7", "X5", "X7", "0", "0", "0", "0"],
    ["0", "X8", "X6", "X8", "0", "0", "0", "0"],
]


def criterion_2():
    start = time.perf_counter()
    sf, D = _system("pvtol")
    G = sf.symmetries["full"]
    single = {n: is_control_symmetry(G.subalgebra([n]), D).ok for n in G.names}
    infinitesimal = all(is_infinitesimal_symmetry(X, D) for X in G.generators)
    table = bracket_table(G, sf.changes["full"])
    rows = table.rows()
    mismatches = [
        f"[{a},{b}]={rows[i][j]}"
        for i, a in enumerate(table.names)
        for j, b in enumerate(table.names)
        if rows[i][j] != EXPECTED_BRACKETS[i][j]
    ]
    dt = VectorField.coordinate(D.chart, "t")
    X = dict(zip(G.names, G.generators))
    claims = [("[d_t,X4] = -X7", lie_bracket(dt, X["X4"]) + X["X7"]),
              ("[d_t,X5] = X8", lie_bracket(dt, X["X5"]) - X["X8"]),
              ("[d_t,X7] = X6", lie_bracket(dt, X["X7"]) - X["X6"])]
    actual = ", ".join(f"[d_t,{n}] = {lie_bracket(dt, X[n])}" for n in ("X4", "X5", "X7"))
    elapsed = time.perf_counter() - start
    checks = [
        _check("each of X1..X8 is a control symmetry", all(single.values()) and len(single) == 8,
               ", ".join(n for n, ok in single.items() if not ok)),
        _check("each of X1..X8 preserves V", infinitesimal),
        _check("bracket table after the basis change matches all 64 entries", not mismatches and len(rows) == 8,
               "; ".join(mismatches)),
    ]
    for label, diff in claims:
        checks.append(_check(f"extended table: {label}", diff.is_zero(), f"computed {actual}"))
    checks.append(_check("under 60 s", elapsed < 60, f"{elapsed:.1f} s"))
    return checks


def criterion_3():
    sf, D = _system("pvtol")
    flag = DerivedFlag(D)
    checks = []
    for name in ("X5", "X6", "X7", "X8"):
        G = sf.symmetries[name]
        rep = transversality(G, flag)
        hat_rdt = refined_derived_type(augmented(D, G))
        rel = relative_goursat_verdict(D, G, flag)
        checks.append(_check(f"{{{name}}} is 2-transverse", rep.ell == 2, str(rep.ell)))
        checks.append(_check(f"{{{name}}} augmented RDT = [[4,1],[6,3,3],[8,3,3],[9,9]]",
                             hat_rdt == [[4, 1], [6, 3, 3], [8, 3, 3], [9, 9]], f"computed {hat_rdt}"))
        checks.append(_check(f"{{{name}}} relative Goursat is false", not rel.is_relative_goursat))
    for name in ("X5_X6", "X7_X8"):
        G = sf.symmetries[name]
        rep = transversality(G, flag)
        hat_rdt = refined_derived_type(augmented(D, G))
        checks.append(_check(f"{{{name}}} is 2-transverse", rep.ell == 2, str(rep.ell)))
        checks.append(_check(f"{{{name}}} augmented RDT = [[5,2],[7,4,4],[9,9]]",
                             hat_rdt == [[5, 2], [7, 4, 4], [9, 9]], str(hat_rdt)))
        checks.append(_check(f"{{{name}}} SFL quotient", sfl_quotient_verdict(D, G).status == SFL))
    code, text = _cli(["batch", str(FIXTURE_DIR / "pvtol.sys"), "X6", "X5_X6", "--json", "-"])
    rows = {r["algebra"]: r for r in json.loads(text)["rows"]}
    checks.append(_check("batch rows agree with the library",
                         code == 0 and rows["X6"]["relative_goursat"] is False and rows["X5_X6"]["sfl_quotient"] == SFL))
    return checks


def criterion_4():
    sf, D = _system("charlet")
    G = sf.symmetries["translation"]
    hat = augmented(D, G)
    hflag = DerivedFlag(hat)
    char1 = hflag.cauchy(1)
    q = sfl_quotient_verdict(D, G)
    base = sfl_verdict(D)
    return [
        _check("RDT of V", refined_derived_type(D) == [[3, 0], [5, 2, 2], [7, 7]], str(refined_derived_type(D))),
        _check("RDT of V + Gamma", hflag.refined_derived_type() == [[4, 1], [6, 3, 4], [7, 7]],
               str(hflag.refined_derived_type())),
        _check("Char V^(1)_0 of the augmented bundle = span{d_u1, d_u2, d_x4}",
               hflag.intersection(1).equals(_span(D, ["d_u1", "d_u2", "d_x4"]))),
        _check("t is invariant for Char of the augmented first derived bundle", is_first_integral(char1, None)),
        _check("SFL quotient with kappa = <1,1>", q.status == SFL and q.goursat.signature == [1, 1],
               f"{q.status} {q.goursat.signature}"),
        _check("unaugmented system is not SFL", base.status != SFL, base.status),
    ]


MARINO_QUOTIENT = [
    "d_t - (q1*q2*q4 + q1^2 - q2 - q4)*d_q1 - (q2^2*q4 + q1*q2 - v1)*d_q2 + q4*d_q3 + v2*d_q4",
    "d_v1",
    "d_v2",
]


def criterion_5():
    start = time.perf_counter()
    sf, D = _system("marino")
    G = sf.symmetries["scaling"]
    Q = quotient(D, G, sf.quotients["scaling"])
    expected = [parse_field(t, Q.chart) for t in MARINO_QUOTIENT]
    coefficient_match = len(Q.distribution.generators) == 3 and all(
        (a - b).is_zero() for a, b in zip(Q.distribution.generators, expected)
    )
    q_verdict = sfl_verdict(Q.distribution)
    base = sfl_verdict(D)
    elapsed = time.perf_counter() - start
    return [
        _check("quotient generators equal the displayed fields coefficient by coefficient", coefficient_match,
               "; ".join(str(X) for X in Q.distribution.generators)),
        _check("numeric pushforward validation", Q.max_relative_error < 1e-20, f"{float(Q.max_relative_error):.1e}"),
        _check("quotient is SFL", q_verdict.status == SFL, q_verdict.status),
        _check("quotient SFL read off the augmented bundle", sfl_quotient_verdict(D, G).status == SFL),
        _check("original is not SFL", base.status != SFL, base.status),
        _check("under 60 s", elapsed < 60, f"{elapsed:.1f} s"),
    ]


def criterion_6():
    sf, D = _system("example0")
    flag = DerivedFlag(D)
    verdict = goursat_verdict(flag)
    Y = sf.fields
    chart = D.chart
    x1 = parse_field("x1*d_t", chart).coeffs[0]
    x2 = parse_field("x2*d_t", chart).coeffs[0]
    sigma = [Y["Y1"] + Y["Y2"].scale(x1), Y["Y3"].scale(x1) - Y["Y1"].scale(x2)]
    expected_R = Distribution(chart, [VectorField.coordinate(chart, "u1"), VectorField.coordinate(chart, "u2")] + sigma)
    weber = verdict.weber
    L = sfl_verdict(verdict)
    L_tau = sfl_verdict(verdict, tau=sf.taus["s"])
    singular = Distribution(chart, list(weber.singular) + list(flag.cauchy(1).basis)) if weber else None
    return [
        _check("Goursat with kappa = <0,2>", verdict.is_goursat and verdict.signature == [0, 2], str(verdict.signature)),
        _check("singular bundle lifts to span{Y1 + x1 Y2, x1 Y3 - x2 Y1} mod Char",
               singular is not None and singular.equals(expected_R)),
        _check("resolvent equals span{d_u1, d_u2, Y1 + x1 Y2, x1 Y3 - x2 Y1}",
               weber is not None and weber.resolvent.equals(expected_R) and expected_R.rank == 4),
        _check("resolvent is integrable", weber is not None and weber.integrable),
        _check("not SFL", L.status != SFL, L.status),
        _check("orbitally linearizable only", L.status == OFL_ONLY and L.is_ofl, L.status),
        _check("a supplied time scale tau is a first integral of the resolvent", L_tau.independence == "tau"),
    ]


def criterion_7():
    sf, D = _system("example1")
    flag = DerivedFlag(D)
    verdict = goursat_verdict(flag)
    ob = verdict.obstruction
    B = flag.intersection(2)
    witness_ok = False
    if ob is not None and ob.witness:
        lhs, rhs = ob.witness.split(" = ")
        a, b = lhs.strip("[]").split(", ")
        Xa, Xb = parse_field(a, D.chart), parse_field(b, D.chart)
        br = lie_bracket(Xa, Xb)
        witness_ok = (B.contains(Xa) and B.contains(Xb) and not B.contains(br)
                      and (br - parse_field(rhs, D.chart)).is_zero())
    return [
        _check("refined derived type",
               flag.refined_derived_type() == [[4, 0], [7, 3, 3], [10, 6, 7], [12, 9, 10], [13, 13]],
               str(flag.refined_derived_type())),
        _check("Char V^(2)_1 is not integrable", ob is not None and "V^(2)_1" in ob.detail, ob.detail if ob else "-"),
        _check("the witness bracket leaves Char V^(2)_1", witness_ok, ob.witness if ob else "-"),
        _check("Engel rank of ann V^(1) is 2", engel_rank(flag.level(1).annihilator()) == 2),
        _check("not Goursat", not verdict.is_goursat),
    ]


def criterion_8():
    sf, D = _system("w_system")
    G = sf.symmetries["gamma"]
    flag = DerivedFlag(D)
    rep = transversality(G, flag)
    predicted = predict_augmented_rdt(G, flag, rep)
    computed = refined_derived_type(augmented(D, G))
    target = [[5, 2], [7, 4, 5], [8, 6, 6], [9, 7, 7], [10, 10]]
    K1 = Distribution(D.chart, rep.K[1]) if rep.K[1] else None
    q_prime = [q for q in rep.q_prime if q is not None]
    note = [n for n in rep.notes if n.startswith("p'_3")]
    return [
        _check("r = (0,0,1,1,1)", rep.r[:5] == [0, 0, 1, 1, 1], str(rep.r)),
        _check("K_1 = span{d_x2}", K1 is not None and K1.equals(_span(D, ["d_x2"]))),
        _check("all q'_j in range vanish", q_prime and all(q == 0 for q in q_prime), str(rep.q_prime)),
        _check("predicted augmented RDT", predicted == target, str(predicted)),
        _check("predicted equals computed", predicted == computed, str(computed)),
        # the worked example calls these bundles trivial in one place and lists
        # P'_3 = span{Y1} in another; the tool's value is pinned here
        _check("p'_3 regression value 1 with a logged note", rep.p_prime[3] == 1 and len(note) == 1,
               str(rep.p_prime)),
    ]


def _seeded(check, make, cases=100, seed=1729):
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        if not check(*make(rng)):
            failures += 1
    return failures


def criterion_9():
    checks = []
    suites = {
        "bracket antisymmetry": (pc.bracket_antisymmetric, lambda r: (pc.random_field(r), pc.random_field(r))),
        "Jacobi identity": (pc.jacobi_holds, lambda r: tuple(pc.random_field(r, density=0.3) for _ in range(3))),
        "d o d = 0": (pc.dd_vanishes, lambda r: (pc.random_form(r), pc.random_expr(r, 3))),
        "annihilator pairing": (pc.annihilator_pairs_to_zero, lambda r: (pc.random_distribution(r, r.randint(1, 4)),)),
        "rank modularity": (pc.rank_modular, lambda r: (pc.random_distribution(r, r.randint(1, 3)),
                                                        pc.random_distribution(r, r.randint(1, 3)))),
        "normalize idempotence": (pc.normalize_idempotent, lambda r: (pc.random_expr(r, 3),)),
        "derivative vs numeric": (pc.derivative_matches_numeric,
                                  lambda r: (pc.random_expr(r, 3), r.choice(pc.NAMES), r)),
    }
    for label, (check, make) in suites.items():
        failures = _seeded(check, make)
        checks.append(_check(f"{label} over 100 cases", failures == 0, f"{failures} failures"))
    for kappa in ([1, 1], [0, 2], [1, 2, 0, 0, 1]):
        B = brunovsky_distribution(kappa)
        checks.append(_check(f"decel(B_{kappa}) = kappa", deceleration(B) == kappa, str(deceleration(B))))
        checks.append(_check(f"brunovsky_type agrees for {kappa}", refined_derived_type(B) == brunovsky_type(kappa)))
    for name in FIXTURES:
        sf, D = _system(name)
        sgs = sgs_test(pfaffian_of(D)).passed
        status = sfl_verdict(D).status
        checks.append(_check(f"sgs_test and sfl_verdict agree on {name}",
                             status != INDETERMINATE and sgs == (status == SFL), f"{sgs} vs {status}"))
        for gname, G in sf.symmetries.items():
            verdict = sfl_quotient_verdict(D, G).status
            try:
                sgs_q = sgs_quotient_test(D, G).passed
            except TransversalityError:
                sgs_q = False
            checks.append(_check(f"sgs_quotient_test and sfl_quotient_verdict agree on {name}/{gname}",
                                 sgs_q == (verdict == SFL), f"{sgs_q} vs {verdict}"))
    pvtol = str(FIXTURE_DIR / "pvtol.sys")
    outputs = {_cli(["batch", pvtol, "--jobs", str(j), "--json", "-"])[1] for j in (1, 2, 4)}
    checks.append(_check("batch report identical across 1, 2 and 4 threads", len(outputs) == 1))
    repeat = {_cli(["analyze", str(FIXTURE_DIR / "example0.sys"), "--json", "-"])[1] for _ in range(2)}
    checks.append(_check("analyze report identical across runs", len(repeat) == 1))
    return checks


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance_criterion(number, record_criterion):
    checks = record_criterion(number, CRITERIA[number]())
    failed = [f"{label}: {detail}" for label, ok, detail in checks if not ok]
    assert not failed, "\n".join(failed)


if __name__ == "__main__":
    for number, fn in CRITERIA.items():
        checks = fn()
        bad = [c for c in checks if not c[1]]
        print(("PASS" if not bad else "FAIL") + f" criterion {number}"
              + ("" if not bad else ": " + "; ".join(f"{label} ({detail})" for label, _, detail in bad)))
