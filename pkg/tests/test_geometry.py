import pytest

from goursatkit.cli.fileformat import parse_field
from goursatkit.expr import is_zero, parse
from goursatkit.geometry import (
    AltForm,
    Chart,
    ChartMismatch,
    Distribution,
    OneForm,
    SymMatrix,
    VectorField,
    exact_rank,
    exterior_derivative,
    generic_rank,
    kernel_of_forms,
    lie_bracket,
    nullspace,
    wedge,
)

CHART = Chart([("t", "time"), ("x", "state"), ("y", "state"), ("z", "state"), ("u", "control")])


def F(text, chart=CHART):
    return parse_field(text, chart)


def span(*texts):
    return Distribution(CHART, [F(t) for t in texts])


class TestChart:
    def test_roles_and_lookup(self):
        assert CHART.time == "t"
        assert CHART.names_with_role("state") == ("x", "y", "z")
        assert CHART.index("z") == 3
        assert CHART.dim == 5

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            Chart([("x", "state"), ("x", "control")])

    def test_fields_on_different_charts_do_not_mix(self):
        other = Chart([("t", "time"), ("x", "state")])
        with pytest.raises(ChartMismatch):
            F("d_x") + VectorField.coordinate(other, "x")


class TestBrackets:
    def test_heisenberg(self):
        assert lie_bracket(F("d_x"), F("x*d_y")) == F("d_y")

    def test_bracket_with_self_vanishes(self):
        X = F("sin(y)*d_x + x*d_z")
        assert lie_bracket(X, X).is_structurally_zero

    def test_apply_is_directional_derivative(self):
        assert F("d_x + x*d_y").apply(parse("x*y")) == parse("y + x^2")


class TestDistribution:
    def test_rank_drops_for_dependent_generators(self):
        D = span("d_x", "x*d_x", "d_y")
        assert D.rank == 2

    def test_contains_and_equals(self):
        D = span("d_x + y*d_z", "d_y")
        assert D.contains(F("x*d_x + x*y*d_z"))
        assert not D.contains(F("d_z"))
        assert D.equals(span("d_y", "2*d_x + 2*y*d_z"))

    def test_sum_and_intersection(self):
        A = span("d_x", "d_y")
        B = span("d_y", "d_z")
        assert A.sum(B).rank == 3
        assert A.intersect(B).equals(span("d_y"))

    def test_annihilator_pairs_to_zero(self):
        D = span("d_t + u*d_x", "d_u")
        forms = D.annihilator()
        assert len(forms) == 3
        assert all(is_zero(w.pair(X)) for w in forms for X in D.basis)

    def test_kernel_of_forms_round_trip(self):
        D = span("d_t + u*d_x + x*d_y", "d_u", "d_z")
        assert kernel_of_forms(CHART, D.annihilator()).equals(D)

    def test_contact_plane_is_not_integrable(self):
        D = span("d_x + y*d_z", "d_y")
        ok, witness = D.frobenius_integrable()
        assert not ok
        assert witness is not None

    def test_coordinate_plane_is_integrable(self):
        assert span("d_x", "x*d_y").is_integrable()

    def test_derived(self):
        D = span("d_x + y*d_z", "d_y")
        assert D.derived().equals(span("d_x", "d_y", "d_z"))

    def test_complement(self):
        small = span("d_x")
        big = span("d_x", "d_y", "d_z")
        comp = small.complement_in(big)
        assert len(comp) == 2
        assert small.with_fields(comp).equals(big)


class TestForms:
    def test_differential(self):
        df = OneForm.differential(CHART, parse("x*y"))
        assert df.pair(F("d_x")) == parse("y")

    def test_dd_is_zero(self):
        f = AltForm.function(CHART, parse("sin(x*y)*exp(z)"))
        assert exterior_derivative(exterior_derivative(f)).is_zero()

    def test_wedge_is_alternating(self):
        a = AltForm.from_oneform(OneForm.differential(CHART, parse("x")))
        b = AltForm.from_oneform(OneForm.differential(CHART, parse("y")))
        assert wedge(a, a).is_zero()
        assert (wedge(a, b).scale(parse("1")).coeffs == {k: -v for k, v in wedge(b, a).coeffs.items()})

    def test_contact_form(self):
        theta = AltForm.from_oneform(OneForm(CHART, {"z": 1, "x": parse("-y")}))
        d = exterior_derivative(theta)
        assert not wedge(theta, d).is_zero()


class TestLinalg:
    def test_generic_rank(self):
        rows = [[parse("x"), parse("y")], [parse("x^2"), parse("x*y")]]
        assert generic_rank(rows, 2) == 1

    def test_nullspace(self):
        rows = [[parse("1"), parse("x")], [parse("y"), parse("x*y")]]
        (v,) = nullspace(SymMatrix(rows))
        assert all(is_zero(row[0] * v[0] + row[1] * v[1]) for row in rows)

    def test_exact_rank(self):
        from fractions import Fraction as Fr

        assert exact_rank([[Fr(1), Fr(2)], [Fr(2), Fr(4)]]) == 1
        assert exact_rank([[Fr(1), Fr(2)], [Fr(3), Fr(4)]]) == 2
