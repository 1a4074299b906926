import pytest

from goursatkit import (
    Distribution,
    SymmetryAlgebra,
    augmented,
    bracket_table,
    brunovsky_distribution,
    deceleration,
    is_control_admissible,
    is_control_symmetry,
    is_infinitesimal_symmetry,
    predict_augmented_rdt,
    quotient,
    refined_derived_type,
    relative_goursat_verdict,
    sfl_quotient_verdict,
    transversality,
)
from goursatkit.cli.fileformat import parse_field
from goursatkit.config import collect_warnings
from goursatkit.geometry import Chart
from goursatkit.symmetry import BracketClosureError, SymmetryError, TransversalityError

XYZ = Chart([("x", "state"), ("y", "state"), ("z", "state")])


def algebra(chart, *texts):
    return SymmetryAlgebra([parse_field(t, chart) for t in texts])


class TestSymmetryChecks:
    def test_time_translation_of_autonomous_chain(self):
        B = brunovsky_distribution([1])
        assert is_infinitesimal_symmetry(parse_field("d_t", B.chart), B)

    def test_shifting_a_velocity_is_not_a_symmetry(self):
        B = brunovsky_distribution([1])
        # [d_z1_1, X] = d_z1_0 leaves the distribution
        assert not is_infinitesimal_symmetry(parse_field("d_z1_1", B.chart), B)

    def test_translation_is_admissible(self, fixture_system):
        sf, D = fixture_system("charlet")
        report = is_control_admissible(sf.symmetries["translation"], D)
        assert report.ok and report.strongly_transverse and report.dimension_ok

    def test_projection_rank_deficit_is_reported(self, fixture_system):
        sf, D = fixture_system("pvtol")
        report = is_control_symmetry(sf.symmetries["full"], D)
        assert all(report.symmetries)
        assert not report.ok and report.projection_rank < report.dim

    def test_position_shift_of_a_chain_is_admissible(self):
        B = brunovsky_distribution([0, 1])
        assert is_control_admissible(algebra(B.chart, "d_z1_0"), B).ok

    def test_too_many_generators_for_the_states(self):
        chart = Chart([("t", "time"), ("x", "state"), ("u", "control")])
        D = Distribution(chart, [parse_field("d_t + u*d_x", chart), parse_field("d_u", chart)])
        report = is_control_admissible(algebra(chart, "d_x"), D)
        assert not report.dimension_ok and not report.ok


class TestBracketTable:
    def test_abelian_pair(self, fixture_system):
        sf, _ = fixture_system("w_system")
        assert bracket_table(sf.symmetries["gamma"]).rows() == [["0", "0"], ["0", "0"]]

    def test_affine_algebra(self):
        T = bracket_table(algebra(XYZ, "d_x", "x*d_x + d_y"))
        assert T.bracket("X1", "X2") == "X1"
        assert T.bracket("X2", "X1") == "-X1"

    def test_basis_change(self):
        T = bracket_table(algebra(XYZ, "d_x", "x*d_x + d_y"), {"X1": {"X1": 2}})
        assert T.bracket("X1", "X2") == "X1"

    def test_span_must_close(self):
        with pytest.raises(BracketClosureError):
            bracket_table(algebra(XYZ, "d_x", "x*d_y"))

    def test_constants_must_be_constant(self):
        with pytest.raises(BracketClosureError):
            bracket_table(algebra(XYZ, "d_x", "x^2*d_x + d_y"))

    def test_dependent_generators(self):
        with pytest.raises(SymmetryError):
            bracket_table(algebra(XYZ, "d_x", "y*d_x"))


class TestTransversality:
    def test_w_system(self, fixture_system):
        sf, D = fixture_system("w_system")
        with collect_warnings() as log:
            report = transversality(sf.symmetries["gamma"], D)
        assert report.ell == 1 and report.strongly_transverse
        assert report.r == [0, 0, 1, 1, 1, 2]
        assert report.p_prime[3] == 1
        assert any("p'_3" in w for w in log.items())

    def test_prediction_matches_augmented_bundle(self, fixture_system):
        sf, D = fixture_system("w_system")
        G = sf.symmetries["gamma"]
        assert predict_augmented_rdt(G, D) == refined_derived_type(augmented(D, G))

    def test_overlap_with_the_distribution_is_rejected(self, fixture_system):
        sf, D = fixture_system("pvtol")
        with pytest.raises(TransversalityError):
            predict_augmented_rdt(sf.symmetries["full"], D)


class TestQuotient:
    def test_translation_quotient_is_a_chain(self, fixture_system):
        sf, D = fixture_system("charlet")
        G = sf.symmetries["translation"]
        result = quotient(D, G, sf.quotients["translation"])
        assert result.chart.names == ("t", "x1", "x2", "x3", "u1", "u2")
        assert deceleration(result.distribution) == [1, 1]
        assert result.max_relative_error < 1e-30

    def test_relative_verdict_agrees_with_quotient(self, fixture_system):
        sf, D = fixture_system("charlet")
        G = sf.symmetries["translation"]
        rel = relative_goursat_verdict(D, G)
        assert rel.is_relative_goursat and rel.signature == [1, 1]
        assert sfl_quotient_verdict(D, G, rel).is_sfl
