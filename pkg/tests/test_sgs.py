import pytest

from goursatkit import Distribution, brunovsky_distribution, pfaffian_of, sgs_quotient_test, sgs_test
from goursatkit.cli.fileformat import parse_field
from goursatkit.expr import is_zero
from goursatkit.geometry import Chart
from goursatkit.sgs import DegenerateTau, PfaffianSystem


def test_pfaffian_levels_annihilate_the_flag():
    B = brunovsky_distribution([0, 1])
    I = pfaffian_of(B)
    # dim 4 with flag ranks 2, 3, 4
    assert I.ranks == [2, 1, 0]
    assert all(is_zero(w.pair(X)) for w in I.levels[0] for X in B.basis)


def test_from_forms_round_trip():
    B = brunovsky_distribution([0, 1])
    I = pfaffian_of(B)
    again = PfaffianSystem.from_forms(B.chart, I.generators)
    assert again.ranks == I.ranks


@pytest.mark.parametrize("kappa", [[1, 1], [0, 2], [0, 0, 1]])
def test_chains_pass_with_time(kappa):
    result = sgs_test(pfaffian_of(brunovsky_distribution(kappa)))
    assert result.passed and result.tau == "t"


def test_orbital_example_needs_another_clock(fixture_system):
    sf, D = fixture_system("example0")
    I = pfaffian_of(D)
    with_t = sgs_test(I)
    assert not with_t and with_t.failed_level == 1
    assert sgs_test(I, sf.taus["s"]).passed


def test_quotient_version(fixture_system):
    sf, D = fixture_system("charlet")
    assert sgs_quotient_test(D, sf.symmetries["translation"]).passed


def test_constant_tau_is_degenerate():
    with pytest.raises(DegenerateTau):
        sgs_test(pfaffian_of(brunovsky_distribution([1])), "3")


def test_tau_inside_the_system_is_degenerate():
    chart = Chart([("x", "state"), ("y", "state"), ("z", "state")])
    D = Distribution(chart, [parse_field("d_x", chart), parse_field("d_y", chart)])
    with pytest.raises(DegenerateTau):
        sgs_test(pfaffian_of(D), "z")


def test_missing_time_needs_tau():
    chart = Chart([("x", "state"), ("y", "state"), ("z", "state")])
    D = Distribution(chart, [parse_field("d_x + y*d_z", chart), parse_field("d_y", chart)])
    with pytest.raises(DegenerateTau):
        sgs_test(pfaffian_of(D))
