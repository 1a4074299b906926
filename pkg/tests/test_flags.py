import pytest

from goursatkit import (
    DerivedFlag,
    Distribution,
    RefinedDerivedType,
    Signature,
    brunovsky_distribution,
    brunovsky_type,
    cauchy_bundle,
    deceleration,
    refined_derived_type,
    velocity,
)
from goursatkit.cli.fileformat import parse_field
from goursatkit.config import collect_warnings
from goursatkit.flags import FlagError, matches_goursat_type
from goursatkit.geometry import Chart


def test_refined_derived_type_formatting_and_equality():
    rdt = RefinedDerivedType.build([3, 5, 7], [0, 2, 7], [2])
    assert rdt == [[3, 0], [5, 2, 2], [7, 7]]
    assert str(rdt) == "[[3,0],[5,2,2],[7,7]]"
    assert rdt.m == [3, 5, 7] and rdt.chi == [0, 2, 7] and rdt.chi_int == [2]


def test_signature_from_velocity():
    assert Signature([0, 2]).velocity() == [2, 2]
    assert str(Signature([1, 1])) == "<1, 1>"


@pytest.mark.parametrize("kappa", [[2], [1, 1], [0, 2], [0, 0, 3], [1, 2, 0, 0, 1]])
def test_brunovsky_forms_have_their_own_signature(kappa):
    B = brunovsky_distribution(kappa)
    assert deceleration(B) == kappa
    assert refined_derived_type(B) == brunovsky_type(kappa)
    assert matches_goursat_type(refined_derived_type(B))


def test_brunovsky_type_of_one_one():
    # computed by hand: V^(1) picks up d_z1_0 and d_z2_1, V^(2) = TM
    assert brunovsky_type([1, 1]) == [[3, 0], [5, 2, 3], [6, 6]]


def test_velocity_and_levels_of_a_contact_system():
    B = brunovsky_distribution([0, 0, 1])
    flag = DerivedFlag(B)
    assert flag.ranks == [2, 3, 4, 5]
    assert velocity(B) == [1, 1, 1]
    assert flag.bracket_generating


def test_cauchy_bundle_of_contact_plane_is_trivial():
    chart = Chart([("x", "state"), ("y", "state"), ("z", "state")])
    D = Distribution(chart, [parse_field("d_x + y*d_z", chart), parse_field("d_y", chart)])
    assert cauchy_bundle(D).rank == 0


def test_cauchy_bundle_of_first_derived_brunovsky():
    B = brunovsky_distribution([0, 2])
    flag = DerivedFlag(B)
    controls = Distribution(B.chart, [parse_field("d_z1_2", B.chart), parse_field("d_z2_2", B.chart)])
    assert flag.cauchy(1).equals(controls)
    assert flag.intersection(1).equals(controls)


def test_intersection_index_is_checked():
    flag = DerivedFlag(brunovsky_distribution([1, 1]))
    with pytest.raises(FlagError):
        flag.intersection(0)


def test_non_bracket_generating_warns():
    chart = Chart([("x", "state"), ("y", "state"), ("z", "state")])
    D = Distribution(chart, [parse_field("d_x", chart), parse_field("d_y", chart)])
    with collect_warnings() as log:
        DerivedFlag(D).refined_derived_type()
    assert any("bracket generating" in w for w in log.items())
