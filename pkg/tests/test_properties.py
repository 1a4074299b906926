"""Randomised identity checks driven by hypothesis seeds."""

import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import property_checks as pc

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)
SLOW = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@SLOW
@given(SEEDS)
def test_bracket_is_antisymmetric(seed):
    rng = random.Random(seed)
    assert pc.bracket_antisymmetric(pc.random_field(rng), pc.random_field(rng))


@SLOW
@given(SEEDS)
def test_jacobi_identity(seed):
    rng = random.Random(seed)
    X, Y, Z = (pc.random_field(rng, density=0.4) for _ in range(3))
    assert pc.jacobi_holds(X, Y, Z)


@SLOW
@given(SEEDS)
def test_exterior_derivative_squares_to_zero(seed):
    rng = random.Random(seed)
    assert pc.dd_vanishes(pc.random_form(rng), pc.random_expr(rng))


@SLOW
@given(SEEDS, st.integers(min_value=1, max_value=4))
def test_annihilator_kills_distribution(seed, rank):
    rng = random.Random(seed)
    assert pc.annihilator_pairs_to_zero(pc.random_distribution(rng, rank))


@SLOW
@given(SEEDS, st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))
def test_sum_and_intersection_ranks(seed, ra, rb):
    rng = random.Random(seed)
    assert pc.rank_modular(pc.random_distribution(rng, ra), pc.random_distribution(rng, rb))


@SLOW
@given(SEEDS)
def test_normalize_is_idempotent(seed):
    assert pc.normalize_idempotent(pc.random_expr(random.Random(seed), depth=3))


@SLOW
@given(SEEDS, st.sampled_from(pc.NAMES))
def test_symbolic_derivative_matches_numeric(seed, var):
    rng = random.Random(seed)
    assert pc.derivative_matches_numeric(pc.random_expr(rng), var, rng)
