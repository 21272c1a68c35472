import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A, P, mixed_labeled, mixed_patterns
from rigidfold.core import FULL_TURN, HALF_TURN, MV, MVAssignment, ccw_angle, sector_angles
from rigidfold.foldability import (
    WitnessKind,
    brute_force_foldable,
    find_cross,
    find_tripod,
    has_birds_foot,
    in_closed_semicircle,
    is_rigidly_foldable_assigned,
    is_rigidly_foldable_unassigned,
    iter_birds_feet,
    pop_capability,
)


def all_m(n):
    return A("M" * n)


def test_tripod_found_at_120_spacing():
    assert find_tripod(P(0, 120, 240), all_m(3), MV.M) == (0, 1, 2)


def test_tripod_closing_gap_of_half_turn_is_excluded():
    assert find_tripod(P(0, 90, 180), all_m(3), MV.M) is None


def test_tripod_absent_on_two_near_lines():
    p = P(0, 170, 180, 350)
    # exhaustive: every triple has some ccw gap of at least 180 degrees
    for triple in itertools.combinations(p.creases, 3):
        gaps = [ccw_angle(triple[k], triple[(k + 1) % 3]) for k in range(3)]
        assert max(gaps) >= HALF_TURN
    assert find_tripod(p, all_m(4), MV.M) is None


def test_cross_found():
    assert find_cross(P(0, 90, 180, 270), all_m(4), MV.M) == (0, 1, 2, 3)
    assert find_cross(P(0, 170, 180, 350), all_m(4), MV.M) == (0, 1, 2, 3)
    assert find_cross(P(0, 90, 180), all_m(3), MV.M) is None


def test_cross_respects_parity():
    assert find_cross(P(0, 90, 180, 270), A("MMMV"), MV.M) is None


def test_semicircle():
    assert in_closed_semicircle([0, 90000, 180000]) == 0
    assert in_closed_semicircle([0, 120000, 240000]) is None
    assert in_closed_semicircle([0, 170000, 180000, 350000]) is None
    assert in_closed_semicircle([42]) == 42


def test_all_valley_degree_four_never_folds():
    for p in (P(0, 90, 180, 270), P(0, 100, 180, 260), P(10, 95, 200, 300)):
        assert has_birds_foot(p, A("VVVV")) is None
        assert not is_rigidly_foldable_assigned(p, A("VVVV"))


def test_valley_tripod_with_one_mountain_folds():
    w = has_birds_foot(P(0, 100, 180, 260), A("VVMV"))
    assert w.kind is WitnessKind.TRIPOD and w.parity is MV.V
    assert w.legs == (0, 1, 3) and w.opposite == 2


def test_mountain_tripod_witness():
    p, mu = P(0, 100, 180, 260), A("MMVM")
    w = has_birds_foot(p, mu)
    assert (w.kind, w.parity, w.legs, w.opposite) == (WitnessKind.TRIPOD, MV.M, (0, 1, 3), 2)
    assert is_rigidly_foldable_assigned(p, mu)


def test_mountain_tripod_plus_valley_folds():
    # M tripod c1 c2 c3 with a single valley c4
    assert is_rigidly_foldable_assigned(P(0, 120, 240, 300), A("MMMV"))


def test_cross_bird_foot_and_its_removal():
    p = P(0, 90, 170, 180, 350)
    mu = A("MVMMM")
    assert brute_force_foldable(p, mu)
    assert is_rigidly_foldable_assigned(p, mu)
    w = has_birds_foot(p, mu)
    assert w.kind is WitnessKind.CROSS and w.legs == (0, 2, 3, 4)
    assert not brute_force_foldable(P(0, 170, 180, 350), A("MMMM"))


def test_unassigned_examples():
    assert is_rigidly_foldable_unassigned(P(0, 90, 180, 270)) == (False, None)
    ok, mu = is_rigidly_foldable_unassigned(P(0, 100, 180, 260))
    assert ok and has_birds_foot(P(0, 100, 180, 260), mu) is not None
    assert is_rigidly_foldable_unassigned(P(0, 20, 170, 175)) == (False, None)


def test_unassigned_cross_witness_uses_the_cross():
    # widest sectors 0-90 and 180-270 are diametrically opposite equal wedges
    ok, mu = is_rigidly_foldable_unassigned(P(0, 90, 135, 180, 270))
    assert ok and str(mu) == "MMVMM"


def test_pop_capability_examples():
    assert pop_capability(P(0, 120, 240, 300), A("MMMV")) == pop_capability(P(0, 120, 240, 300), A("MMMV"))
    cap = pop_capability(P(0, 120, 240, 300), A("MMMV"))
    assert cap.can_pop_up and not cap.can_pop_down
    cap = pop_capability(P(0, 60, 120, 180, 240, 300), A("MVMVMV"))
    assert cap.can_pop_up and cap.can_pop_down
    cap = pop_capability(P(0, 100, 180, 260), A("MMMM"))
    assert cap.can_pop_up and not cap.can_pop_down


@settings(max_examples=400)
@given(mixed_labeled(max_n=10))
def test_fast_detector_matches_oracle(case):
    pattern, mu = case
    assert is_rigidly_foldable_assigned(pattern, mu) == brute_force_foldable(pattern, mu)
    assert (has_birds_foot(pattern, mu) is not None) == brute_force_foldable(pattern, mu)


@settings(max_examples=300)
@given(mixed_labeled(max_n=10))
def test_gap_scan_equivalence(case):
    pattern, mu = case
    for par in (MV.M, MV.V):
        idx = mu.indices(par)
        if not idx:
            continue
        no_witness = find_tripod(pattern, mu, par) is None and find_cross(pattern, mu, par) is None
        in_semi = in_closed_semicircle([pattern.creases[i] for i in idx]) is not None
        assert no_witness == in_semi


@settings(max_examples=200)
@given(mixed_labeled(max_n=10))
def test_witness_invariants(case):
    pattern, mu = case
    c = pattern.creases
    for w in itertools.islice(iter_birds_feet(pattern, mu), 50):
        assert all(mu[i] is w.parity for i in w.legs)
        assert mu[w.opposite] is w.parity.opposite
        legs = [c[i] for i in w.legs]
        if w.kind is WitnessKind.TRIPOD:
            assert all(0 < ccw_angle(legs[k], legs[(k + 1) % 3]) < HALF_TURN for k in range(3))
        else:
            assert (legs[0] + HALF_TURN) % FULL_TURN == legs[2]
            assert (legs[1] + HALF_TURN) % FULL_TURN == legs[3]


@settings(max_examples=150, deadline=None)
@given(mixed_patterns(max_n=8))
def test_unassigned_matches_enumeration(pattern):
    n = pattern.degree
    exists = any(is_rigidly_foldable_assigned(pattern, MVAssignment.from_mask(m, n)) for m in range(1 << n))
    ok, mu = is_rigidly_foldable_unassigned(pattern)
    assert ok == exists
    if ok:
        assert is_rigidly_foldable_assigned(pattern, mu)


@given(mixed_labeled(max_n=10))
def test_parity_symmetry(case):
    pattern, mu = case
    assert is_rigidly_foldable_assigned(pattern, mu) == is_rigidly_foldable_assigned(pattern, mu.flip())


@given(mixed_labeled(max_n=10))
def test_wide_sector_blocks_everything(case):
    pattern, mu = case
    if max(sector_angles(pattern)) >= HALF_TURN:
        assert not is_rigidly_foldable_assigned(pattern, mu)


@given(mixed_labeled(min_n=3, max_n=3))
def test_degree_three_never_folds(case):
    assert not is_rigidly_foldable_assigned(*case)
    assert not brute_force_foldable(*case)
