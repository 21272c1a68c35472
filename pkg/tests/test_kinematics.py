import math

import numpy as np
import pytest

from conftest import A, P, random_foldable
from rigidfold.core import MV, degrees_to_mdeg
from rigidfold.errors import CreaseCollision, NotFoldable
from rigidfold.foldability import BirdsFootWitness, WitnessKind, has_birds_foot
from rigidfold.kinematics import (
    FoldState,
    PopSide,
    build_fold_state,
    closure_product,
    closure_residual,
    crease_vectors,
    fold_angles_from_vectors,
    fold_core_birds_foot,
    folding_trajectory,
    insert_crease,
    refine_fold_state,
    squared_residual_gradient,
    verify_pop,
)

KITE = P(0, 100, 180, 260)


def assert_valid(state, mu):
    assert state.residual <= 1e-9
    assert state.signs_match(mu, 1e-3)
    assert np.all(np.abs(state.fold_angles) < np.pi - 1e-6)


def test_flat_residual_is_zero(rng):
    for n in range(3, 12):
        pattern, _ = random_foldable(max(n, 4), rng)
        assert closure_residual(pattern, np.zeros(pattern.degree)) <= 1e-12


def test_single_fold_does_not_close():
    for i in range(4):
        rho = np.zeros(4)
        rho[i] = 0.3
        assert closure_residual(KITE, rho) > 0.1


def test_rotation_convention_pinned():
    # folding crease 0 by a quarter turn lifts crease 1 onto the paper normal
    v = crease_vectors(P(0, 90, 200), [math.pi / 2, 0.0, 0.0])
    np.testing.assert_allclose(v[0], [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(v[1], [0, 0, 1], atol=1e-15)
    assert np.allclose(closure_product(P(0, 90, 200), [0, 0, 0]), np.eye(3))


def test_gradient_matches_central_differences(rng):
    h = 1e-6
    for _ in range(100):
        pattern, _ = random_foldable(int(rng.integers(4, 11)), rng)
        rho = rng.uniform(-3.0, 3.0, pattern.degree)
        g = squared_residual_gradient(pattern, rho)
        fd = np.empty_like(g)
        for i in range(pattern.degree):
            e = np.zeros_like(rho)
            e[i] = h
            fd[i] = (closure_residual(pattern, rho + e) ** 2 - closure_residual(pattern, rho - e) ** 2) / (2 * h)
        assert np.linalg.norm(g - fd) <= 1e-4 * max(np.linalg.norm(fd), 1e-12)


def test_vectors_round_trip_to_angles(rng):
    for _ in range(30):
        pattern, mu = random_foldable(int(rng.integers(4, 9)), rng)
        state = build_fold_state(pattern, mu)
        again = FoldState.from_angles(pattern, state.fold_angles)
        np.testing.assert_allclose(again.crease_vectors, state.crease_vectors, atol=1e-9)
        np.testing.assert_allclose(fold_angles_from_vectors(state.crease_vectors), state.fold_angles, atol=1e-7)


def test_core_tripod():
    w = BirdsFootWitness(WitnessKind.TRIPOD, MV.V, (0, 1, 3), 2)
    state = fold_core_birds_foot(KITE, w, 0.5)
    rho = state.fold_angles
    assert rho[0] > 0 and rho[1] > 0 and rho[3] > 0 and rho[2] < 0
    assert state.residual <= 1e-9


def test_core_cross():
    core = P(0, 45, 90, 180, 270)
    w = BirdsFootWitness(WitnessKind.CROSS, MV.M, (0, 2, 3, 4), 1)
    state = fold_core_birds_foot(core, w, 0.5)
    assert str(state.signs()) == "MVMMM"
    assert state.residual <= 1e-9


def test_core_unfolds_continuously():
    w = BirdsFootWitness(WitnessKind.TRIPOD, MV.V, (0, 1, 3), 2)
    sizes = [np.max(np.abs(fold_core_birds_foot(KITE, w, d).fold_angles)) for d in (0.5, 0.1, 1e-2, 1e-4, 1e-6)]
    assert all(a > b for a, b in zip(sizes, sizes[1:]))
    assert sizes[-1] < 1e-2


def test_core_rejects_wrong_pattern():
    w = BirdsFootWitness(WitnessKind.TRIPOD, MV.V, (0, 1, 3), 2)
    with pytest.raises(ValueError):
        fold_core_birds_foot(P(0, 100, 180, 260, 300), w, 0.5)
    with pytest.raises(ValueError):
        fold_core_birds_foot(KITE, w, 1.0)


def test_insert_valley():
    state = build_fold_state(KITE, A("VVMV"))
    new = insert_crease(state, degrees_to_mdeg(40), MV.V)
    assert new.degree == 5
    assert str(new.signs()) == "VVVMV"
    assert new.residual <= 1e-9


def test_insert_collision():
    state = build_fold_state(KITE, A("VVMV"))
    with pytest.raises(CreaseCollision):
        insert_crease(state, degrees_to_mdeg(100), MV.M)


def test_insert_preserves_and_barely_moves(rng):
    for _ in range(40):
        pattern, mu = random_foldable(int(rng.integers(4, 8)), rng)
        state = build_fold_state(pattern, mu)
        free = sorted(set(range(0, 360000, 1000)) - set(pattern.creases))
        direction = int(rng.choice(free))
        parity = MV.M if rng.random() < 0.5 else MV.V
        new = insert_crease(state, direction, parity)
        k = new.pattern.index_of(direction)
        assert new.residual <= 1e-9
        old = np.delete(new.fold_angles, k)
        assert np.all(np.sign(old) == np.sign(state.fold_angles))
        assert np.max(np.abs(old - state.fold_angles)) <= 0.3
        assert (new.fold_angles[k] > 0) == (parity is MV.V)


def test_refine_keeps_exact_seed():
    state = build_fold_state(KITE, A("VVMV"))
    again = refine_fold_state(KITE, A("VVMV"), state.fold_angles)
    np.testing.assert_allclose(again.fold_angles, state.fold_angles, atol=1e-9)


def test_refine_recovers_from_noise(rng):
    mu = A("VVMV")
    state = build_fold_state(KITE, mu)
    for _ in range(20):
        seed = state.fold_angles + rng.uniform(-0.05, 0.05, 4)
        assert_valid(refine_fold_state(KITE, mu, seed), mu)


def test_refine_gate():
    with pytest.raises(NotFoldable):
        refine_fold_state(KITE, A("VVVV"), np.full(4, 0.1))


def test_build_examples():
    mu = A("VVMV")
    state = build_fold_state(KITE, mu)
    assert_valid(state, mu)
    # mountain tripod with a single valley
    mu = A("MMMV")
    assert_valid(build_fold_state(P(0, 120, 240, 300), mu), mu)


def test_build_degree_ten(rng):
    for _ in range(5):
        pattern, mu = random_foldable(10, rng)
        assert_valid(build_fold_state(pattern, mu), mu)


def test_build_rejects_unfoldable():
    with pytest.raises(NotFoldable):
        build_fold_state(KITE, A("MVMV"))


def test_trajectory_two_steps():
    traj = folding_trajectory(KITE, A("VVMV"), steps=2)
    assert np.all(traj.states[0].fold_angles == 0)
    assert traj.times[0] == 0.0 and traj.times[-1] == 1.0
    assert traj.max_step() <= 0.2
    assert traj.states[-1].signs_match(A("VVMV"))


def test_trajectory_hundred_steps():
    traj = folding_trajectory(KITE, A("VVMV"), steps=100)
    assert len(traj) >= 100
    assert traj.max_residual() <= 1e-9
    assert traj.max_step() <= 0.2
    for s in traj.states[1:]:
        assert s.signs_match(A("VVMV"), 0.0)


def test_trajectory_reversal_and_determinism():
    a = folding_trajectory(KITE, A("VVMV"), steps=30)
    b = folding_trajectory(KITE, A("VVMV"), steps=30)
    np.testing.assert_array_equal(a.angles(), b.angles())
    r = a.reversed()
    assert np.all(r.states[-1].fold_angles == 0)
    assert r.max_step() == a.max_step()
    assert r.times == tuple(1.0 - t for t in reversed(a.times))


def test_trajectory_rejects_one_step():
    with pytest.raises(ValueError):
        folding_trajectory(KITE, A("VVMV"), steps=1)


def test_pop_examples():
    assert verify_pop(FoldState.flat(KITE)) is PopSide.MIXED
    assert verify_pop(np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]], float)) is PopSide.MIXED
    assert verify_pop(np.array([[1, 0, -0.1], [-1, 0, -0.1], [0, 1, -0.1]], float)) is PopSide.ONE_SIDE


def test_bistable_hexagon_pops_both_ways():
    hexagon, mu = P(0, 60, 120, 180, 240, 300), A("MVMVMV")
    up = build_fold_state(hexagon, mu, parity=MV.M)
    down = build_fold_state(hexagon, mu, parity=MV.V)
    assert_valid(up, mu)
    assert_valid(down, mu)
    assert verify_pop(up) is PopSide.ONE_SIDE
    assert verify_pop(down) is PopSide.ONE_SIDE
    # pop-up leaves the creases below the paper plane, pop-down above
    assert np.mean(up.crease_vectors[:, 2]) * np.mean(down.crease_vectors[:, 2]) < 0


def test_mountain_driven_states_pop(rng):
    done = 0
    while done < 15:
        pattern, mu = random_foldable(int(rng.integers(4, 9)), rng)
        if has_birds_foot(pattern, mu, MV.M) is None:
            continue
        assert verify_pop(build_fold_state(pattern, mu, parity=MV.M)) is PopSide.ONE_SIDE
        done += 1
