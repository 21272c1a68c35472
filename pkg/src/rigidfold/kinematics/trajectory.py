"""Folding motions from the flat state to a constructed folded state.

The construction that produces the target state is replayed with its core
depth and every arc shrink scaled by ``t``; ``t = 0`` is the flat sheet and
``t = 1`` the target.  Each replayed state is a closed linkage by
construction.  Steps whose fold angles jump by more than the continuity
bound are bisected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import CreasePattern, MVAssignment
from ..errors import RigidFoldError, SubdivisionLimit
from .construct import DEFAULT_DEPTH, plan_fold, realize
from .linkage import SOLVER_TOL, FoldState
from .solver import assignment_signs, damped_least_squares

CONTINUITY_BOUND = 0.2
MAX_SUBDIVISION_DEPTH = 10


@dataclass(frozen=True, eq=False)
class Trajectory:
    states: tuple
    times: tuple

    def __len__(self) -> int:
        return len(self.states)

    def reversed(self) -> "Trajectory":
        return Trajectory(self.states[::-1], tuple(1.0 - t for t in self.times[::-1]))

    def angles(self) -> np.ndarray:
        return np.array([s.fold_angles for s in self.states])

    def max_step(self) -> float:
        a = self.angles()
        return float(np.max(np.abs(np.diff(a, axis=0)))) if len(a) > 1 else 0.0

    def max_residual(self) -> float:
        return max(s.residual for s in self.states)


def _sample(recipe, t, tol, signs):
    state = realize(recipe, t)
    if state.residual > tol:
        rho, _, _ = damped_least_squares(recipe.pattern, state.fold_angles, signs=signs, floor=0.0, tol=tol)
        state = FoldState.from_angles(recipe.pattern, rho, recipe.assignment)
    return state


def folding_trajectory(
    pattern: CreasePattern,
    mu: MVAssignment,
    steps: int = 100,
    target_depth: float = DEFAULT_DEPTH,
    continuity_bound: float = CONTINUITY_BOUND,
    parity=None,
    tol: float = SOLVER_TOL,
) -> Trajectory:
    """Flat-to-folded motion sampled at ``steps`` evenly spaced ``t``.

    Extra samples are inserted wherever a step would exceed
    ``continuity_bound``, down to 2**10 substeps per step.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    recipe = plan_fold(pattern, mu, target_depth, parity)
    signs = assignment_signs(mu)
    grid = np.linspace(0.0, 1.0, steps)
    states = [FoldState.flat(pattern, mu)]
    times = [0.0]

    def advance(prev, t_a, t_b, level):
        nxt = _sample(recipe, t_b, tol, signs)
        if np.max(np.abs(nxt.fold_angles - prev.fold_angles)) <= continuity_bound:
            return [(t_b, nxt)]
        if level >= MAX_SUBDIVISION_DEPTH:
            raise SubdivisionLimit(f"continuity bound {continuity_bound} unreachable near t={t_b:.6f}")
        t_mid = 0.5 * (t_a + t_b)
        first = advance(prev, t_a, t_mid, level + 1)
        return first + advance(first[-1][1], t_mid, t_b, level + 1)

    for t_b in grid[1:]:
        for t, state in advance(states[-1], times[-1], float(t_b), 0):
            times.append(t)
            states.append(state)

    for s in states:
        if s.residual > tol:
            raise RigidFoldError(f"trajectory state with residual {s.residual:.3e}")
    return Trajectory(tuple(states), tuple(times))
