"""Damped least-squares refinement of fold angles onto the closure manifold."""

from __future__ import annotations

import numpy as np

from ..core import MV, CreasePattern, MVAssignment
from ..errors import NotFoldable, SignViolation, SolverDiverged
from ..foldability import is_rigidly_foldable_assigned
from .linkage import PI_MARGIN, SIGN_FLOOR, SOLVER_TOL, FoldState, closure_jacobian

MAX_ITER = 200
_TARGET = 1e-13  # iterate past the acceptance tolerance while it is cheap


def _sign_box(signs, floor):
    lo = np.where(signs > 0, floor, -(np.pi - PI_MARGIN))
    hi = np.where(signs > 0, np.pi - PI_MARGIN, -floor)
    return lo, hi


def damped_least_squares(pattern: CreasePattern, rho0, signs=None, floor=0.0, max_iter=MAX_ITER, tol=SOLVER_TOL):
    """Levenberg-Marquardt on ``vec(P - I)`` with minimum-norm steps.

    ``signs`` (+1 valley, -1 mountain) confines each angle to its open
    half-interval; steps are shortened to stay strictly inside it.
    Returns ``(rho, residual, iterations)``; raises SolverDiverged.
    """
    rho = np.array(rho0, dtype=float)
    if signs is not None:
        signs = np.asarray(signs, dtype=float)
        lo, hi = _sign_box(signs, floor)
        inner = np.maximum(floor, 1e-12)
        lo_in = np.where(signs > 0, inner, lo)
        hi_in = np.where(signs > 0, hi, -inner)
        rho = np.clip(rho, lo_in, hi_in)
    E, dP = closure_jacobian(pattern, rho)
    res = float(np.linalg.norm(E))
    lam = 1e-6
    for it in range(max_iter):
        if res <= _TARGET:
            return rho, res, it
        J = dP.reshape(len(rho), 9).T
        r = E.reshape(9)
        step = -J.T @ np.linalg.solve(J @ J.T + lam * np.eye(9), r)
        if signs is not None:
            step = _shorten(rho, step, lo, hi)
        cand = rho + step
        E_c, dP_c = closure_jacobian(pattern, cand)
        res_c = float(np.linalg.norm(E_c))
        if res_c < res:
            rho, E, dP, res = cand, E_c, dP_c, res_c
            lam = max(lam * 0.1, 1e-15)
        else:
            lam *= 10.0
            if lam > 1e8:
                break
    if res <= tol:
        return rho, res, max_iter
    raise SolverDiverged(f"closure residual {res:.3e} after {max_iter} iterations")


def _shorten(rho, step, lo, hi, keep=0.99):
    # fraction-to-boundary rule: never land on or past a bound
    alpha = 1.0
    for r, s, a, b in zip(rho, step, lo, hi):
        if s > 0 and r + s > b:
            alpha = min(alpha, keep * (b - r) / s)
        elif s < 0 and r + s < a:
            alpha = min(alpha, keep * (a - r) / s)
    return max(alpha, 0.0) * step


def assignment_signs(mu: MVAssignment) -> np.ndarray:
    return np.array([1.0 if x is MV.V else -1.0 for x in mu])


def refine_fold_state(
    pattern: CreasePattern,
    mu: MVAssignment,
    rho0,
    tol: float = SOLVER_TOL,
    floor: float = SIGN_FLOOR,
    max_iter: int = MAX_ITER,
) -> FoldState:
    """Polish a seed into a closed, sign-correct fold state."""
    if not is_rigidly_foldable_assigned(pattern, mu):
        raise NotFoldable(f"{mu} has no bird's foot on this pattern")
    rho, res, _ = damped_least_squares(
        pattern, rho0, signs=assignment_signs(mu), floor=floor, max_iter=max_iter, tol=tol
    )
    state = FoldState.from_angles(pattern, rho, mu)
    if state.residual > tol:
        raise SolverDiverged(f"closure residual {state.residual:.3e}")
    if not state.signs_match(mu, floor):
        raise SignViolation("no sign-respecting solution reached from the seed")
    return state
