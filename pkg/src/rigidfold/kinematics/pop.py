"""One-sidedness of a folded state's crease directions."""

from __future__ import annotations

from enum import Enum

import numpy as np
from scipy.optimize import linprog

from .linkage import FoldState

MARGIN_TOL = 1e-9


class PopSide(str, Enum):
    ONE_SIDE = "OneSide"
    MIXED = "Mixed"


def separation_margin(vectors) -> float:
    """Largest ``t`` with ``w . v_i >= t`` for all creases, over ``|w|_inf <= 1``.

    Positive exactly when an open half-space holds every crease vector,
    i.e. when the origin lies outside their convex hull.
    """
    v = np.asarray(vectors, dtype=float)
    m = v.shape[0]
    # variables (w_x, w_y, w_z, t); maximize t
    cost = np.array([0.0, 0.0, 0.0, -1.0])
    a_ub = np.hstack([-v, np.ones((m, 1))])
    b_ub = np.zeros(m)
    bounds = [(-1.0, 1.0)] * 3 + [(None, 1.0)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"half-space LP failed: {res.message}")
    return float(-res.fun)


def verify_pop(state_or_vectors) -> PopSide:
    vectors = state_or_vectors.crease_vectors if isinstance(state_or_vectors, FoldState) else state_or_vectors
    return PopSide.ONE_SIDE if separation_margin(vectors) > MARGIN_TOL else PopSide.MIXED
