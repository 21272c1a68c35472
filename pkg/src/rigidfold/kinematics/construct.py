"""Explicit folded states built from a bird's foot.

The 4- or 5-crease core is placed on the unit sphere directly: the two
outer legs sit on the equator a base arc apart and the remaining creases
are apexes of spherical triangles (or a symmetric quadrilateral for a
cross) over that base.  Further creases are added one at a time by
shortening the arc that will hold them and raising a small tent or trough
on it.  Fold angles are read back from the 3D crease vectors.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import FULL_TURN, MV, CreasePattern, MVAssignment, ccw_angle, check_assignment
from ..errors import (
    CreaseCollision,
    DegenerateGeometry,
    NotFoldable,
    RefinementFailed,
    RigidFoldError,
)
from ..foldability import BirdsFootWitness, WitnessKind, has_birds_foot, iter_birds_feet
from .linkage import (
    PI_MARGIN,
    SIGN_FLOOR,
    SOLVER_TOL,
    FoldState,
    fold_angles_from_vectors,
    mdeg_to_rad,
)
from .solver import refine_fold_state

BASE_SHRINK = 0.1  # fraction of the flat base arc removed at target_depth = 1
DEFAULT_DEPTH = 0.5
SHRINK_FRACTION = 0.01
MIN_INSERT_FOLD = 0.01
PERTURBATION_BOUND = 0.3
_DEPTH_RETRIES = 30
_WITNESS_LIMIT = 64


def _equator(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle), 0.0])


def _apex(a: np.ndarray, b: np.ndarray, ra: float, rb: float, side: int = 1) -> np.ndarray:
    """Unit vector at arc distance ``ra`` from ``a`` and ``rb`` from ``b``.

    ``side`` picks the solution on the positive or negative side of the
    plane through ``a`` and ``b`` (oriented by ``a x b``).
    """
    g = float(a @ b)
    det = 1.0 - g * g
    if det <= 1e-15:
        raise DegenerateGeometry("base points coincide or are antipodal")
    ca, cb = math.cos(ra), math.cos(rb)
    la = (ca - g * cb) / det
    lb = (cb - g * ca) / det
    base = la * a + lb * b
    h2 = 1.0 - float(base @ base)
    if h2 < 0.0:
        raise DegenerateGeometry("spherical triangle inequality fails")
    n = np.cross(a, b)
    n /= np.linalg.norm(n)
    return base + side * math.sqrt(h2) * n


def _relabel(witness: BirdsFootWitness, core_degree: int) -> tuple:
    """Rotate the leg order so the opposite crease follows the last leg."""
    legs = list(witness.legs)
    o = witness.opposite
    k = len(legs)
    for r in range(k):
        rot = legs[r:] + legs[:r]
        # opposite lies ccw between rot[-1] and rot[0]
        if (rot[-1] < o < rot[0]) or (rot[-1] > rot[0] and (o > rot[-1] or o < rot[0])):
            return rot
    raise RigidFoldError("opposite crease coincides with a leg")


def fold_core_birds_foot(
    core: CreasePattern, witness: BirdsFootWitness, target_depth: float = DEFAULT_DEPTH
) -> FoldState:
    """Fold a 4-crease tripod or 5-crease cross bird's foot.

    ``witness`` indexes into ``core``, which must consist of exactly the
    witness creases.  Raises DegenerateGeometry when the base arc is too
    short for one of the spherical triangles; a smaller ``target_depth``
    lengthens it.
    """
    if not 0.0 < target_depth < 1.0:
        raise ValueError("target_depth must lie in (0, 1)")
    n = core.degree
    expected = 4 if witness.kind is WitnessKind.TRIPOD else 5
    if n != expected or sorted(witness.creases()) != list(range(n)):
        raise RigidFoldError("core pattern must consist of exactly the witness creases")
    c = core.creases
    legs = _relabel(witness, n)
    o = witness.opposite

    def arc(i, j):
        return mdeg_to_rad(ccw_angle(c[i], c[j]))

    first, last = legs[0], legs[-1]
    upper = sum(arc(legs[k], legs[k + 1]) for k in range(len(legs) - 1))
    lower = arc(last, o) + arc(o, first)
    d = (1.0 - target_depth * BASE_SHRINK) * min(upper, lower, math.pi)

    # first leg at +d/2 and last leg at -d/2 keep the ccw order of the pattern
    pos = {first: _equator(d / 2), last: _equator(-d / 2)}
    A, B = pos[first], pos[last]
    if witness.kind is WitnessKind.TRIPOD:
        mid = legs[1]
        pos[mid] = _apex(A, B, arc(first, mid), arc(mid, last), side=1)
    else:
        l2, l3 = legs[1], legs[2]
        g12, g23 = arc(first, l2), arc(l2, l3)
        y = math.sin(g23 / 2)
        x = (math.cos(g12) - y * math.sin(d / 2)) / math.cos(d / 2)
        z2 = 1.0 - x * x - y * y
        if z2 < 0.0:
            raise DegenerateGeometry("symmetric quadrilateral does not close")
        # mirror pair about the bisector plane y = 0, on the a x b side like the apex below
        h = -math.sqrt(z2)
        pos[l2] = np.array([x, y, h])
        pos[l3] = np.array([x, -y, h])
    pos[o] = _apex(A, B, arc(o, first), arc(last, o), side=1)

    rho = fold_angles_from_vectors([pos[i] for i in range(n)])
    leg_signs = {bool(rho[i] > 0) for i in legs}
    if len(leg_signs) != 1 or (rho[o] > 0) in leg_signs or np.any(np.abs(rho) < 1e-12):
        raise DegenerateGeometry("core construction lost its bird's-foot signs")
    legs_are_valley = leg_signs.pop()
    if legs_are_valley != (witness.parity is MV.V):
        # mirroring through the paper plane negates every fold angle
        rho = -rho
    labels = [witness.parity if i in legs else witness.parity.opposite for i in range(n)]
    state = FoldState.from_angles(core, rho, MVAssignment(tuple(labels)))
    if np.any(np.abs(rho) >= np.pi - PI_MARGIN):
        raise DegenerateGeometry("core fold reached a flat-folded crease")
    return state


def _rotate(p, axis, t):
    return p * math.cos(t) + np.cross(axis, p) * math.sin(t) + axis * (axis @ p) * (1.0 - math.cos(t))


def _shrink_arc(vectors, moving, pivot, other, target):
    """Turn ``vectors[moving]`` about ``vectors[pivot]`` until its arc to ``vectors[other]`` is ``target``."""
    p, k, q = vectors[moving], vectors[pivot], vectors[other]
    kp, kq = k @ p, k @ q
    A = p @ q - kp * kq
    B = np.cross(k, p) @ q
    C = kp * kq
    R = math.hypot(A, B)
    if R < 1e-15:
        return None
    ratio = (math.cos(target) - C) / R
    if abs(ratio) > 1.0:
        return None
    phi = math.atan2(B, A)
    ts = [phi + math.acos(ratio), phi - math.acos(ratio)]
    t = min(((s + math.pi) % (2 * math.pi) - math.pi for s in ts), key=abs)
    out = vectors.copy()
    out[moving] = _rotate(p, k, t)
    return out


def _insert_candidates():
    fracs = [SHRINK_FRACTION * 0.5 ** k for k in range(24)]
    return fracs + [SHRINK_FRACTION * 2 ** k for k in range(1, 6)]


@dataclass(frozen=True)
class TentChoice:
    """How one crease was added: arc shrink fraction, moved endpoint, tent side."""

    direction: int
    parity: MV
    shrink_fraction: float
    move_next: bool
    side: int


@dataclass(frozen=True)
class FoldRecipe:
    """Replayable construction; ``realize(recipe, scale)`` is continuous in ``scale``."""

    pattern: CreasePattern
    assignment: MVAssignment
    witness: BirdsFootWitness
    core_depth: float
    tents: tuple


class _Insertion:
    # bookkeeping shared by the search and the replay
    def __init__(self, state, new_direction, parity, assignment):
        pattern = state.pattern
        if pattern.index_of(new_direction) is not None:
            raise CreaseCollision(f"a crease already lies at {new_direction} mdeg")
        self.direction = new_direction % FULL_TURN
        self.parity = MV(parity)
        c = pattern.creases
        n = self.n = pattern.degree
        self.i = i = (bisect.bisect_left(c, self.direction) - 1) % n
        self.j = (i + 1) % n
        self.a = mdeg_to_rad(ccw_angle(c[i], self.direction))
        self.b = mdeg_to_rad(ccw_angle(self.direction, c[self.j]))
        if self.a + self.b >= math.pi:
            raise RefinementFailed("enclosing sector is not shorter than a half turn")
        self.pattern = CreasePattern(tuple(sorted(c + (self.direction,))))
        self.index = self.pattern.index_of(self.direction)
        old_mu = assignment if assignment is not None else state.assignment
        if old_mu is None:
            old_mu = state.signs()
        labels = list(old_mu.labels)
        labels.insert(self.index, self.parity)
        self.mu = MVAssignment(tuple(labels))
        self.old_positions = [k if k < self.index else k + 1 for k in range(n)]
        self.vectors = state.crease_vectors

    def angles(self, fraction, move_next, side):
        n, i, j = self.n, self.i, self.j
        target = (self.a + self.b) * (1.0 - fraction)
        if move_next:
            moved = _shrink_arc(self.vectors, j, (j + 1) % n, i, target)
        else:
            moved = _shrink_arc(self.vectors, i, (i - 1) % n, j, target)
        if moved is None:
            return None
        try:
            apex = _apex(moved[i], moved[j], self.a, self.b, side)
        except DegenerateGeometry:
            return None
        loop = list(moved)
        loop.insert(i + 1, apex)
        if self.index == 0:
            # the new crease wrapped past 360 degrees
            loop = loop[-1:] + loop[:-1]
        return fold_angles_from_vectors(loop)


def _search_tent(state, new_direction, parity, assignment, perturbation_bound):
    ins = _Insertion(state, new_direction, parity, assignment)
    old_rho = state.fold_angles
    want_valley = ins.parity is MV.V
    relaxed = None
    for fraction in _insert_candidates():
        for move_next in (False, True):
            for side in (1, -1):
                rho = ins.angles(fraction, move_next, side)
                if rho is None or (rho[ins.index] > 0) != want_valley:
                    continue
                prior = rho[ins.old_positions]
                if np.any(np.sign(prior) != np.sign(old_rho)):
                    continue
                if np.any(np.abs(rho) < SIGN_FLOOR) or np.any(np.abs(rho) >= np.pi - PI_MARGIN):
                    continue
                if np.max(np.abs(prior - old_rho)) > perturbation_bound:
                    continue
                choice = TentChoice(ins.direction, ins.parity, fraction, move_next, side)
                if abs(rho[ins.index]) >= MIN_INSERT_FOLD:
                    return ins, rho, choice
                if relaxed is None:
                    relaxed = (ins, rho, choice)
    if relaxed is not None:
        return relaxed
    raise RefinementFailed(f"no sign-preserving tent found for the crease at {new_direction} mdeg")


def insert_crease(
    state: FoldState,
    new_direction: int,
    parity,
    assignment: Optional[MVAssignment] = None,
    perturbation_bound: float = PERTURBATION_BOUND,
    tol: float = SOLVER_TOL,
) -> FoldState:
    """Add one crease of the given parity to a folded state.

    The arc that will carry the new crease is shortened by rotating one of
    its endpoints about its other neighbour, which moves only that
    endpoint.  The new crease then becomes the apex of a thin spherical
    triangle over the shortened arc whose two sides restore the original
    sector angles.  The shrink starts at 1% of the arc and is halved until
    every earlier crease keeps its sign and moves by at most
    ``perturbation_bound``; a fold of at least 0.01 rad at the new crease
    is preferred.
    """
    ins, rho, _ = _search_tent(state, new_direction, parity, assignment, perturbation_bound)
    return _finish(ins.pattern, ins.mu, rho, tol)


def _finish(pattern, mu, rho, tol):
    state = FoldState.from_angles(pattern, rho, mu)
    if state.residual <= tol * 1e-2:
        return state
    try:
        return refine_fold_state(pattern, mu, rho, tol=tol)
    except RigidFoldError as exc:
        raise RefinementFailed(str(exc)) from exc


def _core_of(pattern: CreasePattern, witness: BirdsFootWitness) -> tuple:
    idx = witness.creases()
    core = CreasePattern(tuple(pattern.creases[i] for i in idx))
    remap = {g: k for k, g in enumerate(idx)}
    core_witness = BirdsFootWitness(
        witness.kind, witness.parity, tuple(remap[g] for g in witness.legs), remap[witness.opposite]
    )
    return idx, core, core_witness


def _fold_core(core, core_witness, target_depth):
    depth = target_depth
    for _ in range(_DEPTH_RETRIES):
        try:
            return fold_core_birds_foot(core, core_witness, depth), depth
        except DegenerateGeometry:
            depth *= 0.5
    raise DegenerateGeometry("core construction failed at every depth tried")


def ranked_witnesses(pattern: CreasePattern, mu: MVAssignment, target_depth=DEFAULT_DEPTH, parity=None, limit=_WITNESS_LIMIT):
    """Witnesses ordered by how well their folded core is conditioned.

    The score is the smallest core fold angle at ``target_depth``; cores
    with a sector close to a half turn only fold a tiny amount and make
    poor seeds for the insertions.  Ties keep enumeration order.
    """
    scored = []
    for pos, w in enumerate(iter_birds_feet(pattern, mu, parity)):
        _, core, core_witness = _core_of(pattern, w)
        try:
            state, _ = _fold_core(core, core_witness, target_depth)
        except DegenerateGeometry:
            continue
        scored.append((-float(np.min(np.abs(state.fold_angles))), pos, w))
    scored.sort(key=lambda x: (x[0], x[1]))
    return [w for _, _, w in scored[:limit]]


def plan_fold(
    pattern: CreasePattern,
    mu: MVAssignment,
    target_depth: float = DEFAULT_DEPTH,
    parity=None,
    witness: Optional[BirdsFootWitness] = None,
) -> FoldRecipe:
    """Choose a core and a tent for every other crease, in ccw order."""
    check_assignment(pattern, mu)
    if has_birds_foot(pattern, mu, parity) is None:
        raise NotFoldable(f"{mu} has no bird's foot" + (f" of parity {parity}" if parity else ""))
    candidates = [witness] if witness is not None else ranked_witnesses(pattern, mu, target_depth, parity)
    last_error = None
    for w in candidates:
        try:
            return _plan_with(pattern, mu, w, target_depth)
        except (DegenerateGeometry, RefinementFailed) as exc:
            last_error = exc
    raise last_error if last_error is not None else DegenerateGeometry("no usable bird's-foot core")


def _plan_with(pattern, mu, witness, target_depth):
    idx, core, core_witness = _core_of(pattern, witness)
    state, depth = _fold_core(core, core_witness, target_depth)
    tents = []
    for k in range(pattern.degree):
        if k in idx:
            continue
        ins, rho, choice = _search_tent(state, pattern.creases[k], mu[k], None, PERTURBATION_BOUND)
        state = FoldState.from_angles(ins.pattern, rho, ins.mu)
        tents.append(choice)
    return FoldRecipe(pattern, mu, witness, depth, tuple(tents))


def realize(recipe: FoldRecipe, scale: float = 1.0) -> FoldState:
    """Replay a recipe with the core depth and every arc shrink scaled by ``scale``.

    ``scale = 1`` gives the planned state; as ``scale`` goes to 0 every
    fold angle goes to 0 continuously.  The result is closed to roundoff
    but is not sign-checked here.
    """
    if scale == 0.0:
        return FoldState.flat(recipe.pattern, recipe.assignment)
    _, core, core_witness = _core_of(recipe.pattern, recipe.witness)
    state = fold_core_birds_foot(core, core_witness, recipe.core_depth * scale)
    for tent in recipe.tents:
        ins = _Insertion(state, tent.direction, tent.parity, None)
        rho = ins.angles(tent.shrink_fraction * scale, tent.move_next, tent.side)
        if rho is None:
            raise DegenerateGeometry(f"tent at {tent.direction} mdeg does not close at scale {scale}")
        state = FoldState.from_angles(ins.pattern, rho, ins.mu)
    return FoldState.from_angles(recipe.pattern, state.fold_angles, recipe.assignment)


def build_fold_state(
    pattern: CreasePattern,
    mu: MVAssignment,
    target_depth: float = DEFAULT_DEPTH,
    parity=None,
    witness: Optional[BirdsFootWitness] = None,
    tol: float = SOLVER_TOL,
) -> FoldState:
    """Folded state of ``(pattern, mu)`` grown from a bird's-foot core.

    ``parity`` picks a tripod/cross of that parity to drive the fold; a
    mountain-driven state pops up and a valley-driven one pops down.
    Without an explicit ``witness`` the best-conditioned cores are tried
    in turn until every insertion succeeds.
    """
    recipe = plan_fold(pattern, mu, target_depth, parity, witness)
    return refine_fold_state(pattern, mu, realize(recipe).fold_angles, tol=tol)
