"""Rigid foldability of single-vertex patterns.

A labeled vertex folds rigidly exactly when one parity class contains a
tripod or a cross and the other class is nonempty (a "bird's foot").  A
class contains a tripod or cross exactly when it does not fit in a closed
semicircle, which gives an O(n) decision after sorting.  The exhaustive
scans in :func:`brute_force_foldable` are kept as an independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .core import (
    FULL_TURN,
    HALF_TURN,
    MV,
    CreasePattern,
    MVAssignment,
    ccw_angle,
    check_assignment,
    sector_angles,
)


class WitnessKind(str, Enum):
    TRIPOD = "Tripod"
    CROSS = "Cross"


@dataclass(frozen=True)
class BirdsFootWitness:
    kind: WitnessKind
    parity: MV
    legs: tuple
    opposite: int

    def creases(self) -> tuple:
        """All witness crease indices in ascending (ccw) order."""
        return tuple(sorted(self.legs + (self.opposite,)))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "parity": self.parity.value,
            "legs": list(self.legs),
            "opposite": self.opposite,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BirdsFootWitness":
        return cls(WitnessKind(d["kind"]), MV(d["parity"]), tuple(d["legs"]), d["opposite"])


@dataclass(frozen=True)
class PopCapability:
    # certificate flags only: False does not prove the vertex cannot pop
    can_pop_up: bool
    can_pop_down: bool


def _is_tripod(directions) -> bool:
    a, b, c = directions
    return all(0 < g < HALF_TURN for g in (ccw_angle(a, b), ccw_angle(b, c), ccw_angle(c, a)))


def find_tripod(pattern: CreasePattern, mu: MVAssignment, parity) -> Optional[tuple]:
    """Lexicographically smallest index triple forming a tripod of ``parity``."""
    check_assignment(pattern, mu)
    idx = mu.indices(parity)
    c = pattern.creases
    for triple in itertools.combinations(idx, 3):
        if _is_tripod([c[i] for i in triple]):
            return triple
    return None


def find_cross(pattern: CreasePattern, mu: MVAssignment, parity) -> Optional[tuple]:
    """Lexicographically smallest index quadruple forming a cross of ``parity``."""
    check_assignment(pattern, mu)
    idx = mu.indices(parity)
    c = pattern.creases
    for i, j, k, l in itertools.combinations(idx, 4):
        if (c[i] + HALF_TURN) % FULL_TURN == c[k] and (c[j] + HALF_TURN) % FULL_TURN == c[l]:
            return (i, j, k, l)
    return None


def in_closed_semicircle(directions) -> Optional[int]:
    """Start ``a`` of a closed arc ``[a, a + 180000]`` holding every direction, or None."""
    d = sorted({int(x) % FULL_TURN for x in directions})
    if not d:
        raise ValueError("directions must be nonempty")
    best_gap, start = -1, None
    for k in range(len(d)):
        gap = ccw_angle(d[k - 1], d[k]) or FULL_TURN
        if gap > best_gap:
            best_gap, start = gap, d[k]
    return start if best_gap >= HALF_TURN else None


def _spread(pattern: CreasePattern, mu: MVAssignment, parity) -> bool:
    # True iff the class has a tripod or a cross
    idx = mu.indices(parity)
    if len(idx) < 3:
        return False
    return in_closed_semicircle(pattern.creases[i] for i in idx) is None


def has_birds_foot(
    pattern: CreasePattern, mu: MVAssignment, parity=None
) -> Optional[BirdsFootWitness]:
    """Bird's-foot witness, or None.

    ``parity`` restricts the search to tripods/crosses of that parity.
    Mountains are tried before valleys; tripods before crosses.
    """
    check_assignment(pattern, mu)
    parities = (MV.M, MV.V) if parity is None else (MV(parity),)
    for par in parities:
        others = mu.indices(par.opposite)
        if not others or not _spread(pattern, mu, par):
            continue
        legs = find_tripod(pattern, mu, par)
        kind = WitnessKind.TRIPOD
        if legs is None:
            legs = find_cross(pattern, mu, par)
            kind = WitnessKind.CROSS
        assert legs is not None, "semicircle scan and witness scan disagree"
        return BirdsFootWitness(kind, par, tuple(legs), others[0])
    return None


def iter_birds_feet(pattern: CreasePattern, mu: MVAssignment, parity=None):
    """Every bird's-foot witness: each tripod or cross with each opposite crease."""
    check_assignment(pattern, mu)
    c = pattern.creases
    parities = (MV.M, MV.V) if parity is None else (MV(parity),)
    for par in parities:
        others = mu.indices(par.opposite)
        same = mu.indices(par)
        if not others or len(same) < 3:
            continue
        for triple in itertools.combinations(same, 3):
            if _is_tripod([c[i] for i in triple]):
                for o in others:
                    yield BirdsFootWitness(WitnessKind.TRIPOD, par, triple, o)
        for i, j, k, l in itertools.combinations(same, 4):
            if (c[i] + HALF_TURN) % FULL_TURN == c[k] and (c[j] + HALF_TURN) % FULL_TURN == c[l]:
                for o in others:
                    yield BirdsFootWitness(WitnessKind.CROSS, par, (i, j, k, l), o)


def is_rigidly_foldable_assigned(pattern: CreasePattern, mu: MVAssignment) -> bool:
    check_assignment(pattern, mu)
    n_m = len(mu.indices(MV.M))
    if n_m == 0 or n_m == len(mu):
        return False
    return _spread(pattern, mu, MV.M) or _spread(pattern, mu, MV.V)


def brute_force_foldable(pattern: CreasePattern, mu: MVAssignment) -> bool:
    """Exhaustive triple and antipodal-pair scan; test oracle only."""
    check_assignment(pattern, mu)
    c = pattern.creases
    n = len(c)
    for par in (MV.M, MV.V):
        if not any(mu[i] is par.opposite for i in range(n)):
            continue
        same = [i for i in range(n) if mu[i] is par]
        for i, j, k in itertools.permutations(same, 3):
            gaps = (ccw_angle(c[i], c[j]), ccw_angle(c[j], c[k]), ccw_angle(c[k], c[i]))
            if all(0 < g < HALF_TURN for g in gaps) and sum(gaps) == FULL_TURN:
                return True
        pairs = 0
        for i, j in itertools.combinations(same, 2):
            if ccw_angle(c[i], c[j]) == HALF_TURN:
                pairs += 1
        if pairs >= 2:
            return True
    return False


def is_unspecified_cross(pattern: CreasePattern) -> bool:
    c = pattern.creases
    return (
        len(c) == 4
        and c[2] - c[0] == HALF_TURN
        and c[3] - c[1] == HALF_TURN
    )


def is_rigidly_foldable_unassigned(pattern: CreasePattern) -> tuple:
    """Geometric decision for an unlabeled vertex plus a witness labeling.

    The labeling starts from the widest sector.  If the wedge opposite it is
    bounded by the antipodes of its own creases, those four creases form a
    cross and are labeled M; otherwise the widest sector's creases and any
    crease strictly inside the opposite wedge form a mountain tripod.  Every
    other crease is a valley.
    """
    n = pattern.degree
    sectors = sector_angles(pattern)
    if n < 4 or max(sectors) >= HALF_TURN or is_unspecified_cross(pattern):
        return False, None
    c = pattern.creases
    w = max(range(n), key=lambda i: (sectors[i], -i))
    a, b = w, (w + 1) % n
    anti_a = pattern.index_of(c[a] + HALF_TURN)
    anti_b = pattern.index_of(c[b] + HALF_TURN)
    if anti_a is not None and anti_b is not None and (anti_a + 1) % n == anti_b:
        mountains = {a, b, anti_a, anti_b}
    else:
        lo = (c[a] + HALF_TURN) % FULL_TURN
        width = sectors[w]
        inner = [i for i in range(n) if 0 < ccw_angle(lo, c[i]) < width]
        assert inner, "widest sector must see a crease in its opposite wedge"
        mountains = {a, b, inner[0]}
    mu = MVAssignment(tuple(MV.M if i in mountains else MV.V for i in range(n)))
    return True, mu


def pop_capability(pattern: CreasePattern, mu: MVAssignment) -> PopCapability:
    check_assignment(pattern, mu)
    return PopCapability(
        can_pop_up=_spread(pattern, mu, MV.M),
        can_pop_down=_spread(pattern, mu, MV.V),
    )
