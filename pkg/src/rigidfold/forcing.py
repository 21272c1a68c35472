"""Minimal forcing sets of rigidly foldable vertices.

Assignments are handled as bitmasks (bit ``i`` set means crease ``i`` is a
mountain).  A crease subset ``F`` forces ``mu`` when no other foldable
assignment agrees with ``mu`` on ``F``, i.e. ``F`` meets every difference
mask ``mu ^ m``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .core import FULL_TURN, HALF_TURN, CreasePattern, MVAssignment, ccw_angle, check_assignment
from .errors import DegreeLimitExceeded, NotFoldable
from .foldability import is_rigidly_foldable_assigned

DEFAULT_MAX_N = 20


def theorem2_bounds(n: int) -> tuple:
    """Closed interval for the minimal forcing set size of a degree-``n`` vertex."""
    if n >= 6:
        return (n - 3, n)
    if n == 5:
        return (2, 4)
    if n == 4:
        return (1, 2)
    raise ValueError(f"no rigidly foldable vertex of degree {n}")


@dataclass(frozen=True)
class ForcingReport:
    n: int
    assignment: MVAssignment
    foldable_count: int
    minimal_set: tuple
    bounds: tuple = field(default=None)

    def __post_init__(self):
        if self.bounds is None:
            object.__setattr__(self, "bounds", theorem2_bounds(self.n))
        object.__setattr__(self, "minimal_set", tuple(self.minimal_set))
        object.__setattr__(self, "bounds", tuple(self.bounds))

    @property
    def size(self) -> int:
        return len(self.minimal_set)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "assignment": str(self.assignment),
            "foldable_count": self.foldable_count,
            "minimal_set": list(self.minimal_set),
            "size": self.size,
            "bounds": list(self.bounds),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForcingReport":
        return cls(
            n=d["n"],
            assignment=MVAssignment.from_string(d["assignment"]),
            foldable_count=d["foldable_count"],
            minimal_set=tuple(d["minimal_set"]),
            bounds=tuple(d["bounds"]),
        )


def _check_limit(n: int, max_n: int) -> None:
    if n > max_n:
        raise DegreeLimitExceeded(f"degree {n} exceeds the limit {max_n}")


def semicircle_masks(pattern: CreasePattern) -> list:
    """Mask of creases in the closed arc starting at each crease."""
    c = pattern.creases
    return [
        sum(1 << j for j in range(len(c)) if ccw_angle(c[i], c[j]) <= HALF_TURN)
        for i in range(len(c))
    ]


def foldable_masks(pattern: CreasePattern, max_n: int = DEFAULT_MAX_N) -> np.ndarray:
    """Sorted mountain-masks of every rigidly foldable assignment."""
    n = pattern.degree
    _check_limit(n, max_n)
    full = (1 << n) - 1
    masks = np.arange(1 << n, dtype=np.int64)
    comp = full ^ masks

    def spread(s):
        # not inside any closed semicircle; a subset of one is inside one anchored at a member
        ok = s != 0
        for h in semicircle_masks(pattern):
            ok &= (s & (full ^ h)) != 0
        return ok

    good = (spread(masks) & (comp != 0)) | (spread(comp) & (masks != 0))
    return masks[good]


def _lex_key(mask: int, n: int) -> str:
    return "".join("M" if (mask >> i) & 1 else "V" for i in range(n))


def enumerate_foldable_assignments(pattern: CreasePattern, max_n: int = DEFAULT_MAX_N) -> list:
    """All foldable assignments, in lexicographic order with M < V."""
    n = pattern.degree
    masks = sorted((int(m) for m in foldable_masks(pattern, max_n)), key=lambda m: _lex_key(m, n))
    return [MVAssignment.from_mask(m, n) for m in masks]


def _differences(pattern, mu, max_n):
    check_assignment(pattern, mu)
    if not is_rigidly_foldable_assigned(pattern, mu):
        raise NotFoldable(f"{mu} is not rigidly foldable on this pattern")
    masks = foldable_masks(pattern, max_n)
    target = mu.mask
    diffs = masks[masks != target] ^ target
    return masks, diffs


def is_forcing(pattern: CreasePattern, mu: MVAssignment, subset, max_n: int = DEFAULT_MAX_N) -> bool:
    _, diffs = _differences(pattern, mu, max_n)
    f = sum(1 << i for i in set(subset))
    return bool(np.all((diffs & f) != 0))


def minimal_forcing_set(pattern: CreasePattern, mu: MVAssignment, max_n: int = DEFAULT_MAX_N) -> ForcingReport:
    """Smallest forcing subset; ties go to the lexicographically smallest index set."""
    masks, diffs = _differences(pattern, mu, max_n)
    n = pattern.degree
    best = tuple(range(n))
    for k in range(n + 1):
        found = None
        for combo in itertools.combinations(range(n), k):
            f = sum(1 << i for i in combo)
            if np.all((diffs & f) != 0):
                found = combo
                break
        if found is not None:
            best = found
            break
    return ForcingReport(n=n, assignment=mu, foldable_count=len(masks), minimal_set=best)


def theorem2_check(report: ForcingReport) -> bool:
    lo, hi = theorem2_bounds(report.n)
    return lo <= report.size <= hi


def random_pattern(n: int, rng: np.random.Generator) -> CreasePattern:
    directions = np.sort(rng.choice(FULL_TURN, size=n, replace=False))
    return CreasePattern(tuple(int(x) for x in directions))


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Per-instance generator; independent of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


@dataclass
class CensusResult:
    n: int
    samples: int
    seed: int
    sizes: Counter
    pairs: int
    violations: int

    def table(self) -> list:
        return sorted(self.sizes.items())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "pairs": self.pairs,
            "violations": self.violations,
            "bounds": list(theorem2_bounds(self.n)),
            "sizes": {str(k): v for k, v in self.table()},
        }


def forcing_census(n: int, samples: int, seed: int = 0, max_n: int = DEFAULT_MAX_N) -> CensusResult:
    """Minimal forcing sizes over every foldable assignment of random foldable geometries."""
    if n < 4:
        raise ValueError("census needs degree >= 4")
    _check_limit(n, max_n)
    sizes = Counter()
    violations = 0
    pairs = 0
    for index in range(samples):
        rng = instance_rng(seed, index)
        while True:
            pattern = random_pattern(n, rng)
            masks = foldable_masks(pattern, max_n)
            if len(masks):
                break
        for m in masks:
            report = minimal_forcing_set(pattern, MVAssignment.from_mask(int(m), n), max_n)
            sizes[report.size] += 1
            pairs += 1
            violations += not theorem2_check(report)
    return CensusResult(n=n, samples=samples, seed=seed, sizes=sizes, pairs=pairs, violations=violations)
