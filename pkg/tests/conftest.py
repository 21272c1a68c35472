import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from rigidfold.core import FULL_TURN, CreasePattern, MVAssignment, normalize_pattern
from rigidfold.foldability import brute_force_foldable


def P(*degrees):
    return CreasePattern.from_degrees(degrees)


def A(text):
    return MVAssignment.from_string(text)


def oracle_min_forcing(pattern, mu):
    """Minimal forcing size from first principles: brute-force detector plus set enumeration."""
    n = pattern.degree
    foldable = [
        m for m in itertools.product("MV", repeat=n) if brute_force_foldable(pattern, A("".join(m)))
    ]
    target = tuple(str(mu))
    assert target in foldable
    for k in range(n + 1):
        for subset in itertools.combinations(range(n), k):
            agree = [m for m in foldable if all(m[i] == target[i] for i in subset)]
            if agree == [target]:
                return k, len(foldable)
    raise AssertionError("full set must force")


@st.composite
def patterns(draw, min_n=3, max_n=10, grid=None):
    """Crease patterns; ``grid`` (mdeg) draws from multiples so antipodes are common."""
    if grid is not None:
        max_n = min(max_n, FULL_TURN // grid)
    n = draw(st.integers(min_n, max_n))
    if grid is None:
        dirs = draw(st.lists(st.integers(0, FULL_TURN - 1), min_size=n, max_size=n, unique=True))
    else:
        slots = FULL_TURN // grid
        dirs = [grid * k for k in draw(st.lists(st.integers(0, slots - 1), min_size=n, max_size=n, unique=True))]
    return normalize_pattern(dirs)[0]


@st.composite
def labeled(draw, **kw):
    pattern = draw(patterns(**kw))
    labels = draw(st.lists(st.sampled_from("MV"), min_size=pattern.degree, max_size=pattern.degree))
    return pattern, A("".join(labels))


def mixed_patterns(min_n=3, max_n=10):
    return st.one_of(patterns(min_n, max_n), patterns(min_n, max_n, grid=15_000), patterns(min_n, max_n, grid=45_000))


def mixed_labeled(min_n=3, max_n=10):
    return st.one_of(labeled(min_n=min_n, max_n=max_n), labeled(min_n=min_n, max_n=max_n, grid=15_000))


@pytest.fixture
def rng():
    return np.random.default_rng(20141015)


def random_foldable(n, rng):
    """Random (pattern, foldable assignment) pair of degree ``n``."""
    from rigidfold.forcing import foldable_masks, random_pattern

    while True:
        pattern = random_pattern(n, rng)
        masks = foldable_masks(pattern)
        if len(masks):
            return pattern, MVAssignment.from_mask(int(rng.choice(masks)), n)
