"""Exact angular arithmetic and the single-vertex crease pattern model.

Directions are integers in milli-degrees (mdeg), so a full turn is 360000.
Everything here is integer arithmetic; conversion to radians happens only
in :mod:`rigidfold.kinematics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import (
    DuplicateCrease,
    InexactAngle,
    PartialAssignment,
    RigidFoldError,
    TooFewCreases,
)

FULL_TURN = 360_000
HALF_TURN = 180_000
MDEG_PER_DEG = 1000

# floats must land within 1e-6 degree of an integer mdeg
_FLOAT_SNAP_MDEG = 1e-3


class MV(str, Enum):
    M = "M"
    V = "V"

    @property
    def opposite(self) -> "MV":
        return MV.V if self is MV.M else MV.M

    def __str__(self) -> str:
        return self.value


def as_mdeg(value) -> int:
    """Coerce an angle given in mdeg to an exact integer.

    Floats are accepted only when they sit within 1e-6 degree of an
    integer mdeg; anything further off raises :class:`InexactAngle`.
    """
    if isinstance(value, bool):
        raise InexactAngle(f"not an angle: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Decimal):
        if value != value.to_integral_value():
            raise InexactAngle(f"{value} mdeg is not an integer")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise InexactAngle(f"non-finite angle {value!r}")
    r = round(value)
    if abs(value - r) > _FLOAT_SNAP_MDEG:
        raise InexactAngle(f"{value!r} mdeg is not within 1e-6 degree of an integer mdeg")
    return int(r)


def degrees_to_mdeg(value) -> int:
    """Convert a decimal degree value (str, int, Decimal or float) to mdeg exactly."""
    if isinstance(value, float):
        return as_mdeg(value * MDEG_PER_DEG)
    try:
        d = Decimal(str(value).strip())
    except InvalidOperation:
        raise InexactAngle(f"not a number: {value!r}") from None
    if not d.is_finite():
        raise InexactAngle(f"non-finite angle {value!r}")
    return as_mdeg(d * MDEG_PER_DEG)


def ccw_angle(c: int, d: int) -> int:
    """Counterclockwise angle from direction ``c`` to direction ``d``, in [0, 360000)."""
    return (d - c) % FULL_TURN


@dataclass(frozen=True)
class CreasePattern:
    """Crease directions around one vertex, strictly ascending in [0, 360000)."""

    creases: tuple

    def __post_init__(self):
        creases = tuple(int(c) for c in self.creases)
        object.__setattr__(self, "creases", creases)
        if len(creases) < 3:
            raise TooFewCreases(f"a vertex needs at least 3 creases, got {len(creases)}")
        for c in creases:
            if not 0 <= c < FULL_TURN:
                raise RigidFoldError(f"direction {c} outside [0, {FULL_TURN})")
        for a, b in zip(creases, creases[1:]):
            if b == a:
                raise DuplicateCrease(f"duplicate crease at {a} mdeg")
            if b < a:
                raise RigidFoldError("creases must be strictly ascending; use normalize_pattern")

    @classmethod
    def from_degrees(cls, degrees: Iterable) -> "CreasePattern":
        pattern, _ = normalize_pattern([(degrees_to_mdeg(d), None) for d in degrees])
        return pattern

    @property
    def degree(self) -> int:
        return len(self.creases)

    def __len__(self) -> int:
        return len(self.creases)

    def __iter__(self):
        return iter(self.creases)

    def __getitem__(self, i):
        return self.creases[i]

    def sectors(self) -> tuple:
        return sector_angles(self)

    def index_of(self, direction: int) -> Optional[int]:
        try:
            return self.creases.index(direction % FULL_TURN)
        except ValueError:
            return None

    def degrees(self) -> list:
        return [c / MDEG_PER_DEG for c in self.creases]


@dataclass(frozen=True)
class MVAssignment:
    """Mountain/valley labels in the same order as the pattern's creases."""

    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(MV(x) for x in self.labels))

    @classmethod
    def from_string(cls, text: str) -> "MVAssignment":
        return cls(tuple(text.strip().upper()))

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "MVAssignment":
        """Bit ``i`` set means crease ``i`` is a mountain."""
        return cls(tuple(MV.M if (mask >> i) & 1 else MV.V for i in range(n)))

    @property
    def mask(self) -> int:
        return sum(1 << i for i, x in enumerate(self.labels) if x is MV.M)

    def flip(self) -> "MVAssignment":
        return MVAssignment(tuple(x.opposite for x in self.labels))

    def indices(self, parity: MV) -> list:
        return [i for i, x in enumerate(self.labels) if x is MV(parity)]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __str__(self) -> str:
        return "".join(x.value for x in self.labels)


def check_assignment(pattern: CreasePattern, mu: MVAssignment) -> None:
    if len(mu) != pattern.degree:
        raise RigidFoldError(
            f"assignment has {len(mu)} labels for a degree-{pattern.degree} pattern"
        )


def normalize_pattern(raw: Sequence) -> tuple:
    """Sort ``(angle_mdeg, label-or-None)`` records into a pattern.

    Angles are reduced mod 360000 and labels travel with their crease.
    The assignment is returned only when every crease carries a label.
    """
    if not raw:
        raise TooFewCreases("empty crease list")
    records = []
    for item in raw:
        if isinstance(item, (tuple, list)):
            angle, label = (item[0], item[1]) if len(item) > 1 else (item[0], None)
        else:
            angle, label = item, None
        records.append((as_mdeg(angle) % FULL_TURN, None if label is None else MV(label)))
    records.sort(key=lambda r: r[0])
    for (a, _), (b, _) in zip(records, records[1:]):
        if a == b:
            raise DuplicateCrease(f"two creases at {a} mdeg")
    if len(records) < 3:
        raise TooFewCreases(f"a vertex needs at least 3 creases, got {len(records)}")
    pattern = CreasePattern(tuple(a for a, _ in records))
    labels = [lab for _, lab in records]
    n_labeled = sum(lab is not None for lab in labels)
    if n_labeled == 0:
        return pattern, None
    if n_labeled != len(labels):
        raise PartialAssignment(f"{n_labeled} of {len(labels)} creases labeled")
    return pattern, MVAssignment(tuple(labels))


def sector_angles(pattern: CreasePattern) -> tuple:
    """Cyclic gaps; entry ``i`` runs from crease ``i`` to crease ``i + 1``."""
    c = pattern.creases
    return tuple(ccw_angle(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))
