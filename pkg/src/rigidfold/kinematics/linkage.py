"""Spherical-linkage model of a folded vertex.

The closure product is ``P = prod_i Rx(rho_i) @ Rz(beta_i)``: each factor
first turns about the current crease (the local x axis) by its fold angle,
then about the paper normal (local z) by the following sector angle.  The
vertex closes when ``P`` is the identity.  Crease ``i`` points along
``prefix_i @ e_x`` where ``prefix_i`` is the product of the first ``i``
factors, so crease 0 is always ``e_x`` and the face preceding it is the
reference plane z = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import FULL_TURN, MV, CreasePattern, MVAssignment, sector_angles

SOLVER_TOL = 1e-9
SIGN_FLOOR = 1e-3
PI_MARGIN = 1e-6

_EX = np.array([1.0, 0.0, 0.0])


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def skew(v) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def mdeg_to_rad(mdeg) -> float:
    return mdeg * (2.0 * math.pi / FULL_TURN)


def sector_radians(pattern: CreasePattern) -> np.ndarray:
    return np.array([mdeg_to_rad(s) for s in sector_angles(pattern)])


def _prefixes(pattern: CreasePattern, rho) -> list:
    """Partial products; entry ``i`` is the product of the first ``i`` factors."""
    betas = sector_radians(pattern)
    out = [np.eye(3)]
    for r, b in zip(rho, betas):
        out.append(out[-1] @ rot_x(r) @ rot_z(b))
    return out


def closure_product(pattern: CreasePattern, rho) -> np.ndarray:
    return _prefixes(pattern, rho)[-1]


def closure_residual(pattern: CreasePattern, rho) -> float:
    """Frobenius distance of the closure product from the identity."""
    return float(np.linalg.norm(closure_product(pattern, rho) - np.eye(3)))


def crease_vectors(pattern: CreasePattern, rho) -> np.ndarray:
    pre = _prefixes(pattern, rho)
    return np.array([pre[i] @ _EX for i in range(pattern.degree)])


def closure_jacobian(pattern: CreasePattern, rho) -> tuple:
    """``(P - I, dP)`` with ``dP[i] = d P / d rho_i = skew(crease_i) @ P``."""
    pre = _prefixes(pattern, rho)
    P = pre[-1]
    dP = np.array([skew(pre[i] @ _EX) @ P for i in range(pattern.degree)])
    return P - np.eye(3), dP


def squared_residual_gradient(pattern: CreasePattern, rho) -> np.ndarray:
    """Analytic gradient of ``closure_residual(pattern, rho) ** 2``."""
    E, dP = closure_jacobian(pattern, rho)
    return 2.0 * np.einsum("jk,ijk->i", E, dP)


def fold_angles_from_vectors(vectors) -> np.ndarray:
    """Signed dihedral at each crease of a closed loop of unit vectors.

    Face ``i`` spans crease ``i`` to crease ``i + 1``; the angle at crease
    ``i`` turns face ``i - 1`` into face ``i`` about the crease, positive
    counterclockwise when looking down the crease towards the vertex.
    """
    v = np.asarray(vectors, dtype=float)
    normals = np.cross(v, np.roll(v, -1, axis=0))
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    prev = np.roll(normals, 1, axis=0)
    sin = np.einsum("ij,ij->i", np.cross(prev, normals), v)
    cos = np.einsum("ij,ij->i", prev, normals)
    return np.arctan2(sin, cos)


@dataclass(frozen=True, eq=False)
class FoldState:
    pattern: CreasePattern
    fold_angles: np.ndarray
    crease_vectors: np.ndarray
    residual: float
    assignment: Optional[MVAssignment] = None

    @classmethod
    def from_angles(cls, pattern: CreasePattern, rho, assignment=None) -> "FoldState":
        rho = np.array(rho, dtype=float)
        if rho.shape != (pattern.degree,):
            raise ValueError(f"expected {pattern.degree} fold angles, got shape {rho.shape}")
        pre = _prefixes(pattern, rho)
        vectors = np.array([pre[i] @ _EX for i in range(pattern.degree)])
        residual = float(np.linalg.norm(pre[-1] - np.eye(3)))
        return cls(pattern, rho, vectors, residual, assignment)

    @classmethod
    def flat(cls, pattern: CreasePattern, assignment=None) -> "FoldState":
        return cls.from_angles(pattern, np.zeros(pattern.degree), assignment)

    @property
    def degree(self) -> int:
        return self.pattern.degree

    @property
    def linkage_angles(self) -> np.ndarray:
        """Spherical-linkage vertex angles, the supplements of the fold angles."""
        return np.pi - self.fold_angles

    def signs(self) -> MVAssignment:
        return MVAssignment(tuple(MV.V if r > 0 else MV.M for r in self.fold_angles))

    def signs_match(self, assignment: MVAssignment, floor: float = SIGN_FLOOR) -> bool:
        for r, x in zip(self.fold_angles, assignment):
            if abs(r) < floor or (r > 0) != (x is MV.V):
                return False
        return True

    def is_valid(self, assignment=None, tol=SOLVER_TOL, floor=SIGN_FLOOR) -> bool:
        """Residual, injectivity margin, and (if given) sign checks."""
        assignment = assignment if assignment is not None else self.assignment
        if self.residual > tol:
            return False
        if np.any(np.abs(self.fold_angles) >= np.pi - PI_MARGIN):
            return False
        return assignment is None or self.signs_match(assignment, floor)
