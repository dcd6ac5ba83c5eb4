"""Lifts of commuting rotation tuples through SU(2) -> SO(3), and the
splitting of U(2) into a phase and an SU(2) part."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BoundError, NonCommutingError, NonUnitaryError
from .rotations import (
    DEFAULT_TOL,
    Quaternion,
    RotationElement,
    U2Element,
    commutes,
    lift,
    max_abs,
    project,
)

LIFT_CAP = 20


@dataclass(frozen=True)
class LiftSet:
    """All 2^n sign choices of entrywise lifts of an n-tuple."""

    base: tuple[Quaternion, ...]
    members: tuple[tuple[Quaternion, ...], ...]

    def __len__(self) -> int:
        return len(self.members)

    def commuting_members(self, tol: float = DEFAULT_TOL) -> list[tuple[Quaternion, ...]]:
        return [m for m in self.members if quaternions_commute(m, tol)]


def quaternions_commute(qs: Sequence[Quaternion], tol: float = DEFAULT_TOL) -> bool:
    for a, b in itertools.combinations(qs, 2):
        if not (a * b).close_to(b * a, tol):
            return False
    return True


def lift_tuple(elements: Sequence[RotationElement]) -> LiftSet:
    if len(elements) > LIFT_CAP:
        raise BoundError(f"explicit lift enumeration is capped at n = {LIFT_CAP}")
    base = tuple(lift(a) for a in elements)
    members = tuple(
        tuple(q if s > 0 else -q for q, s in zip(base, signs))
        for signs in itertools.product((1, -1), repeat=len(base))
    )
    return LiftSet(base, members)


def lifted_commutator_sign(A: RotationElement, B: RotationElement, tol: float = DEFAULT_TOL) -> int:
    """Sign of qA qB qA^-1 qB^-1 = +-1 for any lifts qA, qB."""
    if not commutes(A, B, tol):
        raise NonCommutingError("lifted commutator sign needs a commuting pair")
    qa, qb = lift(A), lift(B)
    c = qa * qb * qa.conjugate() * qb.conjugate()
    return 1 if c.w > 0 else -1


def commutator_signs(elements: Sequence[RotationElement], tol: float = DEFAULT_TOL) -> list[tuple[int, int, int]]:
    return [
        (i, j, lifted_commutator_sign(elements[i], elements[j], tol))
        for i, j in itertools.combinations(range(len(elements)), 2)
    ]


def decompose_u2(U: U2Element, tol: float = DEFAULT_TOL) -> tuple[float, Quaternion]:
    """U = e^(i theta) S with S in SU(2) and theta in [0, pi), where
    e^(2 i theta) = det U."""
    if not U.is_unitary(tol):
        raise NonUnitaryError("matrix is not unitary within tolerance")
    theta = cmath.phase(np.linalg.det(U.matrix)) / 2
    if theta < 0:
        theta += math.pi
    if theta >= math.pi:
        theta -= math.pi
    S = cmath.exp(-1j * theta) * U.matrix
    q = Quaternion.from_su2(S)
    return theta, q


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_commuting_u2(seed=None) -> tuple[U2Element, U2Element]:
    """Two random diagonal unitaries conjugated by one random unitary."""
    rng = np.random.default_rng(seed)
    W = random_unitary(rng)
    a = rng.uniform(0, 2 * math.pi, size=2)
    b = rng.uniform(0, 2 * math.pi, size=2)
    U = W @ np.diag(np.exp(1j * a)) @ W.conj().T
    V = W @ np.diag(np.exp(1j * b)) @ W.conj().T
    return U2Element(U), U2Element(V)


def su2_projection(U: U2Element, tol: float = DEFAULT_TOL) -> RotationElement:
    """SO(3) image of the SU(2) part of U."""
    _, q = decompose_u2(U, tol)
    return project(q, tol)


def reconstruction_error(U: U2Element, theta: float, q: Quaternion) -> float:
    return max_abs(cmath.exp(1j * theta) * q.to_su2() - U.matrix)
