"""SO(3), SU(2) and U(2) elements, the double cover SU(2) -> SO(3), and the
structure of commuting pairs of rotations.

Unit quaternions stand in for SU(2). All comparisons use a single absolute
tolerance applied to the max-abs entry of a matrix difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import NoAxisError, NonCommutingError, NonUnitaryError, NormError, ParseError

DEFAULT_TOL = 1e-9

_I3 = np.eye(3)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def canonical_axis(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Scale ``v`` to unit length and flip it so its first coordinate with
    magnitude above ``tol`` is positive."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    for c in v:
        if abs(c) > tol:
            if c < 0:
                v = -v
            break
    return v


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def identity(cls) -> Quaternion:
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> Quaternion:
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        s = math.sin(angle / 2)
        return cls(math.cos(angle / 2), *(float(c) * s for c in axis))

    @classmethod
    def from_array(cls, a) -> Quaternion:
        w, x, y, z = (float(c) for c in a)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def is_unit(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.w**2 + self.x**2 + self.y**2 + self.z**2 - 1.0) <= tol

    def conjugate(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> Quaternion:
        n2 = self.w**2 + self.x**2 + self.y**2 + self.z**2
        c = self.conjugate()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Quaternion) -> Quaternion:
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = other.w, other.x, other.y, other.z
        return Quaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 + y1 * w2 + z1 * x2 - x1 * z2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        )

    def close_to(self, other: Quaternion, tol: float = DEFAULT_TOL) -> bool:
        return float(np.max(np.abs(self.as_array() - other.as_array()))) <= tol

    def to_su2(self) -> np.ndarray:
        """The 2x2 complex matrix of this quaternion; i, j, k go to
        diag(i, -i), [[0, 1], [-1, 0]] and [[0, i], [i, 0]]."""
        return np.array(
            [
                [complex(self.w, self.x), complex(self.y, self.z)],
                [complex(-self.y, self.z), complex(self.w, -self.x)],
            ]
        )

    @classmethod
    def from_su2(cls, s) -> Quaternion:
        s = np.asarray(s, dtype=complex)
        return cls(float(s[0, 0].real), float(s[0, 0].imag), float(s[0, 1].real), float(s[0, 1].imag))


@dataclass(frozen=True, eq=False)
class RotationElement:
    """An element of SO(3) stored as its 3x3 matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> RotationElement:
        return cls(_I3)

    @classmethod
    def about(cls, axis, angle: float) -> RotationElement:
        return project(Quaternion.from_axis_angle(axis, angle))

    @classmethod
    def involution(cls, axis) -> RotationElement:
        """Rotation by pi about ``axis``."""
        v = np.asarray(axis, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(2.0 * np.outer(v, v) - _I3)

    @classmethod
    def checked(cls, matrix, tol: float = DEFAULT_TOL) -> RotationElement:
        """Construct after verifying orthogonality and determinant +1."""
        r = cls(matrix)
        if not r.is_rotation(tol):
            raise NormError("matrix is not in SO(3) within tolerance")
        return r

    def __matmul__(self, other: RotationElement) -> RotationElement:
        return RotationElement(self.matrix @ other.matrix)

    def inverse(self) -> RotationElement:
        return RotationElement(self.matrix.T)

    def conjugated_by(self, g: RotationElement) -> RotationElement:
        """g A g^-1."""
        return RotationElement(g.matrix @ self.matrix @ g.matrix.T)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def is_rotation(self, tol: float = DEFAULT_TOL) -> bool:
        m = self.matrix
        return (
            float(np.max(np.abs(m.T @ m - _I3))) <= tol
            and abs(float(np.linalg.det(m)) - 1.0) <= tol
        )

    def is_identity(self, tol: float = DEFAULT_TOL) -> bool:
        return float(np.max(np.abs(self.matrix - _I3))) <= tol

    def is_involution(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.trace + 1.0) <= tol

    def close_to(self, other: RotationElement, tol: float = DEFAULT_TOL) -> bool:
        return max_abs(self.matrix - other.matrix) <= tol

    def apply(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(f"{c:.6g}" for c in row) + "]" for row in self.matrix)
        return f"RotationElement([{rows}])"


@dataclass(frozen=True, eq=False)
class U2Element:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, copy=True)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        m = self.matrix
        return max_abs(m.conj().T @ m - np.eye(2)) <= tol

    def __matmul__(self, other: U2Element) -> U2Element:
        return U2Element(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class CommonAxis:
    axis: np.ndarray

    tag = "common_axis"


@dataclass(frozen=True, eq=False)
class PerpInvolutions:
    v1: np.ndarray
    v2: np.ndarray

    tag = "perp_involutions"


PairStructure = Union[CommonAxis, PerpInvolutions]


def max_abs(a) -> float:
    return float(np.max(np.abs(a)))


def project(q: Quaternion, tol: float = DEFAULT_TOL) -> RotationElement:
    """Image of a unit quaternion under the 2-to-1 cover SU(2) -> SO(3)."""
    if not q.is_unit(tol):
        raise NormError(f"quaternion has norm {q.norm()!r}, expected 1")
    w, x, y, z = q.w, q.x, q.y, q.z
    return RotationElement(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def lift(A: RotationElement) -> Quaternion:
    """One of the two unit quaternions projecting to ``A``.

    Uses the largest of w^2, x^2, y^2, z^2 as pivot, which keeps the result
    accurate near rotations by pi.
    """
    m = A.matrix
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    k = int(np.argmax([tr, m[0, 0], m[1, 1], m[2, 2]]))
    if k == 0:
        w = math.sqrt(max(1.0 + tr, 0.0)) / 2
        q = (w, (m[2, 1] - m[1, 2]) / (4 * w), (m[0, 2] - m[2, 0]) / (4 * w), (m[1, 0] - m[0, 1]) / (4 * w))
    elif k == 1:
        x = math.sqrt(max(1.0 + m[0, 0] - m[1, 1] - m[2, 2], 0.0)) / 2
        q = ((m[2, 1] - m[1, 2]) / (4 * x), x, (m[0, 1] + m[1, 0]) / (4 * x), (m[0, 2] + m[2, 0]) / (4 * x))
    elif k == 2:
        y = math.sqrt(max(1.0 - m[0, 0] + m[1, 1] - m[2, 2], 0.0)) / 2
        q = ((m[0, 2] - m[2, 0]) / (4 * y), (m[0, 1] + m[1, 0]) / (4 * y), y, (m[1, 2] + m[2, 1]) / (4 * y))
    else:
        z = math.sqrt(max(1.0 - m[0, 0] - m[1, 1] + m[2, 2], 0.0)) / 2
        q = ((m[1, 0] - m[0, 1]) / (4 * z), (m[0, 2] + m[2, 0]) / (4 * z), (m[1, 2] + m[2, 1]) / (4 * z), z)
    a = np.array(q, dtype=float)
    return Quaternion.from_array(a / np.linalg.norm(a))


def axis_angle(A: RotationElement, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Axis line and unsigned angle in (0, pi] of a non-identity rotation.

    The axis carries the canonical sign, so the sense of rotation is not
    recoverable from the result.
    """
    if A.is_identity(tol):
        raise NoAxisError("the identity rotates about every axis")
    m = A.matrix
    s = 0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
    c = (np.trace(m) - 1.0) / 2
    sin_t = float(np.linalg.norm(s))
    angle = math.atan2(sin_t, c)
    if c >= 0:
        v = s / sin_t
    else:
        b = 0.5 * (m + m.T) - c * _I3
        j = int(np.argmax(np.diag(b)))
        v = b[:, j] / np.linalg.norm(b[:, j])
    return canonical_axis(v, tol), angle


def commutes(A: RotationElement, B: RotationElement, tol: float = DEFAULT_TOL) -> bool:
    return max_abs(A.matrix @ B.matrix - B.matrix @ A.matrix) <= tol


def _involution_axis(A: RotationElement, tol: float) -> np.ndarray:
    # (A + I) / 2 = v v^T for a rotation by pi
    p = 0.5 * (A.matrix + _I3)
    j = int(np.argmax(np.diag(p)))
    return canonical_axis(p[:, j], tol)


def rotation_axis(A: RotationElement, tol: float = DEFAULT_TOL) -> np.ndarray:
    if A.is_involution(tol):
        return _involution_axis(A, tol)
    return axis_angle(A, tol)[0]


def pair_structure(A: RotationElement, B: RotationElement, tol: float = DEFAULT_TOL) -> PairStructure:
    """Decide which of the two commuting-pair alternatives holds.

    Both-identity pairs get the axis e3 by convention; a single identity
    takes the other element's axis.
    """
    if not commutes(A, B, tol):
        raise NonCommutingError("pair does not commute within tolerance")
    a_id, b_id = A.is_identity(tol), B.is_identity(tol)
    if a_id and b_id:
        return CommonAxis(_frozen([0.0, 0.0, 1.0]))
    if a_id:
        return CommonAxis(_frozen(rotation_axis(B, tol)))
    if b_id:
        return CommonAxis(_frozen(rotation_axis(A, tol)))
    if A.is_involution(tol) and B.is_involution(tol):
        va, vb = _involution_axis(A, tol), _involution_axis(B, tol)
        if np.linalg.norm(np.cross(va, vb)) <= tol:
            return CommonAxis(_frozen(va))
        if abs(float(va @ vb)) <= tol:
            return PerpInvolutions(_frozen(va), _frozen(vb))
        raise NonCommutingError("involution axes are neither colinear nor perpendicular")
    # commuting with a non-involution forces a shared axis; report the
    # better-conditioned one (larger 1 - cos angle)
    best = A if A.trace <= B.trace else B
    return CommonAxis(_frozen(rotation_axis(best, tol)))


def _rng(seed) -> np.random.Generator:
    # PCG64 via numpy's default_rng
    return np.random.default_rng(seed)


def random_axis(rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal(3)
    return g / np.linalg.norm(g)


def random_frame(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal 2-frame from Gram-Schmidt on two Gaussian vectors."""
    g1, g2 = rng.standard_normal(3), rng.standard_normal(3)
    v1 = g1 / np.linalg.norm(g1)
    u = g2 - (g2 @ v1) * v1
    return v1, u / np.linalg.norm(u)


def random_rotation(rng: np.random.Generator) -> RotationElement:
    """Haar-uniform rotation from a normalized Gaussian quaternion."""
    q = rng.standard_normal(4)
    return project(Quaternion.from_array(q / np.linalg.norm(q)))


def sample_plus(n: int, seed=None) -> list[RotationElement]:
    """n rotations about one random axis with independent uniform angles."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _rng(seed)
    axis = random_axis(rng)
    angles = rng.uniform(0.0, 2 * math.pi, size=n)
    return [RotationElement.about(axis, float(t)) for t in angles]


def sample_minus(pattern, seed=None) -> list[RotationElement]:
    """Realize a Klein pattern on a random orthonormal frame.

    X, Y, Z become the involutions about v1, v2 and v1 x v2; E becomes the
    identity.
    """
    from .components import as_pattern, require_valid

    p = require_valid(as_pattern(pattern))
    rng = _rng(seed)
    v1, v2 = random_frame(rng)
    table = {
        "E": RotationElement.identity(),
        "X": RotationElement.involution(v1),
        "Y": RotationElement.involution(v2),
        "Z": RotationElement.involution(np.cross(v1, v2)),
    }
    return [table[s] for s in p]


# -- TupleRecord interchange -------------------------------------------------


def element_from_record(obj: dict, tol: float = DEFAULT_TOL) -> RotationElement:
    kind = obj.get("type")
    try:
        if kind == "matrix":
            return RotationElement.checked(obj["rows"], tol)
        if kind == "quaternion":
            return project(Quaternion.from_array(obj["q"]), tol)
        if kind == "axis_angle":
            return RotationElement.about(obj["axis"], float(obj["angle"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, NormError):
            raise
        raise ParseError(f"malformed {kind!r} element: {exc}") from exc
    raise ParseError(f"unknown element type {kind!r}")


def load_tuple_record(obj: dict, tol: float = DEFAULT_TOL) -> list[RotationElement]:
    if not isinstance(obj, dict) or "elements" not in obj:
        raise ParseError("a tuple record needs an 'elements' list")
    elements = [element_from_record(e, tol) for e in obj["elements"]]
    if "n" in obj and obj["n"] != len(elements):
        raise ParseError(f"record says n={obj['n']} but holds {len(elements)} elements")
    return elements


def dump_tuple_record(elements: Sequence[RotationElement]) -> dict:
    return {
        "n": len(elements),
        "elements": [
            {"type": "matrix", "rows": [[float(f"{c:.17g}") for c in row] for row in e.matrix]}
            for e in elements
        ],
    }


def as_rotations(items: Iterable) -> list[RotationElement]:
    return [e if isinstance(e, RotationElement) else RotationElement(e) for e in items]
