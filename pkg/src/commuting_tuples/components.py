"""Connected components of the space of commuting n-tuples in SO(3).

A component is either the one through (id, ..., id), labelled ``PLUS``, or a
minus component labelled by a Klein pattern: a string over ``EXYZ`` where E
marks an identity entry and X, Y, Z mark the three involutions about
mutually perpendicular axes (X*Y = Z). Patterns that differ by a
permutation of {X, Y, Z} label the same component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import AmbiguousError, BoundError, InvalidPatternError, NonCommutingError
from .rotations import DEFAULT_TOL, RotationElement, commutes, rotation_axis

SYMBOLS = "EXYZ"
INVOLUTION_SYMBOLS = "XYZ"
ENUMERATION_CAP = 12

_PRODUCT = {
    ("E", s): s for s in SYMBOLS
} | {
    (s, "E"): s for s in SYMBOLS
} | {
    (s, s): "E" for s in SYMBOLS
} | {
    ("X", "Y"): "Z", ("Y", "X"): "Z",
    ("X", "Z"): "Y", ("Z", "X"): "Y",
    ("Y", "Z"): "X", ("Z", "Y"): "X",
}

# all six relabelings of the involution symbols, identity first
SYMBOL_PERMUTATIONS = [
    dict(zip("EXYZ", "E" + "".join(p))) for p in itertools.permutations("XYZ")
]


def klein_product(a: str, b: str) -> str:
    return _PRODUCT[(a, b)]


def as_pattern(p) -> str:
    """Normalize a pattern given as a string or a sequence of symbols."""
    s = p if isinstance(p, str) else "".join(str(c) for c in p)
    s = s.upper()
    if not s or any(c not in SYMBOLS for c in s):
        raise InvalidPatternError(f"pattern {p!r} must be a nonempty word over {SYMBOLS}")
    return s


def is_valid_minus(p: str) -> bool:
    """At least two distinct involution symbols occur."""
    return len(set(p) - {"E"}) >= 2


def require_valid(p: str) -> str:
    if not is_valid_minus(p):
        raise InvalidPatternError(f"pattern {p!r} needs two distinct involution symbols")
    return p


def is_canonical(p: str) -> bool:
    rest = p.replace("E", "")
    if not rest or rest[0] != "X":
        return False
    rest = rest.replace("X", "")
    return not rest or rest[0] == "Y"


def relabel(p: str, perm: dict) -> str:
    return "".join(perm[c] for c in p)


def canonicalize(p) -> str:
    """First-occurrence relabeling: the first involution symbol becomes X,
    the next different one Y, the remaining one Z."""
    p = require_valid(as_pattern(p))
    order = []
    for c in p:
        if c != "E" and c not in order:
            order.append(c)
    order += [c for c in INVOLUTION_SYMBOLS if c not in order]
    perm = {"E": "E", order[0]: "X", order[1]: "Y", order[2]: "Z"}
    return relabel(p, perm)


@dataclass(frozen=True)
class ComponentLabel:
    kind: str
    pattern: Optional[str] = None

    def __post_init__(self):
        if self.kind == "plus":
            if self.pattern is not None:
                raise ValueError("the plus component carries no pattern")
        elif self.kind == "minus":
            p = require_valid(as_pattern(self.pattern))
            if not is_canonical(p):
                raise InvalidPatternError(f"minus label needs a canonical pattern, got {p!r}")
            object.__setattr__(self, "pattern", p)
        else:
            raise ValueError(f"unknown component kind {self.kind!r}")

    @classmethod
    def minus(cls, p) -> ComponentLabel:
        return cls("minus", canonicalize(p))

    @property
    def is_plus(self) -> bool:
        return self.kind == "plus"

    def to_json(self) -> dict:
        if self.is_plus:
            return {"component": "plus"}
        return {"component": "minus", "pattern": self.pattern}

    @classmethod
    def from_json(cls, obj: dict) -> ComponentLabel:
        if obj.get("component") == "plus":
            return PLUS
        if obj.get("component") == "minus":
            return cls("minus", obj["pattern"])
        raise ValueError(f"not a component label: {obj!r}")

    def __str__(self) -> str:
        return "Plus" if self.is_plus else f"Minus({self.pattern})"


PLUS = ComponentLabel("plus")


def classify(elements: Sequence[RotationElement], tol: float = DEFAULT_TOL) -> ComponentLabel:
    """Component of a commuting tuple of rotations."""
    elements = list(elements)
    for i, j in itertools.combinations(range(len(elements)), 2):
        if not commutes(elements[i], elements[j], tol):
            raise NonCommutingError(f"entries {i} and {j} do not commute")

    axes: list[Optional[np.ndarray]] = []
    for a in elements:
        axes.append(None if a.is_identity(tol) else rotation_axis(a, tol))
    present = [v for v in axes if v is not None]
    if not present:
        return PLUS
    ref = present[0]
    other = next((v for v in present if np.linalg.norm(np.cross(ref, v)) > tol), None)
    if other is None:
        return PLUS

    if abs(float(ref @ other)) > tol:
        raise AmbiguousError("axes are neither colinear nor perpendicular")
    frame = {"X": ref, "Y": other, "Z": np.cross(ref, other)}
    symbols = []
    for a, v in zip(elements, axes):
        if v is None:
            symbols.append("E")
            continue
        if not a.is_involution(tol):
            raise AmbiguousError("a non-involution entry commutes with perpendicular involutions")
        for s, u in frame.items():
            if np.linalg.norm(np.cross(u, v)) <= tol:
                symbols.append(s)
                break
        else:
            raise AmbiguousError("an involution axis is off the Klein frame")
    # first-occurrence labeling makes the result canonical already
    return ComponentLabel("minus", "".join(symbols))


# -- counting ----------------------------------------------------------------


def count_closed_form(n: int) -> int:
    """(4^n - 3*2^n + 2) / 6, checked against both parity-split forms."""
    if n < 1:
        raise ValueError("n must be at least 1")
    num = 4**n - 3 * 2**n + 2
    assert num % 6 == 0
    value = num // 6
    if n % 2 == 0:
        printed = Fraction(4**n - 3 * 2**n + 2, 6)
    else:
        printed = Fraction(2, 3) * (4 ** (n - 1) - 1) - 2 ** (n - 1) + 1
    assert printed == value, f"parity form {printed} != {value} at n={n}"
    return value


def count_recurrence(n: int) -> int:
    """x_n = 4^(n-2) + 3/2 (4^(n-2) - 2^(n-2)) + x_(n-2), from x_1 = 0, x_2 = 1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = {1: 0, 2: 1}
    for k in range(3, n + 1):
        diff = 4 ** (k - 2) - 2 ** (k - 2)
        assert diff % 2 == 0
        x[k] = 4 ** (k - 2) + 3 * diff // 2 + x[k - 2]
    return x[n]


def _canonical_mask(digits: np.ndarray) -> np.ndarray:
    # digits: (N, n) with E=0, X=1, Y=2, Z=3
    rows = np.arange(len(digits))
    non_e = digits > 0
    first = np.argmax(non_e, axis=1)
    ok = non_e.any(axis=1) & (digits[rows, first] == 1)
    beyond_x = digits > 1
    first_beyond = np.argmax(beyond_x, axis=1)
    return ok & beyond_x.any(axis=1) & (digits[rows, first_beyond] == 2)


def _digit_chunks(n: int, chunk: int = 1 << 18) -> Iterable[np.ndarray]:
    total = 4**n
    powers = 4 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield ((idx[:, None] // powers) % 4).astype(np.int8)


def count_enumerate(n: int) -> int:
    """Count canonical valid minus patterns among all 4^n patterns."""
    if not 1 <= n <= ENUMERATION_CAP:
        raise BoundError(f"enumeration supports 1 <= n <= {ENUMERATION_CAP}, got {n}")
    return int(sum(int(_canonical_mask(d).sum()) for d in _digit_chunks(n)))


def enumerate_components(n: int) -> list[ComponentLabel]:
    """PLUS, then every minus label in lexicographic order E < X < Y < Z."""
    if not 1 <= n <= ENUMERATION_CAP:
        raise BoundError(f"enumeration supports 1 <= n <= {ENUMERATION_CAP}, got {n}")
    labels = [PLUS]
    for d in _digit_chunks(n):
        for row in d[_canonical_mask(d)]:
            labels.append(ComponentLabel("minus", "".join(SYMBOLS[c] for c in row)))
    return labels


def orbit(p: str) -> set[str]:
    return {relabel(p, perm) for perm in SYMBOL_PERMUTATIONS}
