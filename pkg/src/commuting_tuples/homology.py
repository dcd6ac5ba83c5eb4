"""A finite CW model of the plus component and its mod-2 homology.

The plus component is (S^2 x T^n) / ~ where (v, z) ~ (-v, conj(z)) and
S^2 x {(1, ..., 1)} is collapsed to a point. The model is built in three
stages, each a genuine cell complex:

* product: S^2 with two cells in each dimension 0, 1, 2 (swapped by the
  antipodal map) times n circles, each with vertices +1, -1 and the two arcs
  through i and -i (swapped by conjugation);
* quotient by the free diagonal involution;
* collapse of the projective plane over (1, ..., 1) to the basepoint.

Boundaries are kept mod 2 as Python-int bitmasks. Oriented attaching words
of the 2-cells are carried along for edge-path presentations.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence, Union

from .errors import BoundaryError, BoundError, MissingAttachingWords, RangeError
from .fpgroups import FpGroup, Word, free_reduce

MODEL_CAP = 8

# S^2 cells: P vertices, E edges, D discs; the sign is the antipodal pair member.
S2_CELLS = ("P+", "P-", "E+", "E-", "D+", "D-")
S2_DIM = {"P": 0, "E": 1, "D": 2}
S2_BOUNDARY = {"P": (), "E": ("P+", "P-"), "D": ("E+", "E-")}
# circle cells: p = +1, m = -1, U = arc through i, L = arc through -i
CIRCLE_CELLS = ("p", "m", "U", "L")
CIRCLE_DIM = {"p": 0, "m": 0, "U": 1, "L": 1}
CIRCLE_BOUNDARY = {"p": (), "m": (), "U": ("p", "m"), "L": ("p", "m")}
_CONJ = {"p": "p", "m": "m", "U": "L", "L": "U"}

Cell = tuple  # (s2 cell, circle cell, ..., circle cell)


def _dim(cell: Cell) -> int:
    return S2_DIM[cell[0][0]] + sum(CIRCLE_DIM[c] for c in cell[1:])


def _boundary_terms(cell: Cell) -> list[Cell]:
    """Leibniz rule, mod 2: replace one factor by each of its faces."""
    terms = []
    for face in S2_BOUNDARY[cell[0][0]]:
        terms.append((face,) + cell[1:])
    for i, c in enumerate(cell[1:], start=1):
        for face in CIRCLE_BOUNDARY[c]:
            terms.append(cell[:i] + (face,) + cell[i + 1 :])
    return terms


def _involution(cell: Cell) -> Cell:
    s = cell[0]
    return (s[0] + ("-" if s[1] == "+" else "+"),) + tuple(_CONJ[c] for c in cell[1:])


def _orbit_rep(cell: Cell) -> Cell:
    return cell if cell[0][1] == "+" else _involution(cell)


@dataclass
class F2CellComplex:
    """Finite cell complex with mod-2 boundaries.

    ``boundary[d][k]`` is a bitmask over the (d-1)-cells hit by the k-th
    d-cell. ``words[k]``, when present, is the oriented attaching loop of the
    k-th 2-cell over 1-cells (letter e+1 or -(e+1) for edge e), and
    ``edge_ends[e]`` gives the (tail, head) vertices of edge e.
    """

    cells: list[list[Cell]]
    boundary: list[list[int]]
    edge_ends: Optional[list[tuple[int, int]]] = None
    words: Optional[list[Word]] = None
    basepoint: Optional[int] = None
    stage: str = ""
    index: list[dict] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = [{c: k for k, c in enumerate(cs)} for cs in self.cells]

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> list[int]:
        return [len(cs) for cs in self.cells]

    def num_cells(self) -> int:
        return sum(self.counts())

    def check_boundary(self) -> None:
        """Raise BoundaryError unless every composite boundary vanishes."""
        for d in range(2, len(self.cells)):
            lower = self.boundary[d - 1]
            for k, mask in enumerate(self.boundary[d]):
                acc = 0
                for j in _bits(mask):
                    acc ^= lower[j]
                if acc:
                    raise BoundaryError(
                        f"{self.stage}: boundary of boundary of {self.cells[d][k]} is nonzero"
                    )

    def boundary_of_chain(self, d: int, chain: int) -> int:
        acc = 0
        for j in _bits(chain):
            acc ^= self.boundary[d][j]
        return acc


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _assemble(cells_by_dim: list[list[Cell]], boundary_terms, stage: str) -> F2CellComplex:
    index = [{c: k for k, c in enumerate(cs)} for cs in cells_by_dim]
    boundary: list[list[int]] = [[0] * len(cells_by_dim[0])]
    for d in range(1, len(cells_by_dim)):
        masks = []
        for c in cells_by_dim[d]:
            mask = 0
            for t in boundary_terms(c):
                mask ^= 1 << index[d - 1][t]
            masks.append(mask)
        boundary.append(masks)
    return F2CellComplex(cells_by_dim, boundary, stage=stage, index=index)


def _all_product_cells(n: int) -> list[Cell]:
    return [(s,) + cs for s in S2_CELLS for cs in itertools.product(CIRCLE_CELLS, repeat=n)]


def _by_dim(cells: Sequence[Cell], n: int) -> list[list[Cell]]:
    out: list[list[Cell]] = [[] for _ in range(n + 3)]
    for c in cells:
        out[_dim(c)].append(c)
    return out


def _check_n(n: int) -> None:
    if not 1 <= n <= MODEL_CAP:
        raise BoundError(f"cell model supports 1 <= n <= {MODEL_CAP}, got {n}")


def product_model(n: int) -> F2CellComplex:
    """S^2 x T^n with the equivariant product cell structure (6 * 4^n cells)."""
    _check_n(n)
    K = _assemble(_by_dim(_all_product_cells(n), n), _boundary_terms, "product")
    K.check_boundary()
    return K


def _quotient_terms(cell: Cell) -> list[Cell]:
    return [_orbit_rep(t) for t in _boundary_terms(cell)]


def _product_edge_path(cell: Cell) -> list[tuple[Cell, int]]:
    """Oriented boundary loop of a product 2-cell as (edge, +-1) letters.

    Orientations: E+ runs P+ -> P-, E- runs P- -> P+, arcs run p -> m. The
    involution carries each oriented edge onto an oriented edge.
    """
    s, circ = cell[0], cell[1:]
    arcs = [i for i, c in enumerate(circ) if c in "UL"]
    if s[0] == "D":
        other = "E-" if s == "D+" else "E+"
        first = "E+" if s == "D+" else "E-"
        return [((first,) + circ, 1), ((other,) + circ, 1)]
    if s[0] == "E":
        (i,) = arcs
        tail, head = ("P+", "P-") if s == "E+" else ("P-", "P+")

        def at(c):
            return circ[:i] + (c,) + circ[i + 1 :]

        return [
            ((s,) + at("p"), 1),
            ((head,) + circ, 1),
            ((s,) + at("m"), -1),
            ((tail,) + circ, -1),
        ]
    i, j = arcs

    def put(ci, cj):
        c = list(circ)
        c[i], c[j] = ci, cj
        return (s,) + tuple(c)

    ai, aj = circ[i], circ[j]
    return [(put(ai, "p"), 1), (put("m", aj), 1), (put(ai, "m"), -1), (put("p", aj), -1)]


def _edge_ends(cell: Cell) -> tuple[Cell, Cell]:
    s, circ = cell[0], cell[1:]
    if s[0] == "E":
        tail, head = ("P+", "P-") if s == "E+" else ("P-", "P+")
        return (tail,) + circ, (head,) + circ
    (i,) = [k for k, c in enumerate(circ) if c in "UL"]
    return (
        (s,) + circ[:i] + ("p",) + circ[i + 1 :],
        (s,) + circ[:i] + ("m",) + circ[i + 1 :],
    )


def _attach_paths(K: F2CellComplex) -> None:
    idx0, idx1 = K.index[0], K.index[1]
    K.edge_ends = []
    for e in K.cells[1]:
        tail, head = (_orbit_rep(v) for v in _edge_ends(e))
        K.edge_ends.append((idx0[tail], idx0[head]))
    K.words = []
    for f in K.cells[2]:
        word = [(idx1[_orbit_rep(e)] + 1) * sign for e, sign in _product_edge_path(f)]
        K.words.append(tuple(word))


def quotient_model(n: int) -> F2CellComplex:
    """(S^2 x T^n) / Z2 for the free diagonal involution (3 * 4^n cells)."""
    _check_n(n)
    reps = [c for c in _all_product_cells(n) if c[0][1] == "+"]
    K = _assemble(_by_dim(reps, n), _quotient_terms, "quotient")
    K.check_boundary()
    _attach_paths(K)
    return K


def collapsed_cells(n: int) -> tuple[Cell, Cell, Cell]:
    """The projective-plane subcomplex over (1, ..., 1) in the quotient."""
    ones = ("p",) * n
    return ("P+",) + ones, ("E+",) + ones, ("D+",) + ones


def build_plus_model(n: int) -> F2CellComplex:
    """Cell model of the plus component: 3 * 4^n - 3 cells plus a basepoint.

    The vertex of the collapsed projective plane is reused as the basepoint;
    its edge and disc are deleted, which drops them from every boundary and
    attaching word.
    """
    Q = quotient_model(n)
    vertex, edge, disc = collapsed_cells(n)
    drop = {1: Q.index[1][edge], 2: Q.index[2][disc]}

    cells = [list(cs) for cs in Q.cells]
    cells[1].pop(drop[1])
    cells[2].pop(drop[2])
    index = [{c: k for k, c in enumerate(cs)} for cs in cells]

    def remap(d: int, mask: int) -> int:
        out = 0
        for j in _bits(mask):
            if d in drop:
                if j == drop[d]:
                    continue
                j -= j > drop[d]
            out |= 1 << j
        return out

    boundary = [list(Q.boundary[0])]
    for d in range(1, len(cells)):
        masks = [m for k, m in enumerate(Q.boundary[d]) if not (d in drop and k == drop[d])]
        boundary.append([remap(d - 1, m) for m in masks])

    def new_edge(letter: int) -> Optional[int]:
        e = abs(letter) - 1
        if e == drop[1]:
            return None
        e -= e > drop[1]
        return (e + 1) if letter > 0 else -(e + 1)

    edge_ends = [ends for k, ends in enumerate(Q.edge_ends) if k != drop[1]]
    words = []
    for k, w in enumerate(Q.words):
        if k == drop[2]:
            continue
        words.append(tuple(x for x in map(new_edge, w) if x is not None))

    K = F2CellComplex(
        cells,
        boundary,
        edge_ends=edge_ends,
        words=words,
        basepoint=index[0][vertex],
        stage="collapsed",
        index=index,
    )
    K.check_boundary()
    return K


# -- Betti numbers -----------------------------------------------------------


def f2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of bitmask rows (elimination on the leading bit)."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


@dataclass(frozen=True)
class BettiProfile:
    betti: tuple[int, ...]
    source: str = ""

    def __iter__(self):
        return iter(self.betti)

    def __len__(self):
        return len(self.betti)

    def __getitem__(self, q):
        return self.betti[q] if q < len(self.betti) else 0

    def euler(self) -> int:
        return sum((-1) ** q * b for q, b in enumerate(self.betti))

    def as_tuple(self) -> tuple[int, ...]:
        return self.betti


def betti_f2(K: F2CellComplex) -> BettiProfile:
    """b_q = dim C_q - rank d_q - rank d_(q+1) over GF(2)."""
    K.check_boundary()
    ranks = [0] + [f2_rank(K.boundary[d]) for d in range(1, len(K.cells))] + [0]
    betti = tuple(len(K.cells[q]) - ranks[q] - ranks[q + 1] for q in range(len(K.cells)))
    return BettiProfile(betti, source="cell_model")


def betti_formula(n: int) -> BettiProfile:
    """The printed piecewise table, evaluated for any n >= 2."""
    if n < 2:
        raise RangeError("the Betti table is stated for n >= 2")
    b = [1, n, comb(n, 1) + comb(n, 2)]
    b += [comb(n, q - 2) + comb(n, q - 1) + comb(n, q) for q in range(3, n + 1)]
    b += [comb(n, n - 1) + 1, 1]
    return BettiProfile(tuple(b), source="formula")


def euler_characteristic(source: Union[BettiProfile, F2CellComplex]) -> int:
    """Alternating sum of Betti numbers; for a complex, also of cell counts,
    and the two must agree."""
    if isinstance(source, F2CellComplex):
        by_cells = sum((-1) ** q * c for q, c in enumerate(source.counts()))
        by_betti = betti_f2(source).euler()
        if by_cells != by_betti:
            raise BoundaryError(f"cell count gives {by_cells} but Betti numbers give {by_betti}")
        return by_cells
    return source.euler()


def euler_paper_even_formula(n: int) -> int:
    """2 + n(n-1) - C(n,k-1) - C(n,k) - C(n,k+1) for n = 2k, k >= 2."""
    if n < 4 or n % 2:
        raise RangeError("the even-n expression applies to n = 2k with k >= 2")
    k = n // 2
    return 2 + n * (n - 1) - comb(n, k - 1) - comb(n, k) - comb(n, k + 1)


@dataclass(frozen=True)
class EulerComparison:
    n: int
    table: int
    printed: Optional[int]

    @property
    def discrepancy(self) -> bool:
        return self.printed is not None and self.printed != self.table

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "euler_table": self.table,
            "euler_printed_even_formula": self.printed,
            "discrepancy": self.discrepancy,
        }


def compare_euler(n: int) -> EulerComparison:
    """Alternating sum of the formula table next to the printed even-n
    expression (None where that expression does not apply)."""
    table = betti_formula(n).euler()
    printed = euler_paper_even_formula(n) if n >= 4 and n % 2 == 0 else None
    return EulerComparison(n, table, printed)


# -- edge-path fundamental group --------------------------------------------


def spanning_tree(K: F2CellComplex, root: Optional[int] = None) -> set[int]:
    """Edges of a breadth-first spanning tree of the 1-skeleton."""
    if K.edge_ends is None:
        raise MissingAttachingWords("complex carries no edge orientation data")
    root = K.basepoint if root is None else root
    root = 0 if root is None else root
    adj: list[list[tuple[int, int]]] = [[] for _ in K.cells[0]]
    for e, (a, b) in enumerate(K.edge_ends):
        adj[a].append((e, b))
        adj[b].append((e, a))
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    if len(seen) != len(K.cells[0]):
        raise ValueError("1-skeleton is disconnected")
    return tree


def edge_path_pi1(K: F2CellComplex) -> FpGroup:
    """Edge-path presentation: one generator per edge off a spanning tree,
    one relator per 2-cell."""
    if K.words is None or K.edge_ends is None:
        raise MissingAttachingWords("complex was built without attaching words")
    tree = spanning_tree(K)
    gen_of: dict[int, int] = {}
    names = []
    for e in range(len(K.cells[1])):
        if e not in tree:
            gen_of[e] = len(gen_of) + 1
            names.append("e" + str(e))
    rels = []
    for w in K.words:
        r = []
        for x in w:
            e = abs(x) - 1
            if e in gen_of:
                r.append(gen_of[e] if x > 0 else -gen_of[e])
        rels.append(free_reduce(r))
    return FpGroup(len(names), tuple(rels), tuple(names))
