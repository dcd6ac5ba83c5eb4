"""Finitely presented groups: coset enumeration, abelianization, and the
normal form in the semidirect products (free or free abelian) x| Z/2.

Words are tuples of nonzero ints: ``k`` is generator ``k`` (1-based) and
``-k`` its inverse.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, ParseError, RangeError

Word = tuple[int, ...]

DEFAULT_MAX_COSETS = 10**6


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def power(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k >= 0 else inverse(word)
    return free_reduce(base * abs(k))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return free_reduce(inverse(u) + inverse(v) + tuple(u) + tuple(v))


@dataclass(frozen=True)
class FpGroup:
    ngens: int
    relators: tuple[Word, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names) or tuple(f"g{i}" for i in range(1, self.ngens + 1))
        if len(names) != self.ngens:
            raise ValueError("one name per generator required")
        rels = []
        for r in self.relators:
            r = free_reduce(r)
            if any(not 0 < abs(x) <= self.ngens for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")
            if r:
                rels.append(r)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "relators", tuple(rels))

    def word_str(self, word: Sequence[int]) -> str:
        return format_word(word, self.names)

    def to_text(self) -> str:
        return "gens: " + " ".join(self.names) + "\nrels: " + ", ".join(
            self.word_str(r) for r in self.relators
        )

    def __str__(self) -> str:
        rels = ", ".join(self.word_str(r) for r in self.relators)
        return f"<{', '.join(self.names)} | {rels}>"


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    for x, run in itertools.groupby(word):
        k = len(list(run))
        e = k if x > 0 else -k
        name = names[abs(x) - 1]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


# -- standard presentations --------------------------------------------------


def _a_names(n: int) -> tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, n + 1))


def presentation_pi1_plus(n: int) -> FpGroup:
    """<a1..an, t | t^2, [ai,aj] (i<j), t ai t ai, a1 a2 t>.

    For n = 2 the commutator is absent: the punctured space then has free
    a-part, and [a1,a2] = (a1 a2 t)^2 follows from the other relators.
    """
    if n < 2:
        raise RangeError("the a1 a2 t relator needs n >= 2; see presentation_pi1_plus_rank1")
    t = n + 1
    rels = [(t, t)]
    if n >= 3:
        rels += [commutator((i,), (j,)) for i, j in itertools.combinations(range(1, n + 1), 2)]
    rels += [(t, i, t, i) for i in range(1, n + 1)]
    rels.append((1, 2, t))
    return FpGroup(n + 1, tuple(rels), _a_names(n) + ("t",))


def presentation_pi1_plus_rank1() -> FpGroup:
    """<a, t | t^2, t a t a, a t>; the one-generator collapse, of order 2."""
    return FpGroup(2, ((2, 2), (2, 1, 2, 1), (1, 2)), ("a", "t"))


def presentation_pi1_punctured(n: int) -> FpGroup:
    """Fundamental group of the plus component minus its singular point:
    <a1..an, t | t^2, t ai t ai> plus [ai,aj] when n >= 3. Infinite."""
    if n < 1:
        raise RangeError("n must be at least 1")
    t = n + 1
    rels = [(t, t)]
    if n >= 3:
        rels += [commutator((i,), (j,)) for i, j in itertools.combinations(range(1, n + 1), 2)]
    rels += [(t, i, t, i) for i in range(1, n + 1)]
    return FpGroup(n + 1, tuple(rels), _a_names(n) + ("t",))


def presentation_free_abelian(n: int) -> FpGroup:
    """<a1..an | [ai,aj]>."""
    rels = [commutator((i,), (j,)) for i, j in itertools.combinations(range(1, n + 1), 2)]
    return FpGroup(n, tuple(rels), _a_names(n))


def presentation_q8() -> FpGroup:
    """<x, y | x^4, x^2 y^-2, y^-1 x y x>."""
    return FpGroup(2, ((1, 1, 1, 1), (1, 1, -2, -2), (-2, 1, 2, 1)), ("x", "y"))


# -- coset enumeration -------------------------------------------------------


@dataclass
class CosetTable:
    """Closed coset table; row 0 is the subgroup coset. Column ``2g`` is
    generator g+1 and column ``2g+1`` its inverse."""

    ngens: int
    rows: list[list[int]] = field(default_factory=list)
    defined: int = 0

    def __len__(self) -> int:
        return len(self.rows)

    @staticmethod
    def column(letter: int) -> int:
        return 2 * (abs(letter) - 1) + (letter < 0)

    def act(self, coset: int, word: Sequence[int]) -> int:
        for x in word:
            coset = self.rows[coset][self.column(x)]
        return coset

    def permutation(self, letter: int) -> tuple[int, ...]:
        c = self.column(letter)
        return tuple(row[c] for row in self.rows)

    def transversal(self) -> list[Word]:
        """A word reaching each coset from coset 0, by breadth-first search."""
        words: list[Optional[Word]] = [None] * len(self.rows)
        words[0] = ()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for g in range(1, self.ngens + 1):
                for x in (g, -g):
                    d = self.rows[c][self.column(x)]
                    if words[d] is None:
                        words[d] = words[c] + (x,)
                        queue.append(d)
        return words  # type: ignore[return-value]


class _Enumerator:
    def __init__(self, ngens: int, max_cosets: int):
        self.m = 2 * ngens
        self.max_cosets = max_cosets
        self.table: list[list[Optional[int]]] = [[None] * self.m]
        self.p = [0]

    def rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def alive(self, k: int) -> bool:
        return self.p[k] == k

    def define(self, c: int, x: int) -> int:
        if len(self.table) >= self.max_cosets:
            raise BudgetExceeded(f"coset enumeration exceeded {self.max_cosets} cosets")
        new = len(self.table)
        self.table.append([None] * self.m)
        self.p.append(new)
        self.table[c][x] = new
        self.table[new][x ^ 1] = c
        return new

    def _merge(self, k: int, l: int, queue: deque) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.p[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: deque = deque()
        self._merge(a, b, queue)
        table = self.table
        while queue:
            e = queue.popleft()
            for x in range(self.m):
                f = table[e][x]
                if f is None:
                    continue
                table[f][x ^ 1] = None
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][x] is not None:
                    self._merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] is not None:
                    self._merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, word: Sequence[int]) -> None:
        table = self.table
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])


def todd_coxeter(
    group: FpGroup,
    max_cosets: int = DEFAULT_MAX_COSETS,
    subgroup: Sequence[Word] = (),
) -> tuple[int, CosetTable]:
    """Enumerate the cosets of ``subgroup`` (trivial by default).

    Relator-scanning (HLT) with coincidences processed as soon as they arise;
    undefined entries are filled lowest coset, lowest column first. Returns
    the index and the compacted closed table.
    """
    col = CosetTable.column
    rels = [[col(x) for x in r] for r in group.relators]
    sub = [[col(x) for x in free_reduce(w)] for w in subgroup]
    en = _Enumerator(group.ngens, max_cosets)
    for w in sub:
        if w:
            en.scan_and_fill(0, w)
    c = 0
    while c < len(en.table):
        for r in rels:
            if not en.alive(c):
                break
            en.scan_and_fill(c, r)
        if en.alive(c):
            for x in range(en.m):
                if en.table[c][x] is None:
                    en.define(c, x)
        c += 1

    live = [k for k in range(len(en.table)) if en.alive(k)]
    index = {k: i for i, k in enumerate(live)}
    rows = [[index[en.rep(en.table[k][x])] for x in range(en.m)] for k in live]
    table = CosetTable(group.ngens, rows, defined=len(en.table))
    return len(rows), table


def element_permutations(table: CosetTable) -> list[tuple[int, ...]]:
    """Right-regular permutation of every element, for a table over the
    trivial subgroup. Entry k is the permutation of the element reaching
    coset k from coset 0."""
    gens = {g: table.permutation(g) for g in range(1, table.ngens + 1)}
    inv = {g: table.permutation(-g) for g in range(1, table.ngens + 1)}
    size = len(table)
    perms: list[Optional[tuple[int, ...]]] = [None] * size
    perms[0] = tuple(range(size))
    queue = deque([0])
    while queue:
        k = queue.popleft()
        pk = perms[k]
        for g in range(1, table.ngens + 1):
            for step in (gens[g], inv[g]):
                d = step[k]
                if perms[d] is None:
                    # acting on the right: first pk, then the generator
                    perms[d] = tuple(step[pk[i]] for i in range(size))
                    queue.append(d)
    return perms  # type: ignore[return-value]


def is_elementary_abelian_2(group: FpGroup, table: CosetTable) -> bool:
    """Whether the group of a closed table over the trivial subgroup is
    (Z/2)^k: power-of-two order, abelian, and every element squares to 1."""
    size = len(table)
    if size & (size - 1):
        return False
    gens = [table.permutation(g) for g in range(1, group.ngens + 1)]
    for p, q in itertools.combinations(gens, 2):
        if any(p[q[i]] != q[p[i]] for i in range(size)):
            return False
    for perm in element_permutations(table):
        if any(perm[perm[i]] != i for i in range(size)):
            return False
    return True


def is_abelian(group: FpGroup, table: CosetTable) -> bool:
    gens = [table.permutation(g) for g in range(1, group.ngens + 1)]
    size = len(table)
    return all(
        all(p[q[i]] == q[p[i]] for i in range(size)) for p, q in itertools.combinations(gens, 2)
    )


def exponent_is_2(table: CosetTable) -> bool:
    return all(all(p[p[i]] == i for i in range(len(p))) for p in element_permutations(table))


# -- abelianization ----------------------------------------------------------


@dataclass(frozen=True)
class Abelianization:
    torsion: tuple[int, ...]
    free_rank: int

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def exponent_matrix(group: FpGroup) -> list[list[int]]:
    rows = []
    for r in group.relators:
        row = [0] * group.ngens
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def abelianization(group: FpGroup) -> Abelianization:
    """Invariant factors of the relator exponent matrix (Smith normal form)."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    rows = [r for r in exponent_matrix(group) if any(r)]
    if not rows:
        return Abelianization((), group.ngens)
    factors = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ)]
    rank = sum(1 for d in factors if d != 0)
    torsion = tuple(sorted(d for d in factors if d > 1))
    return Abelianization(torsion, group.ngens - rank)


# -- semidirect normal form --------------------------------------------------


def semidirect_normal_form(word: Sequence[int], n: int) -> Word:
    """Normal form u * t^e in <a1..an, t | t^2, t ai t ai [, [ai,aj]]>.

    Generator n+1 is t. Each t is pushed right using ai t = t ai^-1. The
    a-part is a freely reduced word for n <= 2 and, for n >= 3, the sorted
    exponent vector a1^k1 ... an^kn.
    """
    t = n + 1
    u: list[int] = []
    flip = False
    for x in word:
        if abs(x) == t:
            flip = not flip
        elif 0 < abs(x) <= n:
            u.append(-x if flip else x)
        else:
            raise ValueError(f"letter {x} is not a generator for n={n}")
    if n >= 3:
        exps = [0] * (n + 1)
        for x in u:
            exps[abs(x)] += 1 if x > 0 else -1
        a_part: Word = tuple(
            itertools.chain.from_iterable(
                (i if e > 0 else -i,) * abs(e) for i, e in enumerate(exps) if e
            )
        )
    else:
        a_part = free_reduce(u)
    return a_part + ((t,) if flip else ())


COMMUTATOR_A1_A2: Word = (1, 2, -1, -2)


def reduced_words(letters: Sequence[int], max_len: int) -> Iterable[Word]:
    """All freely reduced words over ``letters`` and their inverses, by length."""
    alphabet = sorted({x for l in letters for x in (l, -l)}, key=lambda x: (abs(x), x < 0))
    layer: list[Word] = [()]
    yield ()
    for _ in range(max_len):
        nxt = [w + (x,) for w in layer for x in alphabet if not w or w[-1] != -x]
        yield from nxt
        layer = nxt


def solve_w_equation(max_len: int, target: Sequence[int] = COMMUTATOR_A1_A2) -> list[Word]:
    """Every w = u t with u reduced in a1, a2 of length <= max_len and
    w^2 equal to ``target`` in the n = 2 punctured group."""
    t = 3
    target = free_reduce(target)
    hits = []
    for u in reduced_words((1, 2), max_len):
        w = u + (t,)
        if semidirect_normal_form(w + w, 2) == target:
            hits.append(w)
    return hits


# -- text format -------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_TOKEN = re.compile(rf"\s*(?:(\[)|(\])|(,)|(\()|(\))|(\*)|(\^)|(-?\d+)|({_NAME}))")


class _Parser:
    def __init__(self, text: str, names: dict[str, int]):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse {text[pos:]!r}")
            kind = m.lastindex
            self.tokens.append((kind, m.group(kind)))
            pos = m.end()
        self.i = 0
        self.names = names

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None):
        tok = self.peek()
        if tok[0] is None or (kind is not None and tok[0] != kind):
            raise ParseError(f"unexpected token {tok[1]!r}")
        self.i += 1
        return tok

    def product(self) -> Word:
        w = self.factor()
        while self.peek()[0] == 6:
            self.take(6)
            w = w + self.factor()
        return w

    def atom(self) -> Word:
        kind, val = self.peek()
        if kind == 9:
            self.take()
            if val not in self.names:
                raise ParseError(f"unknown generator {val!r}")
            return (self.names[val],)
        if kind == 4:
            self.take()
            w = self.product()
            self.take(5)
            return w
        if kind == 1:
            self.take()
            u = self.product()
            self.take(3)
            v = self.product()
            self.take(2)
            return commutator(u, v)
        if kind == 8 and val == "1":
            self.take()
            return ()
        raise ParseError(f"unexpected token {val!r}")

    def factor(self) -> Word:
        w = self.atom()
        while self.peek()[0] == 7:
            self.take(7)
            kind, val = self.peek()
            if kind == 8:
                self.take()
                w = power(w, int(val))
            else:
                c = self.atom()
                w = inverse(c) + w + c
        return w

    def done(self) -> bool:
        return self.i == len(self.tokens)


def parse_word(text: str, names: Sequence[str]) -> Word:
    lookup = {name: i + 1 for i, name in enumerate(names)}
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        return free_reduce(parse_word(lhs, names) + inverse(parse_word(rhs, names)))
    p = _Parser(text, lookup)
    w = p.product()
    if not p.done():
        raise ParseError(f"trailing input in {text!r}")
    return free_reduce(w)


def parse_presentation(text: str) -> FpGroup:
    """Parse ``gens: a1 a2 t`` / ``rels: t^2, a1^t*a1, ...``.

    ``x^k`` is a power, ``x^y`` the conjugate y^-1 x y, ``[x,y]`` the
    commutator x^-1 y^-1 x y, and ``lhs = rhs`` the relator lhs rhs^-1.
    """
    gens: Optional[list[str]] = None
    rel_text = ""
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        if key == "gens":
            gens = rest.replace(",", " ").split()
        elif key == "rels":
            rel_text += ("," if rel_text.strip() else "") + rest
        else:
            raise ParseError(f"expected 'gens:' or 'rels:', got {line!r}")
    if not gens:
        raise ParseError("missing 'gens:' line")
    if len(set(gens)) != len(gens):
        raise ParseError("duplicate generator names")
    rels = []
    for chunk in _split_top_level(rel_text):
        if chunk.strip():
            rels.append(parse_word(chunk, gens))
    return FpGroup(len(gens), tuple(rels), tuple(gens))


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts
