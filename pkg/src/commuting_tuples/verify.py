"""Batch verification of the headline results, used by ``verify-all``."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import components as comp
from . import fpgroups as fp
from . import homology as hom
from . import lifting as lf
from . import rotations as rot


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    discrepancy: bool = False
    elapsed: float = 0.0

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "elapsed": round(self.elapsed, 4)}
        if self.discrepancy:
            out["discrepancy"] = True
        out.update(self.detail)
        return out


def _timed(name: str, fn: Callable[[], tuple[bool, dict]]) -> Check:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return Check(name, passed, detail, elapsed=time.perf_counter() - start)


EXAMPLE_TRIPLES = {
    # (A1, A2, A3) in terms of involutions B1, B2 about perpendicular axes
    "A1,A2,id": ("B1", "B2", "I"),
    "A1,A2,A1": ("B1", "B2", "B1"),
    "A1,A2,A2": ("B1", "B2", "B2"),
    "A1,A2,A1A2": ("B1", "B2", "B3"),
    "A1,id,A3": ("B1", "I", "B2"),
    "A1,A1,A3": ("B1", "B1", "B2"),
    "id,A2,A3": ("I", "B1", "B2"),
}


def example_triples(seed: int = 0) -> dict[str, list[rot.RotationElement]]:
    rng = np.random.default_rng(seed)
    v1, v2 = rot.random_frame(rng)
    table = {
        "I": rot.RotationElement.identity(),
        "B1": rot.RotationElement.involution(v1),
        "B2": rot.RotationElement.involution(v2),
    }
    table["B3"] = table["B1"] @ table["B2"]
    return {k: [table[s] for s in symbols] for k, symbols in EXAMPLE_TRIPLES.items()}


def check_counts() -> tuple[bool, dict]:
    rows = {}
    ok = True
    for n in range(1, 11):
        a, b, c = comp.count_closed_form(n), comp.count_recurrence(n), comp.count_enumerate(n)
        rows[n] = [a, b, c]
        ok &= a == b == c
    ok &= [rows[n][0] for n in (1, 2, 3)] == [0, 1, 7]
    return ok, {"counts": rows}


def check_example_triples() -> tuple[bool, dict]:
    labels = [l for l in comp.enumerate_components(3) if not l.is_plus]
    got = {k: comp.classify(t) for k, t in example_triples().items()}
    images = set(got.values())
    ok = len(labels) == 7 and images == set(labels) and len(images) == 7
    return ok, {"labels": {k: v.pattern for k, v in got.items()}}


def check_pi1(max_cosets: int) -> tuple[bool, dict]:
    orders = {}
    ok = True
    for n in range(2, 9):
        G = fp.presentation_pi1_plus(n)
        order, table = fp.todd_coxeter(G, max_cosets)
        ea = fp.is_elementary_abelian_2(G, table)
        orders[n] = order
        ok &= order == 2**n and ea
    Q = fp.presentation_q8()
    q_order, q_table = fp.todd_coxeter(Q, max_cosets)
    q_abelian = fp.is_abelian(Q, q_table)
    ok &= q_order == 8 and not q_abelian
    return ok, {"orders": orders, "q8_order": q_order, "q8_abelian": q_abelian}


def check_w_uniqueness() -> tuple[bool, dict]:
    sols = {L: fp.solve_w_equation(L) for L in range(2, 9)}
    ok = all(s == [(1, 2, 3)] for s in sols.values())
    return ok, {"solutions": {L: len(s) for L, s in sols.items()}}


def check_betti(max_n: int) -> tuple[bool, dict]:
    expected = {2: (1, 2, 3, 3, 1), 3: (1, 3, 6, 7, 4, 1), 4: hom.betti_formula(4).betti}
    got = {}
    ok = True
    for n, want in expected.items():
        if n > max_n:
            continue
        got[n] = list(hom.betti_f2(hom.build_plus_model(n)).betti)
        ok &= tuple(got[n]) == want
    return ok, {"betti": got}


def check_so3_betti() -> tuple[bool, dict]:
    b = hom.betti_f2(hom.build_plus_model(1)).betti
    return b == (1, 1, 1, 1), {"betti": list(b)}


def check_euler(max_n: int) -> tuple[bool, dict]:
    model = {n: hom.euler_characteristic(hom.build_plus_model(n)) for n in range(1, min(4, max_n) + 1)}
    formula = {n: hom.betti_formula(n).euler() for n in range(2, 5)}
    cmp6 = hom.compare_euler(6)
    ok = all(v == 0 for v in model.values()) and all(v == 0 for v in formula.values())
    ok &= cmp6.discrepancy and cmp6.table == 0 and cmp6.printed == -18
    return ok, {"cell_model": model, "formula": formula, "n6": cmp6.to_json()}


def lift_samples(count: int = 1000, seed: int = 0):
    """Pairs drawn from both samplers; yields (A, B)."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(2, 6))
        if k % 2 == 0:
            elems = rot.sample_plus(n, seed=(seed, k))
        else:
            while True:
                p = "".join(rng.choice(list(comp.SYMBOLS), size=n))
                if comp.is_valid_minus(p):
                    break
            elems = rot.sample_minus(p, seed=(seed, k))
        i, j = rng.choice(n, size=2, replace=False)
        yield elems[int(i)], elems[int(j)]


def check_lifts(tol: float = rot.DEFAULT_TOL) -> tuple[bool, dict]:
    plus = minus = 0
    ok = True
    for A, B in lift_samples(1000):
        label = comp.classify((A, B), tol)
        sign = lf.lifted_commutator_sign(A, B, tol)
        ok &= (sign == 1) == label.is_plus
        plus += label.is_plus
        minus += not label.is_plus
    counts = {}
    for n in range(1, 7):
        ls = lf.lift_tuple(rot.sample_plus(n, seed=n))
        counts[n] = len(ls.commuting_members(tol))
        ok &= counts[n] == 2**n
    return ok, {"plus_pairs": plus, "minus_pairs": minus, "commuting_lifts": counts}


def check_edge_path(max_n: int, max_cosets: int) -> tuple[bool, dict]:
    orders = {}
    ok = True
    for n in range(1, min(3, max_n) + 1):
        G = hom.edge_path_pi1(hom.build_plus_model(n))
        order, table = fp.todd_coxeter(G, max_cosets)
        orders[n] = order
        ok &= order == 2**n and fp.is_elementary_abelian_2(G, table)
    return ok, {"orders": orders}


def check_properties(cases: int = 200, seed: int = 0) -> tuple[bool, dict]:
    """Randomized spot checks of the module invariants."""
    rng = np.random.default_rng(seed)
    failures = {}

    def note(name, cond):
        if not cond:
            failures[name] = failures.get(name, 0) + 1

    K = hom.build_plus_model(3)
    for k in range(cases):
        n = int(rng.integers(2, 7))
        while True:
            p = "".join(rng.choice(list(comp.SYMBOLS), size=n))
            if comp.is_valid_minus(p):
                break
        c = comp.canonicalize(p)
        elems = rot.sample_minus(c, seed=(seed, k))
        note("round_trip", comp.classify(elems) == comp.ComponentLabel("minus", c))
        g = rot.random_rotation(rng)
        note("conjugation", comp.classify([a.conjugated_by(g) for a in elems]) == comp.classify(elems))
        d = int(rng.integers(2, len(K.cells)))
        size = len(K.cells[d])
        chain = int.from_bytes(rng.bytes(size // 8 + 1), "little") & ((1 << size) - 1)
        note("boundary_squared", K.boundary_of_chain(d - 1, K.boundary_of_chain(d, chain)) == 0)
        m = int(rng.integers(2, 5))
        letters = [x for i in range(1, m + 2) for x in (i, -i)]
        v = tuple(int(x) for x in rng.choice(letters, size=int(rng.integers(0, 8))))
        w = tuple(int(x) for x in rng.choice(letters, size=int(rng.integers(0, 8))))
        nf = fp.semidirect_normal_form
        note("nf_multiplicative", nf(v + w, m) == nf(nf(v, m) + nf(w, m), m))
    return not failures, {"cases": cases, "failures": failures}


def run_all(max_n: int = 4, max_cosets: int = fp.DEFAULT_MAX_COSETS, tol: float = rot.DEFAULT_TOL) -> list[Check]:
    euler = _timed("euler", lambda: check_euler(max_n))
    euler.discrepancy = bool(euler.detail.get("n6", {}).get("discrepancy"))
    return [
        _timed("component_counts", check_counts),
        _timed("example_triples", check_example_triples),
        _timed("pi1_certification", lambda: check_pi1(max_cosets)),
        _timed("w_uniqueness", check_w_uniqueness),
        _timed("betti_tables", lambda: check_betti(max_n)),
        _timed("so3_betti", check_so3_betti),
        euler,
        _timed("covering_lifts", lambda: check_lifts(tol)),
        _timed("edge_path_pi1", lambda: check_edge_path(max_n, max_cosets)),
        _timed("properties", check_properties),
    ]
