"""Randomized invariants, 200 cases per property."""

import functools
import math
import random

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from commuting_tuples import components as comp
from commuting_tuples import fpgroups as fp
from commuting_tuples import homology as hom
from commuting_tuples import lifting as lf
from commuting_tuples import rotations as rot
from commuting_tuples.rotations import Quaternion, RotationElement, U2Element

TAU = rot.DEFAULT_TOL
seeds = st.integers(0, 2**32 - 1)


def rotation_from(seed):
    return rot.random_rotation(np.random.default_rng(seed))


@st.composite
def unit_quaternions(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(4)])
    assume(np.linalg.norm(v) > 0.1)
    return Quaternion.from_array(v / np.linalg.norm(v))


@st.composite
def valid_patterns(draw, lo=2, hi=7):
    p = draw(st.text(alphabet=comp.SYMBOLS, min_size=lo, max_size=hi))
    assume(comp.is_valid_minus(p))
    return p


@st.composite
def commuting_pairs(draw):
    seed = draw(seeds)
    if draw(st.booleans()):
        elems = rot.sample_plus(2, seed)
    else:
        elems = rot.sample_minus(draw(st.sampled_from(["XY", "YX", "XZ"])), seed)
    return elems[0], elems[1]


# -- rotations ----------------------------------------------------------------


@given(unit_quaternions(), unit_quaternions())
def test_project_is_homomorphism(q1, q2):
    lhs = rot.project(q1 * q2).matrix
    rhs = (rot.project(q1) @ rot.project(q2)).matrix
    assert rot.max_abs(lhs - rhs) <= 10 * TAU


@given(unit_quaternions())
def test_kernel(q):
    trivial = rot.project(q).is_identity(TAU)
    assert trivial == (q.close_to(Quaternion.identity(), TAU) or q.close_to(-Quaternion.identity(), TAU))


@given(st.sampled_from([1.0, -1.0]), st.floats(-1e-11, 1e-11))
def test_kernel_near_identity(sign, eps):
    q = Quaternion.from_array([sign * math.sqrt(1 - eps * eps), eps, 0, 0])
    assert rot.project(q).is_identity(TAU)


def _same_line(u, v):
    return min(rot.max_abs(u - v), rot.max_abs(u + v)) <= 10 * TAU


@given(commuting_pairs(), seeds)
def test_pair_structure_equivariant(pair, gseed):
    A, B = pair
    assume(not (A.is_identity() and B.is_identity()))
    g = rotation_from(gseed)
    before = rot.pair_structure(A, B)
    after = rot.pair_structure(A.conjugated_by(g), B.conjugated_by(g))
    assert before.tag == after.tag
    if before.tag == "common_axis":
        assert _same_line(g.apply(before.axis), after.axis)
    else:
        assert _same_line(g.apply(before.v1), after.v1)
        assert _same_line(g.apply(before.v2), after.v2)


@given(valid_patterns(), seeds)
def test_sample_minus_entries_are_involutions(p, seed):
    for a in rot.sample_minus(p, seed):
        t = a.trace
        assert abs(t - 3) <= TAU or abs(t + 1) <= TAU


# -- components ---------------------------------------------------------------


@given(valid_patterns(), seeds)
def test_classify_round_trip(p, seed):
    c = comp.canonicalize(p)
    assert comp.classify(rot.sample_minus(c, seed)) == comp.ComponentLabel("minus", c)


@given(st.integers(1, 6), seeds, seeds)
def test_classify_conjugation_invariant_plus(n, seed, gseed):
    elems = rot.sample_plus(n, seed)
    g = rotation_from(gseed)
    assert comp.classify([a.conjugated_by(g) for a in elems]) == comp.classify(elems) == comp.PLUS


@given(valid_patterns(), seeds, seeds)
def test_classify_conjugation_invariant_minus(p, seed, gseed):
    elems = rot.sample_minus(p, seed)
    g = rotation_from(gseed)
    assert comp.classify([a.conjugated_by(g) for a in elems]) == comp.classify(elems)


@given(valid_patterns(2, 10), st.sampled_from(comp.SYMBOL_PERMUTATIONS))
def test_canonicalize_idempotent_and_orbit_constant(p, perm):
    c = comp.canonicalize(p)
    assert comp.canonicalize(c) == c
    assert comp.canonicalize(comp.relabel(p, perm)) == c
    assert len(comp.orbit(p)) == 6


# -- fpgroups -----------------------------------------------------------------


def _shuffled(G, rnd):
    perm = list(range(1, G.ngens + 1))
    rnd.shuffle(perm)
    sign = [rnd.choice((1, -1)) for _ in perm]

    def rename(w):
        return tuple((perm[abs(x) - 1] if x > 0 else -perm[abs(x) - 1]) * sign[abs(x) - 1] for x in w)

    rels = [rename(r) for r in G.relators]
    rnd.shuffle(rels)
    # rotate and invert some relators too; neither changes the normal closure
    out = []
    for r in rels:
        k = rnd.randrange(len(r))
        r = r[k:] + r[:k]
        out.append(fp.inverse(r) if rnd.random() < 0.5 else r)
    return fp.FpGroup(G.ngens, tuple(out))


@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_coset_order_invariant_under_shuffles(n, rnd):
    G = fp.presentation_pi1_plus(n) if n >= 2 else fp.presentation_pi1_plus_rank1()
    Q = fp.presentation_q8()
    assert fp.todd_coxeter(_shuffled(G, rnd))[0] == 2**n
    assert fp.todd_coxeter(_shuffled(Q, rnd))[0] == 8


def words(m):
    letters = [x for i in range(1, m + 2) for x in (i, -i)]
    return st.lists(st.sampled_from(letters), max_size=10).map(tuple)


@given(st.integers(2, 5).flatmap(lambda m: st.tuples(st.just(m), words(m), words(m))))
def test_normal_form_idempotent_and_multiplicative(args):
    m, v, w = args
    nf = fp.semidirect_normal_form
    assert nf(nf(v, m), m) == nf(v, m)
    assert nf(v + w, m) == nf(nf(v, m) + nf(w, m), m)
    assert nf(v + fp.inverse(v), m) == ()


# -- homology -----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def plus_model(n):
    return hom.build_plus_model(n)


@functools.lru_cache(maxsize=None)
def stages(n):
    return hom.product_model(n), hom.quotient_model(n), plus_model(n)


@given(st.integers(1, 4), st.integers(0, 2), st.data())
def test_boundary_squared_on_random_chains(n, stage, data):
    K = stages(n)[stage]
    d = data.draw(st.integers(2, K.dimension))
    size = len(K.cells[d])
    chain = data.draw(st.integers(0, (1 << size) - 1))
    assert K.boundary_of_chain(d - 1, K.boundary_of_chain(d, chain)) == 0


@given(st.integers(1, 4))
def test_quotient_halves_cells(n):
    P, Q, _ = stages(n)
    assert 2 * Q.num_cells() == P.num_cells()
    assert [2 * c for c in Q.counts()] == P.counts()


@given(st.integers(1, 4))
def test_first_and_top_betti(n):
    b = hom.betti_f2(plus_model(n)).betti
    assert b[1] == n and b[-1] == 1 and len(b) == n + 3
    assert hom.euler_characteristic(plus_model(n)) == 0
    if n >= 2:
        assert b == hom.betti_formula(n).betti


# -- lifting ------------------------------------------------------------------


@given(commuting_pairs())
def test_sign_detects_component(pair):
    A, B = pair
    label = comp.classify((A, B))
    assert (lf.lifted_commutator_sign(A, B) == 1) == label.is_plus


@given(commuting_pairs(), seeds)
def test_sign_symmetric_and_conjugation_invariant(pair, gseed):
    A, B = pair
    g = rotation_from(gseed)
    s = lf.lifted_commutator_sign(A, B)
    assert lf.lifted_commutator_sign(B, A) == s
    assert lf.lifted_commutator_sign(A.conjugated_by(g), B.conjugated_by(g)) == s


@given(st.integers(1, 6), seeds)
def test_plus_samples_have_all_lifts_commuting(n, seed):
    ls = lf.lift_tuple(rot.sample_plus(n, seed))
    assert len(ls.commuting_members()) == 2**n
    for member in ls.members:
        for q, a in zip(member, rot.sample_plus(n, seed)):
            assert rot.project(q).close_to(a, TAU)


@given(seeds)
def test_decompose_u2_round_trip(seed):
    U = U2Element(lf.random_unitary(np.random.default_rng(seed)))
    theta, q = lf.decompose_u2(U)
    assert 0 <= theta < math.pi
    assert lf.reconstruction_error(U, theta, q) <= 10 * TAU
    assert abs(np.linalg.det(q.to_su2()) - 1) <= TAU


@given(seeds)
def test_commuting_u2_projects_to_plus(seed):
    U, V = lf.sample_commuting_u2(seed)
    assert rot.max_abs(U.matrix @ V.matrix - V.matrix @ U.matrix) <= TAU
    A, B = lf.su2_projection(U), lf.su2_projection(V)
    assert lf.lifted_commutator_sign(A, B) == 1
