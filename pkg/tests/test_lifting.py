import math

import numpy as np
import pytest

from commuting_tuples.components import classify
from commuting_tuples.errors import NonCommutingError, NonUnitaryError
from commuting_tuples.lifting import (
    commutator_signs,
    decompose_u2,
    lift_tuple,
    lifted_commutator_sign,
    reconstruction_error,
    sample_commuting_u2,
    su2_projection,
)
from commuting_tuples.rotations import Quaternion, RotationElement, U2Element, project, sample_minus, sample_plus

from conftest import E1, E2, E3, invol, rot_about

I = RotationElement.identity()
TOL = 1e-9


def test_lift_identity_pair():
    ls = lift_tuple([I, I])
    assert len(ls) == 4
    reps = sorted((m[0].w, m[1].w) for m in ls.members)
    assert reps == [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    assert len(ls.commuting_members()) == 4


def test_lifts_of_plus_triple_commute():
    triple = sample_plus(3, seed=11)
    ls = lift_tuple(triple)
    assert len(ls.commuting_members(TOL)) == 8
    for member in ls.members:
        for q, a in zip(member, triple):
            assert project(q).close_to(a, TOL)


def test_lifts_of_perpendicular_involutions():
    ls = lift_tuple([invol(E1), invol(E2)])
    assert len(ls) == 4
    for qa, qb in ls.members:
        assert abs(abs(qa.x) - 1) <= TOL and abs(abs(qb.y) - 1) <= TOL
    assert ls.commuting_members(TOL) == []


def test_commutator_sign_examples():
    assert lifted_commutator_sign(rot_about(E3, 0.3), rot_about(E3, 1.2)) == 1
    # i j i^-1 j^-1 = i j (-i)(-j) = (ij)^2 = k^2 = -1
    i, j = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0)
    assert (i * j * i.conjugate() * j.conjugate()).close_to(Quaternion(-1, 0, 0, 0))
    assert lifted_commutator_sign(invol(E1), invol(E2)) == -1
    assert lifted_commutator_sign(I, invol(E2)) == 1
    with pytest.raises(NonCommutingError):
        lifted_commutator_sign(invol(E1), rot_about(E3, 1.0))


def test_commutator_signs_of_minus_triple():
    elems = sample_minus("XYX", seed=2)
    assert commutator_signs(elems) == [(0, 1, -1), (0, 2, 1), (1, 2, -1)]


def test_decompose_identity():
    theta, q = decompose_u2(U2Element(np.eye(2)))
    assert theta == 0.0 and q.close_to(Quaternion.identity())


def test_decompose_scalar_i():
    # det = -1 = e^(i pi), so theta = pi/2 and S = I
    theta, q = decompose_u2(U2Element(np.diag([1j, 1j])))
    assert math.isclose(theta, math.pi / 2)
    assert q.close_to(Quaternion.identity(), TOL)


def test_decompose_diag_one_minus_one():
    U = U2Element(np.diag([1, -1]))
    theta, q = decompose_u2(U)
    assert math.isclose(theta, math.pi / 2)
    # S = e^(-i pi/2) diag(1, -1) = diag(-i, i), the quaternion -i
    assert q.close_to(Quaternion(0, -1, 0, 0), TOL)
    assert reconstruction_error(U, theta, q) <= 10 * TOL
    assert abs(np.linalg.det(q.to_su2()) - 1) <= TOL


def test_decompose_rejects_non_unitary():
    with pytest.raises(NonUnitaryError):
        decompose_u2(U2Element([[1, 1], [0, 1]]))


def test_sample_commuting_u2():
    U, V = sample_commuting_u2(seed=4)
    assert np.max(np.abs(U.matrix @ V.matrix - V.matrix @ U.matrix)) <= TOL
    A, B = su2_projection(U), su2_projection(V)
    assert lifted_commutator_sign(A, B) == 1
    assert classify([A, B]).is_plus
    U2, V2 = sample_commuting_u2(seed=4)
    assert np.array_equal(U.matrix, U2.matrix) and np.array_equal(V.matrix, V2.matrix)


def test_quaternion_su2_is_a_homomorphism(rng):
    for _ in range(20):
        a, b = (Quaternion.from_array(v / np.linalg.norm(v)) for v in rng.standard_normal((2, 4)))
        assert np.max(np.abs((a * b).to_su2() - a.to_su2() @ b.to_su2())) <= 1e-12
        assert Quaternion.from_su2(a.to_su2()).close_to(a, 1e-15)
