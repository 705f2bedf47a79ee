from fractions import Fraction

import pytest

from mtt import lift
from mtt.algebra import HH, QQ, CentralTrace, MatrixElement, Polynomial, Quaternion, matrix_ring
from mtt.forests import identify_symmetric, rhs_mtkz
from mtt.graph import SYMMETRIC, GraphInstance
from mtt.harness import generate_random_instance
from mtt.lift import (
    LiftedInstance, PreconditionError, as_matrix_instance, assemble_laplacian, cancellation_check, lhs_mtkzn,
    positivity_check, rhs_mtkzn, rhs_mttnall, rhs_sym_lift,
)

R2 = matrix_ring(2, QQ)
ID = CentralTrace(QQ, "id")


def mat(*rows):
    return MatrixElement(tuple(tuple(Fraction(x) for x in r) for r in rows))


SWAP = mat((0, 1), (1, 0))


def test_lifted_shape():
    L = LiftedInstance(GraphInstance(2, 1, R2, ID))
    assert L.n_lifted == 4 and len(L.lifted_edges()) == 8
    assert L.index(2, 1) == 2 and L.vertex(3) == (2, 2)


def test_identity_lift_is_horizontal():
    L = LiftedInstance(GraphInstance(2, 1, R2, ID))
    assert L.h(L.index(1, 1), L.index(2, 1)) == 1
    assert L.h(L.index(1, 1), L.index(2, 2)) == 0
    with pytest.raises(ValueError):
        L.h(0, 1)


def test_assembled_diagonal_blocks_are_diagonal():
    inst = generate_random_instance("blocks", 3, 2, "rational", N=2)
    M = assemble_laplacian(LiftedInstance(inst))
    zero = Polynomial.zero(QQ)
    for i in range(3):
        assert M[2 * i, 2 * i + 1] == zero and M[2 * i + 1, 2 * i] == zero


def test_single_edge_lift():
    inst = generate_random_instance("one", 2, 1, "rational", N=2)
    L = LiftedInstance(inst)
    a12 = Polynomial.var(QQ, ("a", 1, 2))
    assert rhs_mtkzn(L) == a12 * a12 == lhs_mtkzn(L)
    assert rhs_mttnall(L) == a12 * a12


def test_swap_holonomy_vanishes():
    inst = GraphInstance(2, 2, R2, ID, {(1, 2): SWAP, (2, 1): SWAP})
    L = LiftedInstance(inst)
    zero = Polynomial.zero(QQ)
    assert lhs_mtkzn(L) == zero == rhs_mtkzn(L) == rhs_mttnall(L)


@pytest.mark.parametrize("ring,tr", [("rational", "id"), ("quaternion", "re"), ("group_ring:3", "id")])
def test_fiber_one_reduces_to_scalar(ring, tr):
    for m in (1, 2, 3):
        inst = generate_random_instance(("n1", ring, m), 3, m, ring, trace=tr)
        L = LiftedInstance(as_matrix_instance(inst))
        assert rhs_mtkzn(L) == rhs_mtkz(inst)
        if L.base.target.contains_rationals:
            assert rhs_mttnall(L) == rhs_mtkz(inst)


@pytest.mark.parametrize("n,N,m", [(2, 2, 2), (3, 2, 2), (2, 3, 2), (3, 2, 3)])
def test_lifted_identity(n, N, m):
    for ring, tr in [("rational", "id"), ("quaternion", "re")]:
        inst = generate_random_instance(("lift", n, N, m, ring), n, m, ring, trace=tr, N=N)
        L = LiftedInstance(inst)
        P = rhs_mtkzn(L)
        assert lhs_mtkzn(L) == P
        assert rhs_mttnall(L) == P


def test_group_ring_average_unavailable():
    inst = generate_random_instance("gr", 2, 2, "group_ring:2", N=2)
    with pytest.raises(PreconditionError):
        rhs_mttnall(LiftedInstance(inst))


def test_symmetric_class_sum():
    inst = generate_random_instance("symlift", 3, 2, "quaternion", trace="re", N=2)
    L = LiftedInstance(inst)
    assert identify_symmetric(rhs_mtkzn(L)) == rhs_sym_lift(LiftedInstance(inst.with_(weight_mode=SYMMETRIC)))
    assert lift.verify_sym_lift(L).equal


def test_unit_modulus_scalar_cancellation():
    from mtt.algebra import Gaussian, QQi

    z = Gaussian(Fraction(3, 5), Fraction(4, 5))
    inst = GraphInstance(2, 2, QQi, CentralTrace(QQi, "id"), {(1, 2): z, (2, 1): z.conj()}, weight_mode=SYMMETRIC)
    L = LiftedInstance(as_matrix_instance(inst))
    assert rhs_mtkzn(L) == Polynomial.zero(QQi)
    assert cancellation_check(L).passed


def test_unitary_quaternion_cancellation_and_positivity():
    inst = generate_random_instance("cb", 3, 3, "quaternion", trace="re", N=2, unitary=True, symmetric=True,
                                    weight_mode=SYMMETRIC)
    L = LiftedInstance(inst)
    P = rhs_mtkzn(L)
    assert P != Polynomial.zero(QQ)
    assert cancellation_check(L, rhs=P).passed
    assert positivity_check(L, rhs=P).passed


def test_cancellation_needs_inverse_pairs():
    inst = generate_random_instance("noinv", 2, 2, "rational", N=2, weight_mode=SYMMETRIC)
    res = cancellation_check(LiftedInstance(inst))
    assert not res.passed and res.skipped
    rep = lift.verify_cancellation(LiftedInstance(inst))
    assert rep.status == "SKIPPED"


def test_unitary_generator_is_exact():
    inst = generate_random_instance("unit", 3, 1, "quaternion", trace="re", N=3, unitary=True, symmetric=True)
    for (i, j), x in inst.holonomies.items():
        prod = x.conj() * x
        assert all(prod[k, l] == (HH.one if k == l else HH.zero) for k in range(3) for l in range(3))
        assert inst.h(j, i) == x.conj()


def test_block_diagonal_factorization():
    inst = generate_random_instance("fact", 2, 2, "quaternion", trace="re", N=3, block=1)
    rep = lift.verify_factorization(inst, 1)
    assert rep.equal
    with pytest.raises(ValueError):
        lift.split_blocks(generate_random_instance("full", 2, 2, "rational", N=2), 1)
