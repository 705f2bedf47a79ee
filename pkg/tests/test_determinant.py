import random
from fractions import Fraction
from math import factorial

import pytest

from mtt.algebra import HH, QQ, CentralTrace, Polynomial, Quaternion, block_diag, matrix_ring
from mtt.determinant import (
    PermutationCycleForm, SizeCapError, det_exact_commutative, iter_cycle_forms, tau_det, tau_det_expanded,
)
from mtt.graph import GraphInstance, build_laplacian, principal_submatrix
from mtt.harness import generate_random_instance

ID = CentralTrace(QQ, "id")
RE = CentralTrace(HH, "re")


def const(ring, x):
    return Polynomial.constant(ring, x)


def var(name, ring=QQ):
    return Polynomial.var(ring, (name,))


def test_cycle_forms_cover_permutations():
    for k in range(1, 6):
        forms = list(iter_cycle_forms(k))
        assert len(forms) == factorial(k)
        assert len({tuple(sorted(f.as_mapping().items())) for f in forms}) == factorial(k)
    assert PermutationCycleForm(3, ((0, 1, 2),), ()).sign == 1
    assert PermutationCycleForm(2, ((0, 1),), ()).sign == -1


def test_one_by_one_and_two_by_two():
    assert tau_det([[var("a12")]], ID) == var("a12")
    p, q, r, s = (var(c) for c in "pqrs")
    assert tau_det([[p, q], [r, s]], ID) == p * s - q * r


def test_hermitian_quaternion_moore_determinant():
    q = Quaternion(1, 2, -1, 3)
    M = [[const(HH, 3), const(HH, q)], [const(HH, q.conj()), const(HH, Fraction(5, 2))]]
    assert tau_det(M, RE) == const(QQ, Fraction(15, 2) - q.norm())


def test_exact_commutative_examples():
    assert det_exact_commutative([[1 if i == j else 0 for j in range(5)] for i in range(5)]) == 1
    assert det_exact_commutative([[1, 2], [3, 4]]) == -2
    assert det_exact_commutative([[0, 1], [1, 0]]) == -1
    assert det_exact_commutative([[Fraction(1, 2), 1], [1, 2]]) == 0


def test_cayley_minor():
    inst = GraphInstance(4, 3, QQ, ID, weight_mode="specialized")
    M = principal_submatrix(build_laplacian(inst), 3)
    rows = [[x.specialize({}) for x in r] for r in M.rows()]
    assert det_exact_commutative(rows) == 16
    assert tau_det(M, ID) == const(QQ, 16)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_memoised_matches_expansion(k):
    inst = generate_random_instance(("det", k), 4, k, "quaternion", trace="re")
    M = principal_submatrix(build_laplacian(inst), k)
    assert tau_det(M, RE) == tau_det_expanded(M, RE)


def test_bareiss_agrees_on_rationals():
    rng = random.Random(5)
    for k in range(1, 6):
        rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(k)] for _ in range(k)]
        poly = [[const(QQ, x) for x in r] for r in rows]
        assert tau_det(poly, ID) == const(QQ, det_exact_commutative(rows))


def test_multilinear_in_rows():
    rng = random.Random(2)
    R = QQ
    rows = [[const(R, Fraction(rng.randint(-3, 3))) for _ in range(3)] for _ in range(3)]
    alt = [const(R, Fraction(rng.randint(-3, 3))) for _ in range(3)]
    c = Fraction(3, 2)
    mixed = [list(r) for r in rows]
    mixed[1] = [x * c + y for x, y in zip(rows[1], alt)]
    swapped = [list(r) for r in rows]
    swapped[1] = alt
    assert tau_det(mixed, ID) == tau_det(rows, ID) * c + tau_det(swapped, ID)


def test_block_diagonal_factorises():
    rng = random.Random(7)
    A = [[const(HH, HH.random_element(rng)) for _ in range(2)] for _ in range(2)]
    B = [[const(HH, HH.random_element(rng)) for _ in range(2)] for _ in range(2)]
    Z = const(HH, 0)
    M = [A[0] + [Z, Z], A[1] + [Z, Z], [Z, Z] + B[0], [Z, Z] + B[1]]
    assert tau_det(M, RE) == tau_det(A, RE) * tau_det(B, RE)


def test_size_cap(monkeypatch):
    M = [[const(QQ, int(i == j)) for j in range(4)] for i in range(4)]
    with pytest.raises(SizeCapError):
        tau_det(M, ID, cap=3)
    monkeypatch.setenv("MTT_DET_CAP", "3")
    with pytest.raises(SizeCapError):
        tau_det(M, ID)
    assert tau_det(M, ID, force=True) == const(QQ, 1)


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        tau_det([], ID)
