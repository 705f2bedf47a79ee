from fractions import Fraction

import pytest

from mtt import forests
from mtt.algebra import HH, QQ, CentralTrace, GroupRingElement, Polynomial, Quaternion, group_ring
from mtt.forests import (
    Forest, classify_forest, enumerate_forests, forest_classes, identify_symmetric, lhs_mtkz, rhs_mtkz,
    rhs_mtkz_reference, rhs_sym,
)
from mtt.graph import SPECIALIZED, SYMMETRIC, GraphInstance
from mtt.harness import generate_random_instance

ID = CentralTrace(QQ, "id")


def a(i, j, ring=QQ):
    return Polynomial.var(ring, ("a", i, j))


@pytest.mark.parametrize("n,m,count", [(2, 1, 1), (3, 2, 4), (4, 3, 27), (4, 4, 81)])
def test_forest_counts(n, m, count):
    assert sum(1 for _ in enumerate_forests(n, m)) == count


def test_enumeration_range():
    with pytest.raises(ValueError):
        list(enumerate_forests(3, 4))


def test_classify_examples():
    d = classify_forest(Forest((2,)), 2, 1)
    assert d.cycles == () and d.tree_edges == ((1, 2),)
    d = classify_forest(Forest((2, 1)), 2, 2)
    assert d.cycles == ((1, 2),) and d.tree_edges == ()
    d = classify_forest(Forest((2, 3)), 3, 2)
    assert d.cycles == ()
    d = classify_forest(Forest((3, 1, 2, 1)), 4, 4)
    assert d.cycles == ((1, 3, 2),) and d.tree_edges == ((4, 1),)


def test_classes_partition_forests():
    for n, m in [(3, 3), (4, 4), (5, 4)]:
        total = sum(fc.orbit_size for fc in forest_classes(n, m))
        assert total == (n - 1) ** m


def test_two_cycle_rhs():
    h, g = Quaternion(1, 1, 0, 2), Quaternion(0, 3, 1, 0)
    inst = GraphInstance(2, 2, HH, CentralTrace(HH, "re"), {(1, 2): h, (2, 1): g})
    expected = a(1, 2) * a(2, 1) * (1 - (h * g).w)
    assert rhs_mtkz(inst) == expected
    assert lhs_mtkz(inst) == expected


def test_identity_holonomy_is_classical():
    inst = GraphInstance(4, 3, QQ, ID)
    P = rhs_mtkz(inst)
    assert len(P.terms) == 16
    assert all(c == 1 for c in P.terms.values())
    assert lhs_mtkz(inst) == P
    assert rhs_mtkz(GraphInstance(4, 4, QQ, ID)) == Polynomial.zero(QQ)


def test_zero_holonomy_counts_all_forests():
    for n in (3, 4):
        inst = GraphInstance(n, n, QQ, ID, {(i, j): 0 for i in range(1, n + 1) for j in range(1, n + 1) if i != j},
                             weight_mode=SPECIALIZED)
        assert rhs_mtkz(inst) == Polynomial.constant(QQ, (n - 1) ** n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kernel_matches_reference(n):
    for ring, tr in [("rational", "id"), ("quaternion", "re"), ("group_ring:3", "id")]:
        inst = generate_random_instance(("ref", n, ring), n, n, ring, trace=tr)
        assert rhs_mtkz(inst) == rhs_mtkz_reference(inst)


def test_kernel_is_chunk_and_worker_independent():
    from mtt._kernel import grouped_forests

    targets = [[1, 2, 3, 4], [0, 2, 3, 4], [0, 1, 3, 4], [0, 1, 2, 4]]
    labels = [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11], [12, 13, 14, 15]]
    base = grouped_forests(targets, labels, 16)
    assert grouped_forests(targets, labels, 16, chunk=7) == base
    assert grouped_forests(targets, labels, 16, chunk=5, workers=3) == base
    assert sum(base.values()) == 256


def test_three_cycle_class_factor():
    h = {(i, j): Quaternion(i, j, 1, 0) for i in range(1, 4) for j in range(1, 4) if i != j}
    inst = GraphInstance(3, 3, HH, CentralTrace(HH, "re"), h, weight_mode=SYMMETRIC)
    P = rhs_sym(inst)
    s = lambda i, j: Polynomial.var(QQ, ("a", min(i, j), max(i, j)))
    mono = s(1, 2) * s(2, 3) * s(1, 3)
    fwd = (h[(1, 2)] * h[(2, 3)] * h[(3, 1)]).w
    back = (h[(1, 3)] * h[(3, 2)] * h[(2, 1)]).w
    key = next(iter(mono.terms))
    assert P.terms[key] == 2 - fwd - back


def test_unit_complex_forbids_two_cycles():
    from mtt.algebra import Gaussian, QQi

    z = Gaussian(Fraction(3, 5), Fraction(4, 5))
    h = {(1, 2): z, (2, 1): z.conj(), (1, 3): QQi.one, (3, 1): QQi.one, (2, 3): z, (3, 2): z.conj()}
    inst = GraphInstance(3, 3, QQi, CentralTrace(QQi, "re"), h, weight_mode=SYMMETRIC)
    P = rhs_sym(inst)
    for mono in P.terms:
        assert all(e == 1 for _, e in mono)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_class_sum_equals_identified_sum(n):
    for ring, tr in [("rational", "id"), ("gaussian", "id"), ("quaternion", "re")]:
        inst = generate_random_instance(("sym", n, ring), n, n, ring, trace=tr)
        assert identify_symmetric(rhs_mtkz(inst)) == rhs_sym(inst.with_(weight_mode=SYMMETRIC))


def test_chaiken_group_ring():
    R = group_ring(3)
    g = GroupRingElement.monomial(3, 1)
    inst = GraphInstance(3, 2, R, CentralTrace(R, "id"), {(1, 2): g, (2, 1): g})
    P = rhs_mtkz(inst)
    assert P == lhs_mtkz(inst)
    key = next(iter((a(1, 2, R) * a(2, 1, R)).terms))
    assert P.terms[key] == R.one - g * g


def test_enumeration_cap():
    inst = GraphInstance(5, 5, QQ, ID)
    with pytest.raises(forests.EnumerationCapError):
        rhs_mtkz(inst, cap=100)
