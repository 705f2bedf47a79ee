import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mtt.algebra import (
    HH, QQ, QQi, CentralTrace, Gaussian, GroupRingElement, MatrixElement, Polynomial, Quaternion,
    RingDescriptor, RingError, check_centrality, group_ring, group_ring_evaluate, matrix_ring, poly_trace,
)

RINGS = [QQ, QQi, HH, group_ring(3), matrix_ring(2, QQ), matrix_ring(2, HH)]


def axiom_failures(ring, trials, seed=0):
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        x, y, z = (ring.random_element(rng) for _ in range(3))
        checks = {
            "add-assoc": (x + y) + z == x + (y + z),
            "add-comm": x + y == y + x,
            "mul-assoc": (x * y) * z == x * (y * z),
            "left-dist": x * (y + z) == x * y + x * z,
            "right-dist": (x + y) * z == x * z + y * z,
            "unit": ring.one * x == x == x * ring.one,
            "zero": x + ring.zero == x and x - x == ring.zero,
        }
        bad += [(k, x, y, z) for k, v in checks.items() if not v]
    return bad


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_ring_axioms_seeded(ring):
    assert axiom_failures(ring, 1000) == []


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
quaternions = st.builds(Quaternion, rationals, rationals, rationals, rationals)


@settings(max_examples=300, deadline=None)
@given(quaternions, quaternions, quaternions)
def test_quaternion_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).conj() == y.conj() * x.conj()
    assert (x * y).norm() == x.norm() * y.norm()


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_group_ring_commutes(a, b):
    x, y = GroupRingElement(tuple(a)), GroupRingElement(tuple(b))
    assert x * y == y * x
    assert (x * y).conj() == x.conj() * y.conj()


def test_small_products():
    i, j, k = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)
    assert i * j == k and j * i == -k
    assert i * i == Quaternion(-1, 0, 0, 0)
    one, g = GroupRingElement.monomial(2, 0), GroupRingElement.monomial(2, 1)
    assert (one + g) * (one - g) == group_ring(2).zero
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)
    assert Gaussian(1, 1) * Gaussian(1, -1) == Gaussian(2, 0)


def test_inverses():
    q = Quaternion(1, 2, -1, 3)
    assert q * q.inverse() == HH.one
    z = Gaussian(Fraction(1, 2), 3)
    assert z * z.inverse() == QQi.one
    g = GroupRingElement.monomial(5, 2, -1)
    assert g * g.inverse() == group_ring(5).one
    with pytest.raises(RingError):
        (GroupRingElement.monomial(3, 0) + GroupRingElement.monomial(3, 1)).inverse()


def test_mismatched_elements_rejected():
    with pytest.raises(RingError):
        GroupRingElement.monomial(2, 0) * GroupRingElement.monomial(3, 0)
    A = matrix_ring(2, QQ).one
    B = matrix_ring(3, QQ).one
    with pytest.raises(RingError):
        A * B


@pytest.mark.parametrize("text", ["rational", "gaussian", "quaternion", "group_ring:4", "matrix:2:quaternion",
                                  "matrix:3:group_ring:2"])
def test_descriptor_round_trip(text):
    R = RingDescriptor.parse(text)
    assert str(R) == text
    x = R.random_element(random.Random(3))
    assert R.parse_element(R.literal(x)) == x


@pytest.mark.parametrize("bad", ["", "reals", "group_ring:0", "matrix:0:rational", "matrix:2"])
def test_descriptor_rejects(bad):
    with pytest.raises(RingError):
        RingDescriptor.parse(bad)


def test_real_part_trace():
    re = CentralTrace(HH, "re")
    assert re(Quaternion(3, 2, -1, 1)) == 3
    assert re(Quaternion(0, 1, 0, 0) * Quaternion(0, 0, 1, 0)) == 0
    assert CentralTrace(QQ, "id")(Fraction(5, 7)) == Fraction(5, 7)
    assert re.target == QQ


def test_identity_trace_needs_commutative_ring():
    with pytest.raises(RingError):
        CentralTrace(HH, "id")
    with pytest.raises(RingError):
        CentralTrace(group_ring(2), "re")


def test_normalized_matrix_trace():
    R = matrix_ring(2, QQ)
    tr = CentralTrace.parse(R, "id")
    assert tr(MatrixElement(((Fraction(1), Fraction(5)), (Fraction(7), Fraction(3))))) == 2
    assert check_centrality(tr, seed=0, trials=50).passed


@pytest.mark.parametrize("ring,kind", [(QQ, "id"), (QQi, "id"), (QQi, "re"), (HH, "re"), (group_ring(3), "id")])
def test_central_traces_pass(ring, kind):
    res = check_centrality(CentralTrace(ring, kind), seed=1, trials=200)
    assert res.passed and res.witness is None


class CoeffI:
    """Planted non-central functional: the i-coordinate of a quaternion."""

    source = HH

    def __call__(self, q):
        return q.x


def test_non_central_functional_reports_witness():
    res = check_centrality(CoeffI(), seed=0, trials=10)
    assert not res.passed
    x, y = res.witness
    assert (x, y) == (Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1))
    assert (x * y).x == 1 and (y * x).x == -1


def test_polynomial_basics():
    a12 = Polynomial.var(QQ, ("a", 1, 2))
    a21 = Polynomial.var(QQ, ("a", 2, 1))
    assert (a12 * a21).render() == "1*a1_2*a2_1"
    assert ((1 - a12) + a12) == Polynomial.constant(QQ, 1)
    assert (a12 - a12).render() == "0"
    P = (a12 + Polynomial.var(QQ, ("a", 1, 3)))
    assert P.specialize({("a", 1, 2): 1, ("a", 1, 3): 1}) == 2
    with pytest.raises(KeyError):
        P.specialize({("a", 1, 2): 1})


def test_polynomial_keeps_coefficient_order():
    i, j = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0)
    P = Polynomial.var(HH, ("a", 1, 2), i) * Polynomial.var(HH, ("a", 2, 1), j)
    Q = Polynomial.var(HH, ("a", 2, 1), j) * Polynomial.var(HH, ("a", 1, 2), i)
    assert P.coefficient({("a", 1, 2): 1, ("a", 2, 1): 1}) == Quaternion(0, 0, 0, 1)
    assert Q.coefficient({("a", 1, 2): 1, ("a", 2, 1): 1}) == Quaternion(0, 0, 0, -1)


def test_polynomial_trace():
    a12 = Polynomial.var(HH, ("a", 1, 2))
    a21 = Polynomial.var(HH, ("a", 2, 1))
    P = a12 * Quaternion(0, 1, 0, 0) + a21 * 2
    assert poly_trace(CentralTrace(HH, "re"), P) == Polynomial.var(QQ, ("a", 2, 1)) * 2
    G = QQi
    P = Polynomial.var(G, ("a", 1, 2)) * Polynomial.var(G, ("a", 2, 1)) * Gaussian(1, 1)
    assert poly_trace(CentralTrace(G, "re"), P).render() == "1*a1_2*a2_1"


def test_zero_specialization():
    R = QQ
    t = Polynomial.var(R, ("t",))
    P = (1 - t) * Polynomial.var(R, ("a", 1, 2)) * Polynomial.var(R, ("a", 2, 1))
    assert P.specialize({("t",): 1, ("a", 1, 2): 1, ("a", 2, 1): 1}) == 0


def test_group_ring_evaluation_at_minus_one():
    R = group_ring(2)
    g = GroupRingElement.monomial(2, 1)
    P = Polynomial.var(R, ("a", 1, 2)) * (R.one - g * 3)
    assert group_ring_evaluate(P, -1).render() == "4*a1_2"


def test_render_is_deterministic():
    R = QQ
    P = Polynomial.var(R, ("a", 2, 1)) + Polynomial.var(R, ("a", 1, 2)) * Fraction(-1, 2)
    Q = Polynomial.var(R, ("a", 1, 2)) * Fraction(-1, 2) + Polynomial.var(R, ("a", 2, 1))
    assert P.render() == Q.render()
    assert hash(P) == hash(Q)
