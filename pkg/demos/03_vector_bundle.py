# Matrix holonomies: the lifted graph and its horizontal forests.

from fractions import Fraction

from mtt.algebra import QQ, CentralTrace, MatrixElement, matrix_ring
from mtt.graph import GraphInstance
from mtt.harness import generate_random_instance
from mtt.lift import LiftedInstance, cancellation_check, lhs_mtkzn, positivity_check, rhs_mtkzn, rhs_mttnall

R = matrix_ring(2, QQ)
swap = MatrixElement(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))
L = LiftedInstance(GraphInstance(2, 2, R, CentralTrace(QQ, "id"), {(1, 2): swap, (2, 1): swap}))
print("lifted vertices:", L.n_lifted, "lifted edges:", len(L.lifted_edges()))
# swap * swap = 1 makes the 4x4 block singular
print("det:", lhs_mtkzn(L).render(), " forests:", rhs_mtkzn(L).render())

inst = generate_random_instance(1, 3, 2, "quaternion", trace="re", N=2)
L = LiftedInstance(inst)
P = rhs_mtkzn(L)
print("terms:", len(P.terms))
print("det agrees:", lhs_mtkzn(L) == P)
print("average over all lifted forests agrees:", rhs_mttnall(L) == P)

# unitary connection with symmetric weights: exponents stay <= N and
# coefficients are nonnegative
u = generate_random_instance(1, 3, 3, "quaternion", trace="re", N=2, unitary=True, symmetric=True,
                             weight_mode="symmetric")
L = LiftedInstance(u)
P = rhs_mtkzn(L)
print("degree bound:", cancellation_check(L, rhs=P).passed, " positivity:", positivity_check(L, rhs=P).passed)
