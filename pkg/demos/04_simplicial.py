# Top-down Laplacian on the edges of the complete 2-skeleton.

import random
from fractions import Fraction

from mtt import simplicial as S
from mtt.algebra import HH, QQ, CentralTrace
from mtt.harness import random_holonomy

cx = S.SimplicialComplex(4, 2)
print("edges:", cx.cells)
print("neighbours of (1, 2):", cx.adjacent[(1, 2)])

# h = 1, unit weights, well = edges through vertex v
for v in (4, 5, 6):
    print(v, S.unit_minor(v, 2), S.kalai_count(v, 2))

# random quaternion holonomies, three inner edges
rng = random.Random(0)
h = {p: random_holonomy(HH, rng) for p in cx.pairs()}
ci = S.ComplexInstance(cx, 3, HH, CentralTrace(HH, "re"), h)
rep = S.verify_cw(ci)
print(rep.status, rep.lhs_terms, "terms")

# individual signs depend on the orientation, principal minors do not
o = S.Orientation.random(cx, rng).flip((1, 2))
print("epsilon changes:", S.epsilon((1, 2), (1, 3)), S.epsilon((1, 2), (1, 3), o))
print("minor unchanged:", S.lhs_cw(ci, o) == S.lhs_cw(ci))

# weights depending only on the triangle: no x_rho above degree one
g = S.gauge_holonomies(cx, QQ, rng, lambda r: Fraction(r.choice((1, -1, 2))))
order = S.well_order(cx, S.cells_containing(cx, 4))
ci = S.ComplexInstance(cx, 3, QQ, CentralTrace(QQ, "id"), g, "cellular", order=order)
print(S.rhs_cw(ci).render())
