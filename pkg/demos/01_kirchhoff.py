# Classical matrix-tree theorem as the h = 1 special case.

from fractions import Fraction

from mtt.algebra import QQ, CentralTrace
from mtt.determinant import det_exact_commutative
from mtt.forests import classify_forest, enumerate_forests, lhs_mtkz, rhs_mtkz
from mtt.graph import GraphInstance, build_laplacian, principal_submatrix

ID = CentralTrace(QQ, "id")

# K4 with symbolic edge weights a_ij, vertex 4 as the well
inst = GraphInstance(4, 3, QQ, ID)
P = lhs_mtkz(inst)
print("minor:", P.render())
print("terms:", len(P.terms))          # 16 spanning trees rooted at 4
print("forest sum agrees:", P == rhs_mtkz(inst))

# every forest with a cycle cancels once h = 1
trees = [F for F in enumerate_forests(4, 3) if not classify_forest(F, 4, 3).cycles]
print("cycle-free forests:", len(trees))

# numeric minor with all weights 1: Cayley's 4^2
unit = GraphInstance(4, 3, QQ, ID, weight_mode="specialized")
M = principal_submatrix(build_laplacian(unit), 3)
print("det:", det_exact_commutative([[x.specialize({}) for x in r] for r in M.rows()]))

# the full Laplacian is singular
print("full minor:", lhs_mtkz(GraphInstance(4, 4, QQ, ID)).render())
