# A quaternion connection on K3: cycles now carry 1 - Re(h_c).

from mtt.algebra import HH, CentralTrace, Quaternion
from mtt.forests import identify_symmetric, lhs_mtkz, rhs_mtkz, rhs_sym, verify_mtkz
from mtt.graph import GraphInstance
from mtt.harness import generate_random_instance, preset_instance
from mtt.report import render_report

i, j = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0)
inst = GraphInstance(2, 2, HH, CentralTrace(HH, "re"), {(1, 2): i, (2, 1): j})
# h12 h21 = ij = k has zero real part, so the 2-cycle weighs 1
print(lhs_mtkz(inst).render())

inst = generate_random_instance(7, 3, 3, "quaternion", trace="re")
print(render_report(verify_mtkz(inst)))

# identifying a_ij with a_ji groups each cycle with its reverse
sym = inst.with_(weight_mode="symmetric")
print(rhs_sym(sym).render())
print("same after identification:", identify_symmetric(rhs_mtkz(inst)) == rhs_sym(sym))

# unit quaternions with h_ji = conj(h_ij): no 2-cycles, nonnegative coefficients
k = preset_instance("kenyon", 3, 3, 3)
P = rhs_sym(k)
print(P.render())
print("all coefficients >= 0:", all(c >= 0 for c in P.terms.values()))
