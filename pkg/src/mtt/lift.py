"""Matrix holonomies through the lifted graph.

A base instance with holonomies in ``M_N(H)`` is unfolded into a scalar
problem on the vertex set ``V x {1..N}``: the lifted edge
``((i,k), (j,l))`` carries the scalar holonomy ``(h_ij)[k,l]`` and the base
weight ``a_ij``.  Lifted vertex ``(i, k)`` sits at row ``N*(i-1) + k``
(1-based) of the assembled ``Nn x Nn`` matrix.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    GAUSSIAN, MATRIX, QUATERNION, RATIONAL, Gaussian, MatrixElement, Polynomial,
    RingError, matrix_ring,
)
from .determinant import tau_det
from .forests import forest_sum, is_canonical_orientation, reverse_cycle
from .graph import SYMMETRIC, GraphInstance, LaplacianMatrix, principal_submatrix
from .report import VerificationReport, compare, skipped


class PreconditionError(ValueError):
    """The requested computation is undefined for this instance."""


@dataclass(frozen=True, eq=False)
class LiftedInstance:
    base: GraphInstance

    def __post_init__(self):
        if self.base.ring.kind != MATRIX:
            raise RingError("lift_instance needs matrix-valued holonomies")

    @property
    def N(self) -> int:
        return self.base.ring.N

    @property
    def H(self):
        return self.base.ring.base

    @property
    def n_lifted(self) -> int:
        return self.N * self.base.n

    @property
    def m_lifted(self) -> int:
        return self.N * self.base.m

    def index(self, i: int, k: int) -> int:
        """0-based row of lifted vertex (i, k); i and k are 1-based."""
        return self.N * (i - 1) + (k - 1)

    def vertex(self, idx: int) -> tuple:
        return idx // self.N + 1, idx % self.N + 1

    def h(self, u: int, v: int):
        """Scalar holonomy of the lifted edge u -> v (0-based indices)."""
        (i, k), (j, l) = self.vertex(u), self.vertex(v)
        if i == j:
            raise ValueError("the lifted graph has no vertical edges")
        return self.base.h(i, j)[k - 1, l - 1]

    def lifted_edges(self) -> list:
        N = self.N
        return [((i, k), (j, l)) for i, j in self.base.edges() for k in range(1, N + 1) for l in range(1, N + 1)]

    def well(self) -> list:
        return [(i, k) for i in self.base.well for k in range(1, self.N + 1)]

    def is_horizontal(self, u: int, v: int) -> bool:
        return u % self.N == v % self.N

    def cycle_holonomy(self, cycle: tuple):
        acc = self.h(cycle[0], cycle[1])
        for a, b in zip(cycle[1:], cycle[2:] + cycle[:1]):
            acc = acc * self.h(a, b)
        return acc

    def cycle_is_horizontal(self, cycle: tuple) -> bool:
        return all(self.is_horizontal(a, b) for a, b in zip(cycle, cycle[1:] + cycle[:1]))


def lift_instance(inst: GraphInstance) -> LiftedInstance:
    return LiftedInstance(inst)


def as_matrix_instance(inst: GraphInstance) -> GraphInstance:
    """View scalar holonomies as 1 x 1 matrices."""
    if inst.ring.kind == MATRIX:
        return inst
    R = matrix_ring(1, inst.ring)
    hol = {e: MatrixElement(((x,),)) for e, x in inst.holonomies.items()}
    return inst.with_(ring=R, holonomies=hol)


def assemble_laplacian(lift: LiftedInstance) -> LaplacianMatrix:
    """The ``Nn x Nn`` scalar matrix with blocks ``-h_ij a_ij`` and ``(sum_j a_ij) I_N``."""
    base, N, H = lift.base, lift.N, lift.H
    size = lift.n_lifted
    zero = Polynomial.zero(H)
    rows = [[zero] * size for _ in range(size)]
    for i in range(1, base.n + 1):
        diag = zero
        for j in range(1, base.n + 1):
            if j != i:
                diag = diag + base.weight(i, j, H)
        for k in range(1, N + 1):
            rows[lift.index(i, k)][lift.index(i, k)] = diag
        for j in range(1, base.n + 1):
            if j == i:
                continue
            a = base.weight(i, j, H)
            hij = base.h(i, j)
            for k in range(1, N + 1):
                for l in range(1, N + 1):
                    rows[lift.index(i, k)][lift.index(j, l)] = Polynomial.constant(H, -hij[k - 1, l - 1]) * a
    return LaplacianMatrix(tuple(tuple(r) for r in rows))


def lhs_mtkzn(lift: LiftedInstance, *, force: bool = False) -> Polynomial:
    M = principal_submatrix(assemble_laplacian(lift), lift.m_lifted)
    return tau_det(M, lift.base.trace, force=force)


def _lifted_space(lift: LiftedInstance):
    base, N = lift.base, lift.N
    K = base.target
    edges = base.edges()
    index = {e: t for t, e in enumerate(edges)}
    weights = [base.weight(i, j, K) for i, j in edges]
    targets, labels, tree_ok = [], [], []
    for u in range(lift.m_lifted):
        i, k = lift.vertex(u)
        t, lab, ok = [], [], []
        for j in range(1, base.n + 1):
            if j == i:
                continue
            for l in range(1, N + 1):
                t.append(lift.index(j, l))
                lab.append(index[(i, j)])
                ok.append(k == l)
        targets.append(t)
        labels.append(lab)
        tree_ok.append(ok)
    return targets, labels, weights, tree_ok


def rhs_mtkzn(lift: LiftedInstance, *, workers: int = 1, cap: int | None = None) -> Polynomial:
    """Sum over horizontal lifted forests with factors ``1 - tau(h_c)`` on
    horizontal cycles and ``-tau(h_c)`` on skew ones."""
    tau, K = lift.base.trace, lift.base.target

    def factor(cycles):
        f = K.one
        for c in cycles:
            t = tau(lift.cycle_holonomy(c))
            f = f * ((1 - t) if lift.cycle_is_horizontal(c) else -t)
        return f

    targets, labels, weights, tree_ok = _lifted_space(lift)
    return forest_sum(targets, labels, weights, factor, K, tree_ok=tree_ok, workers=workers, cap=cap)


def rhs_sym_lift(lift: LiftedInstance, *, workers: int = 1, cap: int | None = None) -> Polynomial:
    """Class-summed horizontal forest sum for symmetric weights."""
    if lift.base.weight_mode != SYMMETRIC:
        raise ValueError("rhs_sym_lift needs the symmetric weight mode")
    tau, K = lift.base.trace, lift.base.target

    def factor(cycles):
        f = K.one
        for c in cycles:
            horizontal = lift.cycle_is_horizontal(c)
            t = tau(lift.cycle_holonomy(c))
            if len(c) == 2:
                f = f * ((1 - t) if horizontal else -t)
            elif not is_canonical_orientation(c):
                return None
            else:
                both = t + tau(lift.cycle_holonomy(reverse_cycle(c)))
                f = f * ((2 - both) if horizontal else -both)
        return f

    targets, labels, weights, tree_ok = _lifted_space(lift)
    return forest_sum(targets, labels, weights, factor, K, tree_ok=tree_ok, workers=workers, cap=cap)


def rhs_mttnall(lift: LiftedInstance, *, workers: int = 1, cap: int | None = None) -> Polynomial:
    """``N^-(Nm)`` times the sum over all lifted forests of
    ``a_F prod_c (1 - N^len(c) tau(h_c))``."""
    tau, K = lift.base.trace, lift.base.target
    if not K.contains_rationals:
        raise PreconditionError(f"the averaged formula needs 1/N in the target ring, {K} has no inverses")
    N = lift.N

    def factor(cycles):
        f = K.one
        for c in cycles:
            f = f * (1 - N ** len(c) * tau(lift.cycle_holonomy(c)))
        return f

    targets, labels, weights, _ = _lifted_space(lift)
    total = forest_sum(targets, labels, weights, factor, K, workers=workers, cap=cap)
    return total * Fraction(1, N ** lift.m_lifted)


# ---------------------------------------------------------------------------
# cancellation, positivity, factorization


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    offending: tuple = ()
    skipped: str = ""

    def __bool__(self):
        return self.passed


def _is_identity(x: MatrixElement, H) -> bool:
    return all(x[k, l] == (H.one if k == l else H.zero) for k in range(x.N) for l in range(x.N))


def cancellation_precondition(lift: LiftedInstance) -> str:
    """Empty string when the degree bound is expected to hold, else the reason."""
    base, H = lift.base, lift.H
    if base.weight_mode != SYMMETRIC:
        return "needs symmetric weights"
    if H.is_commutative and base.trace.kind == "id":
        for i, j in base.edges():
            if not _is_identity(base.h(j, i) * base.h(i, j), H):
                return f"h_{j}{i} is not the inverse of h_{i}{j}"
        return ""
    if H.kind == QUATERNION and base.trace.kind == "re":
        for i, j in base.edges():
            hij = base.h(i, j)
            if base.h(j, i) != hij.conj():
                return f"h_{j}{i} is not the conjugate transpose of h_{i}{j}"
            if not _is_identity(hij.conj() * hij, H):
                return f"h_{i}{j} is not unitary"
        return ""
    return "needs (commutative H, identity trace) or (quaternions, unitary h, real part)"


def degree_excess(P: Polynomial, bound: int) -> list:
    """Monomials of ``P`` in which some variable has exponent above ``bound``."""
    return [m for m in P.terms if any(e > bound for _, e in m)]


def cancellation_check(lift: LiftedInstance, *, rhs: Polynomial | None = None, workers: int = 1) -> CheckResult:
    reason = cancellation_precondition(lift)
    if reason:
        return CheckResult(False, (), reason)
    P = rhs_mtkzn(lift, workers=workers) if rhs is None else rhs
    bad = degree_excess(P, lift.N)
    return CheckResult(not bad, tuple(Polynomial(P.ring, {m: P.terms[m]}).render() for m in bad[:10]))


def _nonnegative(c) -> bool:
    if isinstance(c, Fraction):
        return c >= 0
    if isinstance(c, Gaussian):
        return c.im == 0 and c.re >= 0
    raise RingError(f"sign of {c!r} is undefined")


def positivity_check(lift: LiftedInstance, *, rhs: Polynomial | None = None, workers: int = 1) -> CheckResult:
    """All coefficients of the forest sum are nonnegative (unitary holonomies)."""
    if lift.base.target.kind not in (RATIONAL, GAUSSIAN):
        return CheckResult(False, (), f"no order on {lift.base.target}")
    P = rhs_mtkzn(lift, workers=workers) if rhs is None else rhs
    bad = [m for m, c in P.sorted_terms() if not _nonnegative(c)]
    return CheckResult(not bad, tuple(Polynomial(P.ring, {m: P.terms[m]}).render() for m in bad[:10]))


def split_blocks(inst: GraphInstance, p: int) -> tuple:
    """Split consistently block-diagonal holonomies into sizes p and N - p."""
    R = inst.ring
    N = R.N
    if not 0 < p < N:
        raise ValueError(f"block size must be in 1..{N - 1}")
    A, B = {}, {}
    for e, x in inst.holonomies.items():
        for k in range(N):
            for l in range(N):
                if (k < p) != (l < p) and x[k, l] != R.base.zero:
                    raise ValueError(f"h{e} is not block diagonal with block size {p}")
        A[e] = x.block(0, p)
        B[e] = x.block(p, N)
    ia = inst.with_(ring=matrix_ring(p, R.base), holonomies=A)
    ib = inst.with_(ring=matrix_ring(N - p, R.base), holonomies=B)
    return ia, ib


def _params(lift: LiftedInstance) -> dict:
    b = lift.base
    return {"n": b.n, "m": b.m, "N": lift.N, "ring": str(b.ring), "trace": str(b.trace), "weights": b.weight_mode}


def verify_mtkzn(lift: LiftedInstance, *, workers: int = 1, force: bool = False) -> VerificationReport:
    t0 = time.perf_counter()
    lhs = lhs_mtkzn(lift, force=force)
    t1 = time.perf_counter()
    rhs = rhs_mtkzn(lift, workers=workers)
    t2 = time.perf_counter()
    return compare("mtkzn", lift.base.digest(), lhs, rhs, params=_params(lift), elapsed={"lhs": t1 - t0, "rhs": t2 - t1})


def verify_mttnall(lift: LiftedInstance, *, workers: int = 1) -> VerificationReport:
    """Determinant-free cross-check: horizontal sum against the averaged all-forest sum."""
    t0 = time.perf_counter()
    lhs = rhs_mtkzn(lift, workers=workers)
    t1 = time.perf_counter()
    rhs = rhs_mttnall(lift, workers=workers)
    t2 = time.perf_counter()
    return compare("mttnall", lift.base.digest(), lhs, rhs, params=_params(lift), elapsed={"lhs": t1 - t0, "rhs": t2 - t1})


def verify_sym_lift(lift: LiftedInstance, *, workers: int = 1) -> VerificationReport:
    from .forests import identify_symmetric

    sym = lift if lift.base.weight_mode == SYMMETRIC else LiftedInstance(lift.base.with_(weight_mode=SYMMETRIC))
    t0 = time.perf_counter()
    lhs = identify_symmetric(rhs_mtkzn(LiftedInstance(lift.base.with_(weight_mode="symbolic")), workers=workers))
    t1 = time.perf_counter()
    rhs = rhs_sym_lift(sym, workers=workers)
    t2 = time.perf_counter()
    return compare("sym_lift", sym.base.digest(), lhs, rhs, params=_params(sym), elapsed={"lhs": t1 - t0, "rhs": t2 - t1})


def verify_cancellation(lift: LiftedInstance, *, workers: int = 1) -> VerificationReport:
    reason = cancellation_precondition(lift)
    if reason:
        return skipped("cancellation", lift.base.digest(), reason, _params(lift))
    t0 = time.perf_counter()
    P = rhs_mtkzn(lift, workers=workers)
    bad = set(degree_excess(P, lift.N))
    kept = Polynomial(P.ring, {m: c for m, c in P.terms.items() if m not in bad})
    return compare("cancellation", lift.base.digest(), P, kept, params=_params(lift),
                   elapsed={"rhs": time.perf_counter() - t0})


def verify_positivity(lift: LiftedInstance, *, workers: int = 1) -> VerificationReport:
    reason = cancellation_precondition(lift)
    if reason:
        return skipped("positivity", lift.base.digest(), reason, _params(lift))
    t0 = time.perf_counter()
    P = rhs_mtkzn(lift, workers=workers)
    kept = Polynomial(P.ring, {m: c for m, c in P.terms.items() if _nonnegative(c)})
    return compare("positivity", lift.base.digest(), P, kept, params=_params(lift),
                   elapsed={"rhs": time.perf_counter() - t0})


def verify_factorization(inst: GraphInstance, p: int, *, workers: int = 1, force: bool = False) -> VerificationReport:
    """Block-diagonal holonomies: both sides factor into the two block problems."""
    ia, ib = split_blocks(inst, p)
    full, la, lb = LiftedInstance(inst), LiftedInstance(ia), LiftedInstance(ib)
    t0 = time.perf_counter()
    lhs = lhs_mtkzn(full, force=force)
    prod_rhs = rhs_mtkzn(la, workers=workers) * rhs_mtkzn(lb, workers=workers)
    elapsed = {"total": time.perf_counter() - t0}
    return compare("factorization", inst.digest(), lhs, prod_rhs, params=dict(_params(full), block=p), elapsed=elapsed)
