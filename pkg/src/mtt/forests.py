"""Cycle-and-well-rooted spanning forests and the forest-sum side of the
matrix-tree identities on the complete graph."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterator

from . import _kernel
from .algebra import Polynomial, RingDescriptor, RingError
from .determinant import tau_det
from .graph import SYMMETRIC, GraphInstance, build_laplacian, edge_var, principal_submatrix
from .report import VerificationReport, compare

DEFAULT_ENUM_CAP = 12_000_000


class EnumerationCapError(ValueError):
    pass


@dataclass(frozen=True)
class Forest:
    """``out[i-1]`` is the target of the unique edge leaving inner vertex i."""

    out: tuple

    @property
    def m(self) -> int:
        return len(self.out)

    def edges(self) -> list:
        return [(i, j) for i, j in enumerate(self.out, start=1)]


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple
    tree_edges: tuple


@dataclass(frozen=True)
class ForestClass:
    representative: Forest
    orbit_size: int


def enumerate_forests(n: int, m: int) -> Iterator[Forest]:
    """All (n-1)^m forests, in mixed-radix order with vertex 1 most significant."""
    if n < 2 or not 1 <= m <= n:
        raise ValueError(f"m out of range: need 1 <= m <= n, got n={n}, m={m}")
    choices = [[j for j in range(1, n + 1) if j != i] for i in range(1, m + 1)]
    for out in itertools.product(*choices):
        yield Forest(out)


def classify_forest(F: Forest, n: int, m: int) -> CycleDecomposition:
    """Split a forest into its (disjoint, simple) cycles and its tree edges.

    Pointer chasing with three colours: white (unvisited), grey (on the
    current walk) and black (finished).  Meeting a grey vertex closes a cycle.
    """
    WHITE, GREY, BLACK = 0, 1, 2
    colour = [WHITE] * (m + 1)
    on_cycle = set()
    cycles = []
    for start in range(1, m + 1):
        if colour[start] != WHITE:
            continue
        walk = []
        v = start
        while v <= m and colour[v] == WHITE:
            colour[v] = GREY
            walk.append(v)
            v = F.out[v - 1]
        if v <= m and colour[v] == GREY:
            cyc = walk[walk.index(v):]
            k = cyc.index(min(cyc))
            cycles.append(tuple(cyc[k:] + cyc[:k]))
            on_cycle.update(cyc)
        for w in walk:
            colour[w] = BLACK
    cycles.sort()
    tree = tuple((i, j) for i, j in F.edges() if i not in on_cycle)
    return CycleDecomposition(tuple(cycles), tree)


def is_canonical_orientation(cycle: tuple) -> bool:
    """Class representatives keep the orientation whose second vertex is smaller."""
    return len(cycle) <= 2 or cycle[1] < cycle[-1]


def forest_classes(n: int, m: int) -> Iterator[ForestClass]:
    """Representatives of forests modulo reversal of cycles of length >= 3."""
    for F in enumerate_forests(n, m):
        dec = classify_forest(F, n, m)
        if all(is_canonical_orientation(c) for c in dec.cycles):
            long = sum(1 for c in dec.cycles if len(c) >= 3)
            yield ForestClass(F, 2 ** long)


def reverse_cycle(cycle: tuple) -> tuple:
    return (cycle[0],) + tuple(reversed(cycle[1:]))


def cycle_product(h: Callable, cycle: tuple):
    """h_{i1 i2} h_{i2 i3} ... h_{ir i1}, multiplied in cyclic order."""
    acc = h(cycle[0], cycle[1])
    for a, b in zip(cycle[1:], cycle[2:] + cycle[:1]):
        acc = acc * h(a, b)
    return acc


# ---------------------------------------------------------------------------
# generic forest sums


def forest_sum(targets, labels, weights, factor: Callable, K: RingDescriptor, *, tree_ok=None,
               workers: int = 1, cap: int | None = None) -> Polynomial:
    """Sum of ``a_F * factor(cycles)`` over forests of a functional-graph space.

    ``targets[u]`` / ``labels[u]`` list the admissible targets of inner vertex
    ``u`` (0-based, targets ``>= m`` are sinks) and the weight index of each
    choice; ``weights`` are polynomials over ``K``.  ``factor`` receives the
    list of cycles (vertex tuples starting at their minimum) and returns a
    ``K`` element, or ``None`` to drop the forest.
    """
    total_forests = _kernel.forest_count(targets)
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    if total_forests > cap:
        raise EnumerationCapError(f"{total_forests} forests exceed the enumeration cap {cap}")
    groups = _kernel.grouped_forests(targets, labels, len(weights), tree_ok, workers=workers)
    fac_cache: dict = {}
    mono_cache: dict = {}
    acc: dict = {}
    for (ck, counts), mult in groups.items():
        fac = fac_cache.get(ck, fac_cache)
        if fac is fac_cache:
            fac = factor(_kernel.cycles_from_key(ck))
            fac_cache[ck] = fac
        if fac is None or not fac:
            continue
        mono = mono_cache.get(counts)
        if mono is None:
            mono = Polynomial.constant(K, 1)
            for w, c in zip(weights, counts):
                for _ in range(c):
                    mono = mono * w
            mono_cache[counts] = mono
        scale = fac * mult
        for mk, c in mono.terms.items():
            v = c * scale
            prev = acc.get(mk)
            acc[mk] = v if prev is None else prev + v
    return Polynomial(K, acc)


def _graph_space(inst: GraphInstance):
    """Targets / labels / weights for the complete graph with well."""
    n, m = inst.n, inst.m
    K = inst.target
    edges = inst.edges()
    index = {e: t for t, e in enumerate(edges)}
    targets = [[j - 1 for j in range(1, n + 1) if j != i] for i in range(1, m + 1)]
    labels = [[index[(i, j)] for j in range(1, n + 1) if j != i] for i in range(1, m + 1)]
    weights = [inst.weight(i, j, K) for i, j in edges]
    return targets, labels, weights


def _check_scalar(inst: GraphInstance):
    if not inst.ring.is_scalar:
        raise RingError("matrix-valued holonomies: use mtt.lift")


def rhs_mtkz(inst: GraphInstance, *, workers: int = 1, cap: int | None = None) -> Polynomial:
    """Forest sum ``sum_F a_F prod_c (1 - tau(h_c))``."""
    _check_scalar(inst)
    tau = inst.trace

    def h(a, b):
        return inst.h(a + 1, b + 1)

    def factor(cycles):
        f = inst.target.one
        for c in cycles:
            f = f * (1 - tau(cycle_product(h, c)))
        return f

    targets, labels, weights = _graph_space(inst)
    return forest_sum(targets, labels, weights, factor, inst.target, workers=workers, cap=cap)


def rhs_mtkz_reference(inst: GraphInstance) -> Polynomial:
    """Same sum, forest by forest through :func:`enumerate_forests`."""
    _check_scalar(inst)
    K = inst.target
    tau = inst.trace
    total = Polynomial.zero(K)
    for F in enumerate_forests(inst.n, inst.m):
        term = Polynomial.constant(K, 1)
        for i, j in F.edges():
            term = term * inst.weight(i, j, K)
        for c in classify_forest(F, inst.n, inst.m).cycles:
            term = term * (1 - tau(cycle_product(inst.h, c)))
        total = total + term
    return total


def rhs_sym(inst: GraphInstance, *, workers: int = 1, cap: int | None = None) -> Polynomial:
    """Class sum with factors ``1 - tau(h_c)`` (2-cycles) and
    ``2 - tau(h_c) - tau(h_c^-1)`` (longer cycles); symmetric weights only."""
    _check_scalar(inst)
    if inst.weight_mode != SYMMETRIC:
        raise ValueError("rhs_sym needs the symmetric weight mode")
    tau = inst.trace

    def h(a, b):
        return inst.h(a + 1, b + 1)

    def factor(cycles):
        f = inst.target.one
        for c in cycles:
            if len(c) == 2:
                f = f * (1 - tau(cycle_product(h, c)))
            elif not is_canonical_orientation(c):
                return None
            else:
                f = f * (2 - tau(cycle_product(h, c)) - tau(cycle_product(h, reverse_cycle(c))))
        return f

    targets, labels, weights = _graph_space(inst)
    return forest_sum(targets, labels, weights, factor, inst.target, workers=workers, cap=cap)


def identify_symmetric(P: Polynomial) -> Polynomial:
    """Image in the quotient ring where a_ij = a_ji."""

    def f(v):
        if v[0] == "a" and len(v) == 3:
            _, i, j = v
            return ("a", min(i, j), max(i, j))
        return v

    return P.rename(f)


def lhs_mtkz(inst: GraphInstance, *, force: bool = False) -> Polynomial:
    return tau_det(principal_submatrix(build_laplacian(inst), inst.m), inst.trace, force=force)


def _params(inst: GraphInstance) -> dict:
    return {"n": inst.n, "m": inst.m, "ring": str(inst.ring), "trace": str(inst.trace), "weights": inst.weight_mode}


def verify_mtkz(inst: GraphInstance, *, workers: int = 1, force: bool = False) -> VerificationReport:
    t0 = time.perf_counter()
    lhs = lhs_mtkz(inst, force=force)
    t1 = time.perf_counter()
    rhs = rhs_mtkz(inst, workers=workers)
    t2 = time.perf_counter()
    return compare("mtkz", inst.digest(), lhs, rhs, params=_params(inst), elapsed={"lhs": t1 - t0, "rhs": t2 - t1})


def verify_sym(inst: GraphInstance, *, workers: int = 1, force: bool = False) -> VerificationReport:
    """Class sum against the tau-determinant with identified weights."""
    if inst.weight_mode != SYMMETRIC:
        inst = inst.with_(weight_mode=SYMMETRIC)
    t0 = time.perf_counter()
    lhs = lhs_mtkz(inst, force=force)
    t1 = time.perf_counter()
    rhs = rhs_sym(inst, workers=workers)
    t2 = time.perf_counter()
    return compare("sym", inst.digest(), lhs, rhs, params=_params(inst), elapsed={"lhs": t1 - t0, "rhs": t2 - t1})


def var_of(i: int, j: int, inst: GraphInstance) -> tuple:
    return edge_var(i, j, inst.weight_mode)
