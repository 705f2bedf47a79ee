"""Twisted top-down Laplacians on complete d-skeleta.

The (d-1)-cells of the complete d-dimensional complex on ``1..v`` form the
vertex set of a graph in which two cells are adjacent when their union is a
d-cell.  An ordered adjacent pair carries a holonomy ``h`` and a weight
``a``; the Laplacian has ``-eps * h * a`` off the diagonal and
``(1/d) * sum a`` on it, where ``eps`` are the orientation signs.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .algebra import CentralTrace, Polynomial, RingDescriptor, RingError
from .determinant import det_exact_commutative, tau_det
from .forests import cycle_product, forest_sum
from .graph import InstanceError, LaplacianMatrix, principal_submatrix
from .report import VerificationReport, compare

SYMBOLIC = "symbolic"
SYMMETRIC = "symmetric"
CELLULAR = "cellular"
SPECIALIZED = "specialized"
WEIGHT_MODES = (SYMBOLIC, SYMMETRIC, CELLULAR, SPECIALIZED)


def colex_key(cell: tuple) -> tuple:
    return tuple(reversed(cell))


class SimplicialComplex:
    """Complete d-skeleton on ``v`` vertices.

    ``cells`` lists the (d-1)-cells in colexicographic order, so the cells
    that contain vertex ``v`` come last.
    """

    def __init__(self, v: int, d: int):
        if not 1 <= d <= v - 1:
            raise ValueError(f"need 1 <= d <= v-1, got v={v}, d={d}")
        self.v, self.d = v, d
        self.cells_by_dim = {
            k: sorted(itertools.combinations(range(1, v + 1), k + 1), key=colex_key) for k in range(d + 1)
        }
        self.cells = self.cells_by_dim[d - 1]
        self.top = self.cells_by_dim[d]
        self.index = {c: t for t, c in enumerate(self.cells)}
        self.adjacent = {c: [] for c in self.cells}
        for rho in self.top:
            for s, t in itertools.permutations(facets(rho), 2):
                self.adjacent[s].append(t)
        for c in self.cells:
            self.adjacent[c].sort(key=colex_key)

    def are_adjacent(self, s: tuple, t: tuple) -> bool:
        return s != t and len(set(s) | set(t)) == self.d + 1

    def pairs(self) -> list:
        """Ordered adjacent pairs (the edge set of the cell graph)."""
        return [(s, t) for s in self.cells for t in self.adjacent[s]]

    def __repr__(self):
        return f"SimplicialComplex(v={self.v}, d={self.d})"


def facets(rho: tuple) -> list:
    return [rho[:j] + rho[j + 1:] for j in range(len(rho))]


def incidence_sign(rho: tuple, sigma: tuple) -> int:
    """(-1)^j where the vertex deleted from ``rho`` is its j-th smallest (0-based)."""
    rho, sigma = tuple(sorted(rho)), tuple(sorted(sigma))
    if len(rho) != len(sigma) + 1 or not set(sigma) < set(rho):
        raise ValueError(f"{sigma} is not a facet of {rho}")
    (gone,) = set(rho) - set(sigma)
    return -1 if rho.index(gone) % 2 else 1


@dataclass(frozen=True)
class Orientation:
    """Sign of each (d-1)-cell relative to its sorted-vertex orientation."""

    signs: Mapping = field(default_factory=dict)

    def __getitem__(self, cell) -> int:
        return self.signs.get(cell, 1)

    @classmethod
    def random(cls, cx: SimplicialComplex, rng: random.Random) -> Orientation:
        return cls({c: rng.choice((1, -1)) for c in cx.cells})

    def flip(self, cell) -> Orientation:
        s = dict(self.signs)
        s[cell] = -self[cell]
        return Orientation(s)


REFERENCE = Orientation()


def epsilon(sigma: tuple, tau: tuple, orientation: Orientation = REFERENCE) -> int:
    """Sign attached to the adjacent pair (sigma, tau).

    Chosen so that with ``h = 1`` and weights depending only on the d-cell the
    Laplacian is the top-down operator ``boundary o coboundary``.
    """
    rho = tuple(sorted(set(sigma) | set(tau)))
    if len(rho) != len(sigma) + 1 or len(sigma) != len(tau) or sigma == tau:
        raise ValueError(f"{sigma} and {tau} are not adjacent")
    return -orientation[sigma] * orientation[tau] * incidence_sign(rho, sigma) * incidence_sign(rho, tau)


def chain_sign(chain: list, orientation: Orientation = REFERENCE) -> int:
    """Product of eps along a closed chain of adjacent cells."""
    s = 1
    for a, b in zip(chain, chain[1:] + chain[:1]):
        s *= epsilon(a, b, orientation)
    return s


def weight_var(sigma: tuple, tau: tuple, mode: str) -> tuple:
    if mode == CELLULAR:
        return ("x", tuple(sorted(set(sigma) | set(tau))))
    if mode == SYMMETRIC:
        sigma, tau = sorted((sigma, tau), key=colex_key)
    return ("a", sigma, tau)


@dataclass(frozen=True, eq=False)
class ComplexInstance:
    """Complex, ordered cells (inner first), holonomies and weights.

    ``m`` inner cells are the first ``m`` entries of ``order``; the rest form
    the well.
    """

    cx: SimplicialComplex
    m: int
    ring: RingDescriptor
    trace: CentralTrace
    holonomies: Mapping = field(default_factory=dict)
    weight_mode: str = SYMBOLIC
    weights: Mapping = field(default_factory=dict)
    order: tuple = ()

    def __post_init__(self):
        cells = self.cx.cells
        order = tuple(self.order) or tuple(cells)
        if sorted(order) != sorted(cells):
            raise InstanceError("order must list every (d-1)-cell exactly once")
        object.__setattr__(self, "order", order)
        if not 1 <= self.m <= len(cells):
            raise InstanceError(f"m out of range: need 1 <= m <= {len(cells)}, got {self.m}")
        if not self.ring.is_scalar:
            raise InstanceError("simplicial instances take scalar holonomies")
        if self.trace.source != self.ring:
            raise InstanceError("trace does not match the holonomy ring")
        if self.weight_mode not in WEIGHT_MODES:
            raise InstanceError(f"unknown weight mode {self.weight_mode!r}")
        h = {}
        for (s, t), x in self.holonomies.items():
            s, t = tuple(s), tuple(t)
            if not self.cx.are_adjacent(s, t):
                raise InstanceError(f"cells {s} and {t} are not adjacent")
            h[(s, t)] = self.ring.check(x)
        for p in self.cx.pairs():
            h.setdefault(p, self.ring.one)
        object.__setattr__(self, "holonomies", h)
        w = {}
        if self.weight_mode == SPECIALIZED:
            for (s, t), x in self.weights.items():
                w[(tuple(s), tuple(t))] = self.trace.target.coerce(x)
            for p in self.cx.pairs():
                w.setdefault(p, self.trace.target.one)
        object.__setattr__(self, "weights", w)

    @property
    def d(self) -> int:
        return self.cx.d

    @property
    def target(self) -> RingDescriptor:
        return self.trace.target

    def h(self, s, t):
        return self.holonomies[(s, t)]

    def weight(self, s, t, ring: RingDescriptor) -> Polynomial:
        if self.weight_mode == SPECIALIZED:
            return Polynomial.constant(ring, ring.coerce(self.weights[(s, t)]))
        return Polynomial.var(ring, weight_var(s, t, self.weight_mode))

    def with_(self, **changes) -> ComplexInstance:
        kw = dict(cx=self.cx, m=self.m, ring=self.ring, trace=self.trace, holonomies=self.holonomies,
                  weight_mode=self.weight_mode, weights=self.weights, order=self.order)
        kw.update(changes)
        if kw["weight_mode"] != SPECIALIZED:
            kw["weights"] = {}
        return ComplexInstance(**kw)

    def to_document(self) -> dict:
        edges = []
        for s, t in self.cx.pairs():
            e = {"from": list(s), "to": list(t), "h": self.ring.literal(self.holonomies[(s, t)])}
            if self.weight_mode == SPECIALIZED:
                e["a"] = self.target.literal(self.weights[(s, t)])
            edges.append(e)
        return {"complex": {"v": self.cx.v, "d": self.cx.d}, "m": self.m,
                "well": [list(c) for c in self.order[self.m:]], "ring": str(self.ring),
                "trace": self.trace.kind, "weight_mode": self.weight_mode, "edges": edges}

    def digest(self) -> str:
        import hashlib

        text = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def well_order(cx: SimplicialComplex, well) -> tuple:
    """Cell order with inner cells first (colex) and the well last (colex)."""
    well = {tuple(sorted(c)) for c in well}
    unknown = well - set(cx.cells)
    if unknown:
        raise InstanceError(f"well cells {sorted(unknown)} are not (d-1)-cells")
    inner = [c for c in cx.cells if c not in well]
    return tuple(inner) + tuple(c for c in cx.cells if c in well)


def cells_containing(cx: SimplicialComplex, vertex: int) -> list:
    return [c for c in cx.cells if vertex in c]


def load_complex_instance(document) -> ComplexInstance:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"malformed instance document: {exc}") from None
    try:
        shape = document["complex"]
        cx = SimplicialComplex(int(shape["v"]), int(shape["d"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"bad complex description: {exc}") from None
    well = document.get("well", f"contains_vertex:{cx.v}")
    if isinstance(well, str):
        if not well.startswith("contains_vertex:"):
            raise InstanceError(f"unknown well description {well!r}")
        well = cells_containing(cx, int(well.split(":", 1)[1]))
    order = well_order(cx, well)
    m = document.get("m", len(cx.cells) - len(well))
    if m != len(cx.cells) - len(well):
        raise InstanceError(f"m = {m} does not match the well of size {len(well)}")
    try:
        ring = RingDescriptor.parse(str(document.get("ring", "rational")))
        trace = CentralTrace(ring, str(document.get("trace", "id")))
    except RingError as exc:
        raise InstanceError(str(exc)) from None
    mode = document.get("weight_mode", SYMBOLIC)
    hol, weights = {}, {}
    for e in document.get("edges", []):
        try:
            s, t = tuple(sorted(e["from"])), tuple(sorted(e["to"]))
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"bad edge entry {e!r}") from exc
        if not cx.are_adjacent(s, t) or s not in cx.index or t not in cx.index:
            raise InstanceError(f"cells {s} and {t} are not adjacent")
        try:
            if "h" in e:
                hol[(s, t)] = ring.parse_element(e["h"])
            if "a" in e:
                weights[(s, t)] = trace.target.parse_element(e["a"])
        except RingError as exc:
            raise InstanceError(f"edge {s}->{t}: {exc}") from None
    return ComplexInstance(cx, m, ring, trace, hol, mode, weights, order)


def build_simplicial_laplacian(ci: ComplexInstance, orientation: Orientation = REFERENCE) -> LaplacianMatrix:
    """Matrix indexed by ``ci.order``."""
    H = ci.ring
    d = ci.d
    if not H.contains_rationals:
        raise RingError(f"the diagonal needs 1/{d}, which {H} lacks")
    inv_d = Fraction(1, d)
    pos = {c: t for t, c in enumerate(ci.order)}
    size = len(ci.order)
    zero = Polynomial.zero(H)
    rows = [[zero] * size for _ in range(size)]
    for s in ci.order:
        diag = zero
        for t in ci.cx.adjacent[s]:
            a = ci.weight(s, t, H)
            diag = diag + a
            coeff = -epsilon(s, t, orientation) * ci.h(s, t)
            rows[pos[s]][pos[t]] = Polynomial.constant(H, coeff) * a
        rows[pos[s]][pos[s]] = diag * inv_d
    return LaplacianMatrix(tuple(tuple(r) for r in rows))


def lhs_cw(ci: ComplexInstance, orientation: Orientation = REFERENCE, *, force: bool = False) -> Polynomial:
    M = principal_submatrix(build_simplicial_laplacian(ci, orientation), ci.m)
    return tau_det(M, ci.trace, force=force)


def rhs_cw(ci: ComplexInstance, orientation: Orientation = REFERENCE, *, workers: int = 1,
           cap: int | None = None) -> Polynomial:
    """``d^-m`` times the forest sum over the cell graph with cycle factors
    ``1 - d^len(c) eps_c tau(h_c)``."""
    K = ci.target
    d = ci.d
    if not K.contains_rationals:
        raise RingError(f"the forest sum needs 1/{d}, which {K} lacks")
    order = ci.order
    pos = {c: t for t, c in enumerate(order)}
    pairs = ci.cx.pairs()
    label = {p: t for t, p in enumerate(pairs)}
    weights = [ci.weight(s, t, K) for s, t in pairs]
    targets, labels = [], []
    for s in order[:ci.m]:
        targets.append([pos[t] for t in ci.cx.adjacent[s]])
        labels.append([label[(s, t)] for t in ci.cx.adjacent[s]])
    tau = ci.trace

    def h(a, b):
        return ci.h(order[a], order[b])

    def factor(cycles):
        f = K.one
        for c in cycles:
            cells = [order[u] for u in c]
            f = f * (1 - d ** len(c) * chain_sign(cells, orientation) * tau(cycle_product(h, c)))
        return f

    total = forest_sum(targets, labels, weights, factor, K, workers=workers, cap=cap)
    return total * Fraction(1, d ** ci.m)


def verify_cw(ci: ComplexInstance, orientation: Orientation = REFERENCE, *, workers: int = 1,
              force: bool = False) -> VerificationReport:
    t0 = time.perf_counter()
    lhs = lhs_cw(ci, orientation, force=force)
    t1 = time.perf_counter()
    rhs = rhs_cw(ci, orientation, workers=workers)
    t2 = time.perf_counter()
    params = {"v": ci.cx.v, "d": ci.d, "m": ci.m, "ring": str(ci.ring), "trace": str(ci.trace),
              "weights": ci.weight_mode}
    return compare("cw", ci.digest(), lhs, rhs, params=params, elapsed={"lhs": t1 - t0, "rhs": t2 - t1})


def unit_minor(v: int, d: int, well_vertex: int | None = None) -> Fraction:
    """Principal minor with ``h = 1``, all weights 1 and the well made of the
    cells containing ``well_vertex`` (default ``v``), by exact elimination."""
    cx = SimplicialComplex(v, d)
    well = cells_containing(cx, v if well_vertex is None else well_vertex)
    order = well_order(cx, well)
    inner = order[:len(order) - len(well)]
    pos = {c: t for t, c in enumerate(inner)}
    M = [[Fraction(0)] * len(inner) for _ in inner]
    for s in inner:
        M[pos[s]][pos[s]] = Fraction(len(cx.adjacent[s]), d)
        for t in cx.adjacent[s]:
            if t in pos:
                M[pos[s]][pos[t]] = Fraction(-epsilon(s, t))
    return det_exact_commutative(M)


def kalai_count(v: int, d: int) -> int:
    """Weighted count of simplicial spanning trees of the complete d-skeleton."""
    return v ** comb(v - 2, d)


def gauge_holonomies(cx: SimplicialComplex, ring: RingDescriptor, rng: random.Random, unit) -> dict:
    """Holonomies ``h_st = g_(s,rho) * g_(t,rho)^-1`` through the d-cell ``rho``.

    ``unit(rng)`` draws an invertible element of ``ring``.  These factor
    through the d-cells, which is the symmetric setting of the top-down
    Laplacian.
    """
    g = {}
    for rho in cx.top:
        for s in facets(rho):
            g[(s, rho)] = unit(rng)
    h = {}
    for s, t in cx.pairs():
        rho = tuple(sorted(set(s) | set(t)))
        h[(s, t)] = g[(s, rho)] * g[(t, rho)].inverse() if not isinstance(g[(t, rho)], Fraction) else g[(s, rho)] / g[(t, rho)]
    return h
