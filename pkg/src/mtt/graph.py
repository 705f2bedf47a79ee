"""Complete directed graphs with a well, holonomies and edge weights.

Vertices are ``1..n``; the inner vertices are ``1..m`` and the well is
``m+1..n``.  Every ordered pair ``(i, j)``, ``i != j``, carries a holonomy
``h_ij`` and a weight ``a_ij``; missing edges are expressed by specializing
the weight to zero.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import CentralTrace, Polynomial, RingDescriptor, RingError

SYMBOLIC = "symbolic"
SYMMETRIC = "symmetric"
SPECIALIZED = "specialized"
WEIGHT_MODES = (SYMBOLIC, SYMMETRIC, SPECIALIZED)


class InstanceError(ValueError):
    """Malformed or inconsistent instance document."""


def edge_var(i: int, j: int, mode: str = SYMBOLIC) -> tuple:
    """Indeterminate attached to the ordered edge (i, j)."""
    if mode == SYMMETRIC:
        i, j = min(i, j), max(i, j)
    return ("a", i, j)


@dataclass(frozen=True, eq=False)
class GraphInstance:
    n: int
    m: int
    ring: RingDescriptor
    trace: CentralTrace
    holonomies: Mapping = field(default_factory=dict)
    weight_mode: str = SYMBOLIC
    weights: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InstanceError(f"n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.m, int) or not 1 <= self.m <= self.n:
            raise InstanceError(f"m out of range: need 1 <= m <= n = {self.n}, got {self.m!r}")
        if self.weight_mode not in WEIGHT_MODES:
            raise InstanceError(f"unknown weight mode {self.weight_mode!r}")
        scalar = self.ring.base if self.ring.kind == "matrix" else self.ring
        if self.trace.source != scalar and self.trace.source != self.ring:
            raise InstanceError(f"trace on {self.trace.source} does not match ring {self.ring}")
        h = {}
        for (i, j), x in self.holonomies.items():
            self._check_edge(i, j)
            h[(i, j)] = self.ring.check(x)
        for e in self.edges():
            h.setdefault(e, self.ring.one)
        object.__setattr__(self, "holonomies", h)
        w = {}
        if self.weight_mode == SPECIALIZED:
            for (i, j), x in self.weights.items():
                self._check_edge(i, j)
                w[(i, j)] = self.target.coerce(x)
            for e in self.edges():
                w.setdefault(e, self.target.one)
        elif self.weights:
            raise InstanceError("weights are only allowed in specialized mode")
        object.__setattr__(self, "weights", w)

    def _check_edge(self, i, j):
        if i == j:
            raise InstanceError(f"self-loop ({i}, {i}) is not allowed")
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise InstanceError(f"edge ({i}, {j}) outside vertex range 1..{self.n}")

    # -- structure --------------------------------------------------------

    @property
    def scalar_ring(self) -> RingDescriptor:
        """The ring H carrying the trace (the base ring for matrix holonomies)."""
        return self.trace.source

    @property
    def target(self) -> RingDescriptor:
        return self.trace.target

    @property
    def inner(self) -> range:
        return range(1, self.m + 1)

    @property
    def well(self) -> range:
        return range(self.m + 1, self.n + 1)

    def edges(self) -> list:
        return [(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1) if i != j]

    def h(self, i: int, j: int):
        return self.holonomies[(i, j)]

    def weight(self, i: int, j: int, ring: RingDescriptor) -> Polynomial:
        """``a_ij`` as a polynomial over ``ring`` (a constant in specialized mode)."""
        if self.weight_mode == SPECIALIZED:
            return Polynomial.constant(ring, ring.coerce(self.weights[(i, j)]))
        return Polynomial.var(ring, edge_var(i, j, self.weight_mode))

    def with_(self, **changes) -> GraphInstance:
        kw = dict(n=self.n, m=self.m, ring=self.ring, trace=self.trace, holonomies=self.holonomies,
                  weight_mode=self.weight_mode, weights=self.weights)
        kw.update(changes)
        if kw["weight_mode"] != SPECIALIZED:
            kw["weights"] = {}
        return GraphInstance(**kw)

    # -- serialization ----------------------------------------------------

    def to_document(self) -> dict:
        edges = []
        for i, j in self.edges():
            e = {"from": i, "to": j, "h": self.ring.literal(self.holonomies[(i, j)])}
            if self.weight_mode == SPECIALIZED:
                e["a"] = self.target.literal(self.weights[(i, j)])
            edges.append(e)
        trace = self.trace.inner.kind if self.trace.kind == "ntr" and self.trace.source == self.ring else self.trace.kind
        return {"n": self.n, "m": self.m, "ring": str(self.ring), "trace": trace,
                "weight_mode": self.weight_mode, "edges": edges}

    def digest(self) -> str:
        text = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, GraphInstance) and self.to_document() == other.to_document()

    def __hash__(self):
        return hash(self.digest())


def _trace_for(ring: RingDescriptor, name: str) -> CentralTrace:
    # matrix holonomies carry a trace on their scalar base ring
    src = ring.base if ring.kind == "matrix" else ring
    return CentralTrace(src, name)


def load_instance(document) -> GraphInstance:
    """Build a validated :class:`GraphInstance` from a JSON text or parsed dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"malformed instance document: {exc}") from None
    if not isinstance(document, dict):
        raise InstanceError("instance document must be an object")
    for key in ("n", "m"):
        if key not in document:
            raise InstanceError(f"missing field {key!r}")
    n, m = document["n"], document["m"]
    if not isinstance(n, int) or not isinstance(m, int) or isinstance(n, bool) or isinstance(m, bool):
        raise InstanceError("n and m must be integers")
    if n < 2:
        raise InstanceError(f"n must be >= 2, got {n}")
    if not 1 <= m <= n:
        raise InstanceError(f"m out of range: need 1 <= m <= n = {n}, got {m}")
    try:
        ring = RingDescriptor.parse(str(document.get("ring", "rational")))
        trace = _trace_for(ring, str(document.get("trace", "id")))
    except RingError as exc:
        raise InstanceError(str(exc)) from None
    mode = document.get("weight_mode", SYMBOLIC)
    if mode not in WEIGHT_MODES:
        raise InstanceError(f"unknown weight mode {mode!r}")
    hol, weights = {}, {}
    edges = document.get("edges", [])
    if not isinstance(edges, list):
        raise InstanceError("edges must be a list")
    for e in edges:
        if not isinstance(e, dict) or "from" not in e or "to" not in e:
            raise InstanceError(f"bad edge entry {e!r}")
        i, j = e["from"], e["to"]
        if not isinstance(i, int) or not isinstance(j, int):
            raise InstanceError(f"edge endpoints must be integers: {e!r}")
        if i == j:
            raise InstanceError(f"self-loop ({i}, {i}) is not allowed")
        if not (1 <= i <= n and 1 <= j <= n):
            raise InstanceError(f"edge ({i}, {j}) outside vertex range 1..{n}")
        if (i, j) in hol:
            raise InstanceError(f"duplicate edge ({i}, {j})")
        try:
            hol[(i, j)] = ring.parse_element(e["h"]) if "h" in e else ring.one
            if "a" in e:
                if mode != SPECIALIZED:
                    raise InstanceError(f"edge ({i}, {j}) has a weight but weight_mode is {mode!r}")
                weights[(i, j)] = trace.target.parse_element(e["a"])
        except RingError as exc:
            raise InstanceError(f"edge ({i}, {j}): {exc}") from None
    return GraphInstance(n, m, ring, trace, hol, mode, weights)


def dump_instance(inst: GraphInstance) -> str:
    return json.dumps(inst.to_document(), indent=1) + "\n"


@dataclass(frozen=True)
class LaplacianMatrix:
    entries: tuple

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def render(self) -> str:
        return "\n".join(" | ".join(p.render() for p in r) for r in self.entries)


def build_laplacian(inst: GraphInstance) -> LaplacianMatrix:
    """Twisted Laplacian: ``-h_ij a_ij`` off the diagonal, ``sum_j a_ij`` on it."""
    if not inst.ring.is_scalar:
        raise RingError("matrix-valued holonomies: use mtt.lift.assemble_laplacian")
    H = inst.ring
    n = inst.n
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                d = Polynomial.zero(H)
                for k in range(1, n + 1):
                    if k != i:
                        d = d + inst.weight(i, k, H)
                row.append(d)
            else:
                row.append(Polynomial.constant(H, -inst.h(i, j)) * inst.weight(i, j, H))
        rows.append(tuple(row))
    return LaplacianMatrix(tuple(rows))


def principal_submatrix(M: LaplacianMatrix, k: int) -> LaplacianMatrix:
    if not 1 <= k <= M.size:
        raise ValueError(f"k out of range: need 1 <= k <= {M.size}, got {k}")
    return LaplacianMatrix(tuple(r[:k] for r in M.entries[:k]))


def all_ones_assignment(inst: GraphInstance, value=1) -> dict:
    """Assignment sending every indeterminate of ``inst`` to ``value``."""
    return {edge_var(i, j, inst.weight_mode): Fraction(value) for i, j in inst.edges()}
