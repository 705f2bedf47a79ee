"""Vectorised generate-and-filter enumeration of functional graphs.

An inner vertex ``u`` in ``0..m-1`` picks one of ``targets[u]``; targets
``>= m`` are sinks (the well).  Every such choice is a cycle-and-well-rooted
spanning forest.  Forests are generated in mixed-radix order (vertex 0 is the
most significant digit) in chunks, cycle membership is found by pointer
chasing, and forests are grouped by their cycle edges and their edge-label
multiset.  Callers turn each group into a polynomial contribution.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from math import prod
from typing import Sequence

import numpy as np

CHUNK = 1 << 17


def forest_count(targets: Sequence[Sequence[int]]) -> int:
    return prod(len(t) for t in targets)


def _chunk_groups(lo, hi, m, strides, degs, tgt, lab, ok, nlabels):
    idx = np.arange(lo, hi, dtype=np.int64)
    B = hi - lo
    f = np.empty((B, m), dtype=np.int64)
    labels = np.empty((B, m), dtype=np.int64)
    tree_ok = None if ok is None else np.empty((B, m), dtype=bool)
    for u in range(m):
        ch = (idx // strides[u]) % degs[u]
        f[:, u] = tgt[u][ch]
        labels[:, u] = lab[u][ch]
        if ok is not None:
            tree_ok[:, u] = ok[u][ch]

    # sinks collapse onto the extra column m, which points to itself
    ext = np.concatenate([np.minimum(f, m), np.full((B, 1), m, dtype=np.int64)], axis=1)
    ar = np.arange(m, dtype=np.int64)
    cur = ext[:, :m].copy()
    on = cur == ar
    for _ in range(m - 1):
        cur = np.take_along_axis(ext, cur, axis=1)
        on |= cur == ar

    if tree_ok is not None:
        keep = np.all(on | tree_ok, axis=1)
        f, labels, on = f[keep], labels[keep], on[keep]
        B = f.shape[0]
        if B == 0:
            return Counter()

    ck = np.where(on, f, -1)
    mono = np.zeros((B, nlabels), dtype=np.int64)
    rows = np.arange(B)
    for u in range(m):
        mono[rows, labels[:, u]] += 1
    c_uniq, c_inv = _row_codes(ck + 1, int(ck.max()) + 2)
    m_uniq, m_inv = _row_codes(mono, m + 1)
    combined = c_inv * len(m_uniq) + m_inv
    codes, counts = np.unique(combined, return_counts=True)
    ci, mi = np.divmod(codes, len(m_uniq))
    out = Counter()
    c_rows = [tuple(r) for r in (c_uniq - 1).tolist()]
    m_rows = [tuple(r) for r in m_uniq.tolist()]
    for a, b, c in zip(ci.tolist(), mi.tolist(), counts.tolist()):
        out[c_rows[a] + m_rows[b]] = c
    return out


def _row_codes(arr, base: int):
    """Unique rows of a nonnegative integer array and each row's index among them."""
    cols = arr.shape[1]
    if cols and base ** cols < 2 ** 62:
        weights = np.array([base ** (cols - 1 - t) for t in range(cols)], dtype=np.int64)
        codes = arr @ weights
        uniq, first, inv = np.unique(codes, return_index=True, return_inverse=True)
        return arr[first], inv.reshape(-1)
    uniq, inv = np.unique(arr, axis=0, return_inverse=True)
    return uniq, inv.reshape(-1)


def grouped_forests(targets, labels, nlabels: int, tree_ok=None, *, workers: int = 1, chunk: int = CHUNK) -> dict:
    """Group every forest by (cycle edges, label counts).

    Returns ``{(cycle_key, label_counts): multiplicity}`` where ``cycle_key``
    has length m with entry ``f(u)`` for vertices on a cycle and ``-1``
    elsewhere.  The result does not depend on ``workers`` or ``chunk``.
    """
    m = len(targets)
    if m == 0:
        return {((), (0,) * nlabels): 1}
    degs = [len(t) for t in targets]
    if min(degs) == 0:
        return {}
    tgt = [np.asarray(t, dtype=np.int64) for t in targets]
    lab = [np.asarray(t, dtype=np.int64) for t in labels]
    ok = None if tree_ok is None else [np.asarray(t, dtype=bool) for t in tree_ok]
    strides = [prod(degs[u + 1:]) for u in range(m)]
    total = prod(degs)
    bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]

    def run(b):
        return _chunk_groups(b[0], b[1], m, strides, degs, tgt, lab, ok, nlabels)

    merged = Counter()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    for part in parts:
        merged.update(part)
    out = {}
    for row, c in sorted(merged.items()):
        out[(row[:m], row[m:])] = c
    return out


def cycles_from_key(cycle_key: Sequence[int]) -> list:
    """Decode cycle edges into cycles, each starting at its minimal vertex."""
    seen = set()
    cycles = []
    for u, t in enumerate(cycle_key):
        if t < 0 or u in seen:
            continue
        cyc = [u]
        seen.add(u)
        v = t
        while v != u:
            cyc.append(v)
            seen.add(v)
            v = cycle_key[v]
        cycles.append(tuple(cyc))
    return cycles
