"""The tau-determinant by permutation-cycle expansion, and an exact oracle.

``tau_det`` evaluates

    sum over permutations s of sign(s) * prod over cycles (i1 .. ir) of s
        tau(M[i1,i2] M[i2,i3] ... M[ir,i1])

with fixed points contributing ``tau(M[i,i])``.  Permutations are produced in
cycle form: the cycle through the smallest free index is chosen first and
the remaining indices are expanded recursively.  Since the traced cycle
values commute, the expansion of the remaining indices is shared between all
cycles that cover the same index set (memoised on a bitmask).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .algebra import CentralTrace, Polynomial, RingError

DEFAULT_CAP = 10
CAP_ENV = "MTT_DET_CAP"


class SizeCapError(ValueError):
    """Raised when an expansion would exceed the configured size cap."""


def det_cap() -> int:
    try:
        return int(os.environ.get(CAP_ENV, DEFAULT_CAP))
    except ValueError:
        return DEFAULT_CAP


@dataclass(frozen=True)
class PermutationCycleForm:
    size: int
    cycles: tuple
    fixed: tuple

    @property
    def sign(self) -> int:
        s = 1
        for c in self.cycles:
            if (len(c) - 1) % 2:
                s = -s
        return s

    def as_mapping(self) -> dict:
        out = {i: i for i in self.fixed}
        for c in self.cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                out[a] = b
        return out


def iter_cycle_forms(k: int) -> Iterator[PermutationCycleForm]:
    """All permutations of ``1..k`` in cycle form (k! items)."""

    def rec(free: tuple):
        if not free:
            yield ()
            return
        first, rest = free[0], free[1:]

        def paths(path, avail):
            yield path
            for idx, x in enumerate(avail):
                yield from paths(path + (x,), avail[:idx] + avail[idx + 1:])

        for cyc in paths((first,), rest):
            remaining = tuple(x for x in rest if x not in cyc)
            for tail in rec(remaining):
                yield (cyc,) + tail

    for parts in rec(tuple(range(1, k + 1))):
        yield PermutationCycleForm(
            k,
            tuple(c for c in parts if len(c) > 1),
            tuple(c[0] for c in parts if len(c) == 1),
        )


def _as_rows(M) -> list:
    if hasattr(M, "entries"):
        M = M.entries
    rows = [list(r) for r in M]
    k = len(rows)
    if k == 0 or any(len(r) != k for r in rows):
        raise ValueError("tau_det needs a non-empty square matrix")
    return rows


def _check_size(k: int, force: bool, cap: int | None):
    cap = det_cap() if cap is None else cap
    if k > cap and not force:
        raise SizeCapError(f"matrix size {k} exceeds the expansion cap {cap} (pass force=True or set {CAP_ENV})")


def tau_det(M, trace: CentralTrace, *, force: bool = False, cap: int | None = None) -> Polynomial:
    """tau-determinant of a square matrix of polynomials over ``trace.source``."""
    rows = _as_rows(M)
    k = len(rows)
    _check_size(k, force, cap)
    H, K = trace.source, trace.target
    for r in rows:
        for p in r:
            if not isinstance(p, Polynomial) or p.ring != H:
                raise RingError(f"matrix entries must be polynomials over {H}")

    def tr(p: Polynomial) -> Polynomial:
        return p.map_coefficients(trace, K)

    diag = [tr(rows[i][i]) for i in range(k)]
    nonzero = [[j for j in range(k) if j != i and rows[i][j]] for i in range(k)]
    one = Polynomial.constant(K, 1)
    memo = {0: one}

    def det(mask: int) -> Polynomial:
        got = memo.get(mask)
        if got is not None:
            return got
        i0 = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i0)
        by_support: dict[int, Polynomial] = {}

        def extend(v: int, used: int, prod: Polynomial, length: int):
            # close the cycle back to i0
            back = rows[v][i0]
            if back:
                val = tr(prod * back)
                if val:
                    if length % 2 == 0:
                        val = -val
                    prev = by_support.get(used)
                    by_support[used] = val if prev is None else prev + val
            for w in nonzero[v]:
                bit = 1 << w
                if rest & bit and not used & bit:
                    extend(w, used | bit, prod * rows[v][w], length + 1)

        by_support[1 << i0] = diag[i0]
        for w in nonzero[i0]:
            bit = 1 << w
            if rest & bit:
                extend(w, (1 << i0) | bit, rows[i0][w], 2)

        total = Polynomial.zero(K)
        for support, val in by_support.items():
            if val:
                sub = det(mask & ~support)
                if sub:
                    total = total + val * sub
        memo[mask] = total
        return total

    return det((1 << k) - 1)


def tau_det_expanded(M, trace: CentralTrace, *, force: bool = False, cap: int | None = None) -> Polynomial:
    """Unshared expansion over every permutation; reference for small sizes."""
    rows = _as_rows(M)
    k = len(rows)
    _check_size(k, force, cap)
    K = trace.target
    total = Polynomial.zero(K)
    for perm in iter_cycle_forms(k):
        term = Polynomial.constant(K, perm.sign)
        for i in perm.fixed:
            term = term * rows[i - 1][i - 1].map_coefficients(trace, K)
        for c in perm.cycles:
            prod = rows[c[0] - 1][c[1] - 1]
            for a, b in zip(c[1:], c[2:] + c[:1]):
                prod = prod * rows[a - 1][b - 1]
            term = term * prod.map_coefficients(trace, K)
            if not term:
                break
        total = total + term
    return total


def det_exact_commutative(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant of an integer or rational matrix (fraction-free Bareiss)."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in A):
        raise ValueError("det_exact_commutative needs a square matrix")
    # clear denominators so the elimination stays in the integers
    scale = Fraction(1)
    for r in A:
        lcm = 1
        for x in r:
            d = x.denominator
            lcm = lcm * d // _gcd(lcm, d)
        for t in range(n):
            r[t] = r[t] * lcm
        scale /= lcm
    B = [[int(x) for x in r] for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if B[k][k] == 0:
            for r in range(k + 1, n):
                if B[r][k] != 0:
                    B[k], B[r] = B[r], B[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                B[i][j] = (B[i][j] * B[k][k] - B[i][k] * B[k][j]) // prev
        prev = B[k][k]
    return sign * B[n - 1][n - 1] * scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
