"""Exact coefficient rings, central traces and sparse polynomials.

Ring elements are plain immutable Python values:

* rationals are :class:`fractions.Fraction`;
* Gaussian rationals, rational quaternions, cyclic group-ring elements and
  square matrices have dedicated classes below.

All of them support ``+``, ``-``, ``*`` and ``==`` (also against ints and
Fractions, read as scalars).  A :class:`RingDescriptor` knows how to build,
validate, parse, render and sample the elements of one ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

_SCALARS = (int, Fraction)


class RingError(ValueError):
    """Raised for elements that do not belong to the ring they are used in."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise RingError(f"not a rational: {x!r}")


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# element classes


@dataclass(frozen=True, slots=True)
class Gaussian:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @staticmethod
    def _coerce(other):
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, _SCALARS):
            return Gaussian(Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self) -> Gaussian:
        return Gaussian(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> Gaussian:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return Gaussian(self.re / n, -self.im / n)

    def __repr__(self):
        return f"Gaussian({_fmt_frac(self.re)}, {_fmt_frac(self.im)})"


@dataclass(frozen=True, slots=True)
class Quaternion:
    w: Fraction
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @staticmethod
    def _coerce(other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, _SCALARS):
            return Quaternion(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = other.w, other.x, other.y, other.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        # only scalars reach here; they are central
        if isinstance(other, _SCALARS):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.w, self.x, self.y, self.z) == (o.w, o.x, o.y, o.z)

    def __hash__(self):
        if not (self.x or self.y or self.z):
            return hash(self.w)
        return hash((self.w, self.x, self.y, self.z))

    def __bool__(self):
        return bool(self.w or self.x or self.y or self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> Fraction:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self) -> Quaternion:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return Quaternion(c.w / n, c.x / n, c.y / n, c.z / n)

    def __repr__(self):
        return "Quaternion({})".format(", ".join(_fmt_frac(t) for t in (self.w, self.x, self.y, self.z)))


@dataclass(frozen=True, slots=True)
class GroupRingElement:
    """Element of Z[Z/k]: ``coeffs[e]`` is the integer coefficient of g^e."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if not cs:
            raise RingError("group ring element needs k >= 1 coefficients")
        for c in cs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise RingError(f"group ring coefficients are integers, got {c}")
            elif not isinstance(c, int):
                raise RingError(f"group ring coefficients are integers, got {c!r}")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in cs))

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @classmethod
    def monomial(cls, k: int, e: int, c: int = 1) -> GroupRingElement:
        cs = [0] * k
        cs[e % k] = c
        return cls(tuple(cs))

    def _coerce(self, other):
        if isinstance(other, GroupRingElement):
            if other.k != self.k:
                raise RingError(f"group ring modulus mismatch: {self.k} vs {other.k}")
            return other
        if isinstance(other, _SCALARS):
            return GroupRingElement.monomial(self.k, 0, other if isinstance(other, int) else _int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GroupRingElement(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GroupRingElement(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            c = _int(other)
            return GroupRingElement(tuple(a * c for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        k = self.k
        out = [0] * k
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[(i + j) % k] += a * b
        return GroupRingElement(tuple(out))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.coeffs == other.coeffs
        if isinstance(other, _SCALARS):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return False

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def conj(self) -> GroupRingElement:
        k = self.k
        return GroupRingElement(tuple(self.coeffs[(-e) % k] for e in range(k)))

    def inverse(self) -> GroupRingElement:
        nz = [(e, c) for e, c in enumerate(self.coeffs) if c]
        if len(nz) != 1 or nz[0][1] not in (1, -1):
            raise RingError(f"{self!r} is not a unit of the form ±g^e")
        e, c = nz[0]
        return GroupRingElement.monomial(self.k, -e, c)

    def __repr__(self):
        return f"GroupRingElement({self.coeffs})"


def _int(x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    raise RingError(f"{x} is not an integer; group rings have integer coefficients")


@dataclass(frozen=True, slots=True)
class MatrixElement:
    """Square N x N matrix over a scalar ring, stored row-major as nested tuples."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise RingError("matrix element must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @property
    def N(self) -> int:
        return len(self.rows)

    def __getitem__(self, kl):
        k, l = kl
        return self.rows[k][l]

    def _check(self, other: MatrixElement):
        if other.N != self.N:
            raise RingError(f"matrix shape mismatch: {self.N} vs {other.N}")

    def __add__(self, other):
        if not isinstance(other, MatrixElement):
            return NotImplemented
        self._check(other)
        return MatrixElement(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return MatrixElement(tuple(tuple(-a for a in r) for r in self.rows))

    def __sub__(self, other):
        if not isinstance(other, MatrixElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return MatrixElement(tuple(tuple(a * other for a in r) for r in self.rows))
        if not isinstance(other, MatrixElement):
            return NotImplemented
        self._check(other)
        n = self.N
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.rows[i][0] * other.rows[0][j]
                for t in range(1, n):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(tuple(row))
        return MatrixElement(tuple(out))

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, MatrixElement):
            return False
        return self.N == other.N and all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def __bool__(self):
        return any(bool(a) for r in self.rows for a in r)

    def conj(self) -> MatrixElement:
        """Conjugate transpose (entrywise ring involution)."""
        n = self.N
        return MatrixElement(tuple(tuple(_conj(self.rows[j][i]) for j in range(n)) for i in range(n)))

    def transpose(self) -> MatrixElement:
        n = self.N
        return MatrixElement(tuple(tuple(self.rows[j][i] for j in range(n)) for i in range(n)))

    def block(self, start: int, stop: int) -> MatrixElement:
        return MatrixElement(tuple(r[start:stop] for r in self.rows[start:stop]))

    def __repr__(self):
        return f"MatrixElement({self.rows!r})"


def _conj(x):
    if isinstance(x, _SCALARS):
        return x
    return x.conj()


def conj(x):
    """Ring involution: identity on rationals, conjugation elsewhere."""
    return _conj(x)


def block_diag(a: MatrixElement, b: MatrixElement, zero) -> MatrixElement:
    p, q = a.N, b.N
    rows = []
    for i in range(p):
        rows.append(tuple(a.rows[i]) + (zero,) * q)
    for i in range(q):
        rows.append((zero,) * p + tuple(b.rows[i]))
    return MatrixElement(tuple(rows))


# ---------------------------------------------------------------------------
# ring descriptors

RATIONAL = "rational"
GAUSSIAN = "gaussian"
QUATERNION = "quaternion"
GROUP_RING = "group_ring"
MATRIX = "matrix"


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    k: int = 0
    N: int = 0
    base: RingDescriptor | None = None

    def __post_init__(self):
        if self.kind not in (RATIONAL, GAUSSIAN, QUATERNION, GROUP_RING, MATRIX):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == GROUP_RING and self.k < 1:
            raise RingError("group ring needs k >= 1")
        if self.kind == MATRIX:
            if self.N < 1 or self.base is None:
                raise RingError("matrix ring needs N >= 1 and a base ring")
            if self.base.kind == MATRIX:
                raise RingError("nested matrix rings are not supported")

    # -- construction -----------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> RingDescriptor:
        """Parse ``rational``, ``gaussian``, ``quaternion``, ``group_ring:k`` or ``matrix:N:<base>``."""
        text = text.strip()
        if text in (RATIONAL, GAUSSIAN, QUATERNION):
            return cls(text)
        if text.startswith(GROUP_RING + ":"):
            try:
                k = int(text.split(":", 1)[1])
            except ValueError:
                raise RingError(f"bad group ring modulus in {text!r}") from None
            return cls(GROUP_RING, k=k)
        if text.startswith(MATRIX + ":"):
            parts = text.split(":", 2)
            if len(parts) != 3:
                raise RingError(f"bad matrix ring {text!r}")
            try:
                N = int(parts[1])
            except ValueError:
                raise RingError(f"bad matrix size in {text!r}") from None
            return cls(MATRIX, N=N, base=cls.parse(parts[2]))
        raise RingError(f"unknown ring {text!r}")

    def __str__(self):
        if self.kind == GROUP_RING:
            return f"{GROUP_RING}:{self.k}"
        if self.kind == MATRIX:
            return f"{MATRIX}:{self.N}:{self.base}"
        return self.kind

    # -- properties -------------------------------------------------------

    @property
    def is_commutative(self) -> bool:
        if self.kind == MATRIX:
            return self.N == 1 and self.base.is_commutative
        return self.kind != QUATERNION

    @property
    def contains_rationals(self) -> bool:
        """True when every nonzero integer is invertible (a Q-algebra)."""
        if self.kind == MATRIX:
            return self.base.contains_rationals
        return self.kind != GROUP_RING

    @property
    def is_scalar(self) -> bool:
        return self.kind != MATRIX

    # -- elements ---------------------------------------------------------

    def from_int(self, c) -> object:
        if self.kind == RATIONAL:
            return Fraction(c)
        if self.kind == GAUSSIAN:
            return Gaussian(Fraction(c))
        if self.kind == QUATERNION:
            return Quaternion(Fraction(c))
        if self.kind == GROUP_RING:
            return GroupRingElement.monomial(self.k, 0, _int(c))
        z = self.base.zero
        d = self.base.from_int(c)
        return MatrixElement(tuple(tuple(d if i == j else z for j in range(self.N)) for i in range(self.N)))

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def contains(self, x) -> bool:
        if self.kind == RATIONAL:
            return isinstance(x, Fraction)
        if self.kind == GAUSSIAN:
            return isinstance(x, Gaussian)
        if self.kind == QUATERNION:
            return isinstance(x, Quaternion)
        if self.kind == GROUP_RING:
            return isinstance(x, GroupRingElement) and x.k == self.k
        return isinstance(x, MatrixElement) and x.N == self.N and all(self.base.contains(a) for r in x.rows for a in r)

    def check(self, x):
        if self.kind == RATIONAL and isinstance(x, int) and not isinstance(x, bool):
            return Fraction(x)
        if not self.contains(x):
            raise RingError(f"{x!r} is not an element of {self}")
        return x

    def coerce(self, x):
        """Convert ints / Fractions / same-ring elements into this ring."""
        if self.contains(x):
            return x
        if isinstance(x, _SCALARS):
            return self.from_int(x) if self.kind != RATIONAL else Fraction(x)
        if self.kind == GAUSSIAN and isinstance(x, Fraction):
            return Gaussian(x)
        raise RingError(f"cannot coerce {x!r} into {self}")

    def conj(self, x):
        return _conj(self.check(x))

    # -- literals ---------------------------------------------------------

    def parse_element(self, lit):
        """Parse a ring-element literal as found in instance documents."""
        try:
            if self.kind == RATIONAL:
                if isinstance(lit, (list, dict, bool)):
                    raise RingError(f"bad rational literal {lit!r}")
                return Fraction(lit) if not isinstance(lit, float) else Fraction(str(lit))
            if self.kind == GAUSSIAN:
                if not isinstance(lit, list) or len(lit) != 2:
                    raise RingError(f"Gaussian literal must be a pair, got {lit!r}")
                return Gaussian(*(RingDescriptor(RATIONAL).parse_element(t) for t in lit))
            if self.kind == QUATERNION:
                if not isinstance(lit, list) or len(lit) != 4:
                    raise RingError(f"quaternion literal must be a 4-array, got {lit!r}")
                return Quaternion(*(RingDescriptor(RATIONAL).parse_element(t) for t in lit))
            if self.kind == GROUP_RING:
                if not isinstance(lit, list) or len(lit) != self.k:
                    raise RingError(f"group ring literal must be a {self.k}-array, got {lit!r}")
                return GroupRingElement(tuple(_int(Fraction(t)) if not isinstance(t, int) else t for t in lit))
            if not isinstance(lit, list) or len(lit) != self.N or any(not isinstance(r, list) or len(r) != self.N for r in lit):
                raise RingError(f"matrix literal must be {self.N}x{self.N}, got {lit!r}")
            return MatrixElement(tuple(tuple(self.base.parse_element(a) for a in r) for r in lit))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            if isinstance(exc, RingError):
                raise
            raise RingError(f"bad literal {lit!r} for {self}: {exc}") from None

    def literal(self, x):
        """Inverse of :meth:`parse_element` (JSON-compatible)."""
        x = self.check(x)
        if self.kind == RATIONAL:
            return _fmt_frac(x)
        if self.kind == GAUSSIAN:
            return [_fmt_frac(x.re), _fmt_frac(x.im)]
        if self.kind == QUATERNION:
            return [_fmt_frac(t) for t in (x.w, x.x, x.y, x.z)]
        if self.kind == GROUP_RING:
            return list(x.coeffs)
        return [[self.base.literal(a) for a in r] for r in x.rows]

    def render(self, x) -> str:
        x = self.check(x)
        if self.kind == RATIONAL:
            return _fmt_frac(x)
        if self.kind == GAUSSIAN:
            return f"({_fmt_frac(x.re)})+({_fmt_frac(x.im)})i"
        if self.kind == QUATERNION:
            w, a, b, c = (_fmt_frac(t) for t in (x.w, x.x, x.y, x.z))
            return f"{w}+{a}i+{b}j+{c}k".replace("+-", "-")
        if self.kind == GROUP_RING:
            parts = [f"{c}·[g^{e}]" for e, c in enumerate(x.coeffs) if c]
            return "(" + " + ".join(parts) + ")" if parts else "0"
        return "[" + "; ".join(", ".join(self.base.render(a) for a in r) for r in x.rows) + "]"

    # -- sampling ---------------------------------------------------------

    def random_element(self, rng: random.Random, size: int = 3, denominators: Iterable[int] = (1, 2, 3)):
        """Small random element with entries in {-size..size}/denominators."""
        dens = tuple(denominators)

        def q():
            return Fraction(rng.randint(-size, size), rng.choice(dens))

        if self.kind == RATIONAL:
            return q()
        if self.kind == GAUSSIAN:
            return Gaussian(q(), q())
        if self.kind == QUATERNION:
            return Quaternion(q(), q(), q(), q())
        if self.kind == GROUP_RING:
            return GroupRingElement(tuple(rng.randint(-size, size) for _ in range(self.k)))
        return MatrixElement(tuple(tuple(self.base.random_element(rng, size, dens) for _ in range(self.N)) for _ in range(self.N)))

    def basis(self) -> list:
        """Additive generators used for deterministic probes."""
        if self.kind == RATIONAL:
            return [Fraction(1)]
        if self.kind == GAUSSIAN:
            return [Gaussian(1), Gaussian(0, 1)]
        if self.kind == QUATERNION:
            return [Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)]
        if self.kind == GROUP_RING:
            return [GroupRingElement.monomial(self.k, e) for e in range(self.k)]
        out = []
        z = self.base.zero
        for b in self.base.basis():
            for i in range(self.N):
                for j in range(self.N):
                    out.append(MatrixElement(tuple(tuple(b if (r, c) == (i, j) else z for c in range(self.N)) for r in range(self.N))))
        return out


QQ = RingDescriptor(RATIONAL)
QQi = RingDescriptor(GAUSSIAN)
HH = RingDescriptor(QUATERNION)


def group_ring(k: int) -> RingDescriptor:
    return RingDescriptor(GROUP_RING, k=k)


def matrix_ring(N: int, base: RingDescriptor) -> RingDescriptor:
    return RingDescriptor(MATRIX, N=N, base=base)


def ring_arith(ring: RingDescriptor, op: str, x, y=None):
    """Checked ``add`` / ``mul`` / ``neg`` in ``ring``."""
    ring.check(x)
    if op == "neg":
        return -x
    ring.check(y)
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown ring operation {op!r}")


# ---------------------------------------------------------------------------
# central traces

ID = "id"
RE = "re"
NTR = "ntr"


@dataclass(frozen=True)
class CentralTrace:
    """Additive central map ``source -> target``.

    ``kind`` is ``id`` (commutative source, target = source), ``re`` (real
    part of a Gaussian or quaternion, or identity on rationals) or ``ntr``
    (normalized matrix trace ``(1/N) Tr`` followed by ``inner``).
    """

    source: RingDescriptor
    kind: str
    inner: CentralTrace | None = None
    target: RingDescriptor = field(init=False)

    def __post_init__(self):
        src = self.source
        if self.kind == ID:
            if not src.is_commutative or src.kind == MATRIX:
                raise RingError(f"identity trace needs a commutative scalar ring, got {src}")
            tgt = src
        elif self.kind == RE:
            if src.kind not in (RATIONAL, GAUSSIAN, QUATERNION):
                raise RingError(f"real part is undefined on {src}")
            tgt = QQ
        elif self.kind == NTR:
            if src.kind != MATRIX or self.inner is None or self.inner.source != src.base:
                raise RingError("normalized matrix trace needs a matrix ring and a trace on its base")
            if not self.inner.target.contains_rationals:
                raise RingError("normalized matrix trace needs 1/N in the target")
            tgt = self.inner.target
        else:
            raise RingError(f"unknown trace kind {self.kind!r}")
        object.__setattr__(self, "target", tgt)

    @classmethod
    def parse(cls, source: RingDescriptor, name: str) -> CentralTrace:
        if source.kind == MATRIX:
            return cls(source, NTR, inner=cls(source.base, name))
        return cls(source, name)

    def __call__(self, x):
        self.source.check(x)
        if self.kind == ID:
            return x
        if self.kind == RE:
            return x if isinstance(x, Fraction) else Fraction(x.w if isinstance(x, Quaternion) else x.re)
        n = x.N
        acc = self.inner(x.rows[0][0])
        for i in range(1, n):
            acc = acc + self.inner(x.rows[i][i])
        return acc * Fraction(1, n)

    def __str__(self):
        return self.kind if self.kind != NTR else f"ntr({self.inner})"


def trace_apply(trace, x):
    return trace(x)


@dataclass(frozen=True)
class CentralityResult:
    passed: bool
    witness: tuple | None = None
    trials: int = 0

    def __bool__(self):
        return self.passed


def check_centrality(trace, seed: int, trials: int) -> CentralityResult:
    """Test ``trace(xy) == trace(yx)`` on basis pairs, then ``trials`` random pairs.

    ``trace`` may be any callable with a ``source`` ring attribute, which
    lets tests probe non-central functionals as well.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ring = trace.source
    basis = ring.basis()
    pairs = [(x, y) for x in basis for y in basis]
    rng = random.Random(seed)
    pairs += [(ring.random_element(rng), ring.random_element(rng)) for _ in range(trials)]
    for x, y in pairs:
        if trace(x * y) != trace(y * x):
            return CentralityResult(False, (x, y), len(pairs))
    return CentralityResult(True, None, len(pairs))


# ---------------------------------------------------------------------------
# polynomials


def render_var(var) -> str:
    name, *idx = var
    parts = []
    for t in idx:
        parts.append("{" + ",".join(str(s) for s in t) + "}" if isinstance(t, tuple) else str(t))
    return name + "_".join(parts)


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Polynomial:
    """Sparse polynomial in commuting central indeterminates.

    ``terms`` maps a monomial -- a sorted tuple of ``(variable, exponent)``
    pairs -- to a nonzero coefficient.  Variables are tuples such as
    ``("a", 1, 2)``.  Treat instances as immutable.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingDescriptor, terms: Mapping | None = None):
        self.ring = ring
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[tuple(sorted(mono))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ring, terms: dict) -> Polynomial:
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    @classmethod
    def zero(cls, ring: RingDescriptor) -> Polynomial:
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring: RingDescriptor, c) -> Polynomial:
        c = ring.coerce(c)
        return cls._raw(ring, {(): c} if c else {})

    @classmethod
    def var(cls, ring: RingDescriptor, var: tuple, coeff=None) -> Polynomial:
        c = ring.one if coeff is None else ring.coerce(coeff)
        return cls._raw(ring, {((var, 1),): c} if c else {})

    @classmethod
    def monomial(cls, ring: RingDescriptor, mono: Mapping, coeff) -> Polynomial:
        c = ring.coerce(coeff)
        key = tuple(sorted((v, e) for v, e in mono.items() if e))
        return cls._raw(ring, {key: c} if c else {})

    # -- arithmetic -------------------------------------------------------

    def _same_ring(self, other: Polynomial):
        if other.ring != self.ring:
            raise RingError(f"coefficient ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.ring, other)
        self._same_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.constant(self.ring, other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.coerce(other)
            return Polynomial._raw(self.ring, {m: p for m, a in self.terms.items() if (p := a * c)})
        self._same_ring(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                out[m] = c if s is None else s + c
        return Polynomial._raw(self.ring, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        c = self.ring.coerce(other)
        return Polynomial._raw(self.ring, {m: p for m, a in self.terms.items() if (p := c * a)})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.ring, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- structure --------------------------------------------------------

    def variables(self) -> list:
        return sorted({v for m in self.terms for v, _ in m})

    def degree_in(self, var) -> int:
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def coefficient(self, mono: Mapping):
        key = tuple(sorted((v, e) for v, e in mono.items() if e))
        return self.terms.get(key, self.ring.zero)

    def sorted_terms(self) -> list:
        """Terms in descending lexicographic order of exponent vectors."""
        vs = self.variables()
        idx = {v: i for i, v in enumerate(vs)}

        def key(item):
            vec = [0] * len(vs)
            for v, e in item[0]:
                vec[idx[v]] = e
            return vec

        return sorted(self.terms.items(), key=key, reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for mono, c in self.sorted_terms():
            factors = [render_var(v) + (f"^{e}" if e > 1 else "") for v, e in mono]
            out.append("*".join([self.ring.render(c)] + factors))
        return " + ".join(out)

    __str__ = render

    def __repr__(self):
        return f"Polynomial({self.ring}, {self.render()})"

    # -- maps -------------------------------------------------------------

    def map_coefficients(self, f: Callable, ring: RingDescriptor) -> Polynomial:
        return Polynomial._raw(ring, {m: d for m, c in self.terms.items() if (d := f(c))})

    def rename(self, f: Callable) -> Polynomial:
        """Apply the variable substitution ``v -> f(v)`` (may identify variables)."""
        out: dict = {}
        for m, c in self.terms.items():
            d: dict = {}
            for v, e in m:
                w = f(v)
                d[w] = d.get(w, 0) + e
            key = tuple(sorted(d.items()))
            s = out.get(key)
            out[key] = c if s is None else s + c
        return Polynomial._raw(self.ring, {m: c for m, c in out.items() if c})

    def specialize(self, assignment: Mapping):
        """Evaluate at ``assignment`` (variable -> ring element); returns an element."""
        ring = self.ring
        acc = ring.zero
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                if v not in assignment:
                    raise KeyError(f"no value assigned to {render_var(v)}")
                x = ring.coerce(assignment[v])
                for _ in range(e):
                    t = t * x
            acc = acc + t
        return acc

    def partial_specialize(self, assignment: Mapping) -> Polynomial:
        """Substitute scalars (ints/Fractions, central) for some variables."""
        out: dict = {}
        for m, c in self.terms.items():
            keep = []
            t = c
            for v, e in m:
                if v in assignment:
                    t = t * Fraction(assignment[v]) ** e
                else:
                    keep.append((v, e))
            key = tuple(keep)
            s = out.get(key)
            out[key] = t if s is None else s + t
        return Polynomial._raw(self.ring, {m: c for m, c in out.items() if c})


def poly_add(P: Polynomial, Q: Polynomial) -> Polynomial:
    return P + Q


def poly_mul(P: Polynomial, Q: Polynomial) -> Polynomial:
    return P * Q


def poly_arith(op: str, P: Polynomial, Q: Polynomial) -> Polynomial:
    if op == "add":
        return P + Q
    if op == "mul":
        return P * Q
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_trace(trace: CentralTrace, P: Polynomial) -> Polynomial:
    if P.ring != trace.source:
        raise RingError(f"polynomial over {P.ring}, trace expects {trace.source}")
    return P.map_coefficients(trace, trace.target)


def poly_specialize(P: Polynomial, assignment: Mapping):
    return P.specialize(assignment)


def group_ring_evaluate(P: Polynomial, root) -> Polynomial:
    """Apply the ring map Z[Z/k] -> Q (or Q(i)) sending g to ``root``.

    ``root`` must satisfy ``root**k == 1``; for k = 2 use ``-1`` (signed graphs).
    """
    if P.ring.kind != GROUP_RING:
        raise RingError("group_ring_evaluate expects a group-ring polynomial")
    target = QQi if isinstance(root, Gaussian) else QQ
    one = target.one
    root = target.coerce(root)
    powers = [one]
    for _ in range(P.ring.k - 1):
        powers.append(powers[-1] * root)
    if powers[-1] * root != one:
        raise RingError(f"{root!r} is not a {P.ring.k}-th root of unity")

    def f(x: GroupRingElement):
        acc = target.zero
        for e, c in enumerate(x.coeffs):
            if c:
                acc = acc + powers[e] * c
        return acc

    return P.map_coefficients(f, target)
