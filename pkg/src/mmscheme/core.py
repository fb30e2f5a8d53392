"""Data model for matrix multiplication schemes and exact Brent verification.

A scheme is a list of summands A ⊗ B ⊗ C of n x n factor matrices over Z2,
Z, or Q.  A scheme computes the n x n matrix product (in the transposed
convention, C^T = A*B) exactly when all Brent equations hold:

    sum_i  a_i[i1,i2] * b_i[j1,j2] * c_i[k1,k2]  =  [i2=j1][j2=k1][k2=i1]

for all index tuples.  Everything in this module is immutable and exact;
there is no floating point anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Union

from . import exactla, gf2

__all__ = [
    "Ring",
    "Mat",
    "Summand",
    "Scheme",
    "BrentIndex",
    "brent_indices",
    "classical_scheme",
    "brent_residual",
    "verify",
    "VerifyReport",
    "weight",
    "rank_profile",
    "scale_summand",
    "reduce_mod2",
    "SUPPORTED_DIMENSIONS",
]

Entry = Union[int, Fraction]

SUPPORTED_DIMENSIONS = (2, 3)


class Ring(enum.Enum):
    """Coefficient ring tag: GF(2), arbitrary-precision Z, or exact Q."""

    Z2 = "z2"
    INT = "int"
    RAT = "rat"

    def coerce(self, value) -> Entry:
        if self is Ring.Z2:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"not a Z2 value: {value!r}")
                value = value.numerator
            return int(value) % 2
        if self is Ring.INT:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"not an integer: {value!r}")
                return int(value)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"not an integer: {value!r}")
            return value
        return Fraction(value)

    def add(self, a: Entry, b: Entry) -> Entry:
        return (a + b) % 2 if self is Ring.Z2 else a + b

    def mul(self, a: Entry, b: Entry) -> Entry:
        return (a * b) % 2 if self is Ring.Z2 else a * b

    def neg(self, a: Entry) -> Entry:
        return a if self is Ring.Z2 else -a

    @property
    def zero(self) -> Entry:
        return Fraction(0) if self is Ring.RAT else 0

    @property
    def one(self) -> Entry:
        return Fraction(1) if self is Ring.RAT else 1

    def is_unit(self, a: Entry) -> bool:
        if self is Ring.Z2:
            return a == 1
        if self is Ring.INT:
            return a in (1, -1)
        return a != 0


@dataclass(frozen=True)
class Mat:
    """Immutable n x n matrix with entries in a fixed ring."""

    ring: Ring
    entries: tuple[tuple[Entry, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square")

    @classmethod
    def from_rows(cls, ring: Ring, rows) -> "Mat":
        return cls(ring, tuple(tuple(ring.coerce(v) for v in row) for row in rows))

    @classmethod
    def zero(cls, ring: Ring, n: int) -> "Mat":
        return cls(ring, tuple(tuple(ring.zero for _ in range(n)) for _ in range(n)))

    @classmethod
    def unit(cls, ring: Ring, n: int, u: int, v: int) -> "Mat":
        """Matrix with a single 1 at (row u, column v), 1-based."""
        return cls(
            ring,
            tuple(
                tuple(
                    ring.one if (i, j) == (u - 1, v - 1) else ring.zero
                    for j in range(n)
                )
                for i in range(n)
            ),
        )

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx: tuple[int, int]) -> Entry:
        i, j = idx
        return self.entries[i][j]

    def nnz(self) -> int:
        return sum(1 for row in self.entries for v in row if v)

    def is_zero(self) -> bool:
        return all(not v for row in self.entries for v in row)

    def transpose(self) -> "Mat":
        n = self.n
        return Mat(self.ring, tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)))

    def scale(self, factor: Entry) -> "Mat":
        ring = self.ring
        f = ring.coerce(factor)
        return Mat(ring, tuple(tuple(ring.mul(f, v) for v in row) for row in self.entries))

    def add(self, other: "Mat") -> "Mat":
        ring = self.ring
        return Mat(
            ring,
            tuple(
                tuple(ring.add(a, b) for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
        )

    def mul(self, other: "Mat") -> "Mat":
        ring = self.ring
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ring.zero
                for k in range(n):
                    acc = ring.add(acc, ring.mul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            rows.append(tuple(row))
        return Mat(ring, tuple(rows))

    def rank(self) -> int:
        """Rank over the ring's fraction field (GF(2) for Z2, Q otherwise)."""
        n = self.n
        if self.ring is Ring.Z2:
            rows = [
                sum((1 << j) for j in range(n) if self.entries[i][j])
                for i in range(n)
            ]
            return gf2.rank(rows, n)
        return exactla.rank_q(self.entries)

    def inverse(self) -> "Mat | None":
        """Inverse over the ring, or None if not invertible in the ring.

        For INT the inverse must itself be integral (unimodular input).
        """
        n = self.n
        if self.ring is Ring.Z2:
            packed = gf2.pack(self.entries, n)
            out = gf2.inv(packed, n)
            if out is None:
                return None
            return Mat(Ring.Z2, gf2.unpack(out, n))
        inv = exactla.inverse_q(self.entries)
        if inv is None:
            return None
        if self.ring is Ring.INT:
            if any(v.denominator != 1 for row in inv for v in row):
                return None
            return Mat(Ring.INT, tuple(tuple(int(v) for v in row) for row in inv))
        return Mat(Ring.RAT, tuple(tuple(v for v in row) for row in inv))


@dataclass(frozen=True)
class Summand:
    """One rank-one tensor A ⊗ B ⊗ C."""

    a: Mat
    b: Mat
    c: Mat

    def __post_init__(self):
        if not (self.a.ring is self.b.ring is self.c.ring):
            raise ValueError("summand factors must share a ring")
        if not (self.a.n == self.b.n == self.c.n):
            raise ValueError("summand factors must share a dimension")

    def factors(self) -> tuple[Mat, Mat, Mat]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class Scheme:
    """A rank-m decomposition of the n x n matrix multiplication tensor."""

    ring: Ring
    n: int
    summands: tuple[Summand, ...]

    def __post_init__(self):
        if self.n not in SUPPORTED_DIMENSIONS:
            raise ValueError(f"unsupported dimension n={self.n}")
        if len(self.summands) < 1:
            raise ValueError("a scheme needs at least one summand")
        for s in self.summands:
            if s.a.ring is not self.ring or s.a.n != self.n:
                raise ValueError("summand ring/dimension mismatch")

    @property
    def m(self) -> int:
        return len(self.summands)

    def replace_summands(self, summands) -> "Scheme":
        return Scheme(self.ring, self.n, tuple(summands))


class BrentIndex(NamedTuple):
    """Index tuple of one Brent equation (all components 1-based)."""

    i1: int
    i2: int
    j1: int
    j2: int
    k1: int
    k2: int

    @property
    def rhs(self) -> int:
        # transposed convention: C^T = A*B
        return 1 if (self.i2 == self.j1 and self.j2 == self.k1 and self.k2 == self.i1) else 0


def brent_indices(n: int) -> Iterator[BrentIndex]:
    """All n^6 Brent equation indices in lexicographic order."""
    rng = range(1, n + 1)
    for i1 in rng:
        for i2 in rng:
            for j1 in rng:
                for j2 in rng:
                    for k1 in rng:
                        for k2 in rng:
                            yield BrentIndex(i1, i2, j1, j2, k1, k2)


def classical_scheme(n: int, ring: Ring) -> Scheme:
    """The n^3-summand schoolbook scheme sum E(i,k) ⊗ E(k,j) ⊗ E(j,i)."""
    if n not in SUPPORTED_DIMENSIONS:
        raise ValueError(f"unsupported dimension n={n}")
    summands = []
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                summands.append(
                    Summand(
                        Mat.unit(ring, n, i, k),
                        Mat.unit(ring, n, k, j),
                        Mat.unit(ring, n, j, i),
                    )
                )
    return Scheme(ring, n, tuple(summands))


def brent_residual(s: Scheme, idx: BrentIndex) -> Entry:
    """sum of triple products minus the target value, in the scheme's ring."""
    ring = s.ring
    i1, i2, j1, j2, k1, k2 = idx
    acc = ring.zero
    for sm in s.summands:
        a = sm.a.entries[i1 - 1][i2 - 1]
        if not a:
            continue
        b = sm.b.entries[j1 - 1][j2 - 1]
        if not b:
            continue
        c = sm.c.entries[k1 - 1][k2 - 1]
        if not c:
            continue
        acc = ring.add(acc, ring.mul(ring.mul(a, b), c))
    return ring.add(acc, ring.neg(ring.coerce(idx.rhs)))


@dataclass(frozen=True)
class VerifyReport:
    correct: bool
    violations: tuple[BrentIndex, ...]


def verify(s: Scheme) -> VerifyReport:
    """Check every Brent equation; lists all failing index tuples."""
    violations = tuple(idx for idx in brent_indices(s.n) if brent_residual(s, idx))
    return VerifyReport(not violations, violations)


def weight(s: Scheme) -> int:
    """Number of index tuples whose triple product is nonzero."""
    return sum(sm.a.nnz() * sm.b.nnz() * sm.c.nnz() for sm in s.summands)


def rank_profile(s: Scheme) -> tuple[tuple[int, int, int], ...]:
    """Multiset (as a sorted tuple) of factor rank triples."""
    return tuple(sorted((sm.a.rank(), sm.b.rank(), sm.c.rank()) for sm in s.summands))


def scale_summand(s: Scheme, index: int, la, lb, lc) -> Scheme:
    """Rescale one summand by units with la * lb * lc = 1 (0-based index)."""
    ring = s.ring
    la, lb, lc = ring.coerce(la), ring.coerce(lb), ring.coerce(lc)
    for f in (la, lb, lc):
        if not ring.is_unit(f):
            raise ValueError(f"scale factor {f!r} is not a unit")
    if ring.mul(ring.mul(la, lb), lc) != ring.one:
        raise ValueError("scale factors must multiply to 1")
    sm = s.summands[index]
    new = Summand(sm.a.scale(la), sm.b.scale(lb), sm.c.scale(lc))
    summands = list(s.summands)
    summands[index] = new
    return s.replace_summands(summands)


def reduce_mod2(s: Scheme) -> Scheme:
    """Entrywise reduction of an integer scheme modulo 2."""
    if s.ring is not Ring.INT:
        raise ValueError("reduce_mod2 expects an integer scheme")
    summands = [
        Summand(
            Mat.from_rows(Ring.Z2, sm.a.entries),
            Mat.from_rows(Ring.Z2, sm.b.entries),
            Mat.from_rows(Ring.Z2, sm.c.entries),
        )
        for sm in s.summands
    ]
    return Scheme(Ring.Z2, s.n, tuple(summands))
