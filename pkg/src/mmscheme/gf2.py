"""GF(2) linear algebra on int bitsets.

Vectors are Python ints (bit c = coordinate c), matrices are lists of row
bitsets.  Everything here is exact and allocation-light; it backs the rank
computations over Z2 and the subspace machinery of the symmetry search.
"""

from __future__ import annotations

__all__ = [
    "rank",
    "rref",
    "nullspace",
    "solve",
    "span_basis",
    "intersect",
    "pack",
    "unpack",
    "identity",
    "transpose_bits",
    "mat_mul",
    "mat_vec",
    "det",
    "inv",
    "rank_packed",
]


def rank(rows: list[int], ncols: int) -> int:
    """Rank of the matrix with the given row bitsets."""
    work = [r for r in rows if r]
    rnk = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = None
        for i in range(rnk, len(work)):
            if work[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        work[rnk], work[pivot] = work[pivot], work[rnk]
        for i in range(len(work)):
            if i != rnk and (work[i] & bit):
                work[i] ^= work[rnk]
        rnk += 1
        if rnk == len(work):
            break
    return rnk


def rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = None
        for i in range(r, len(work)):
            if work[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] & bit):
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of the right kernel {x : A x = 0}, one bitset per basis vector."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, pc in zip(reduced, pivots):
            if row & (1 << free):
                vec |= 1 << pc
        basis.append(vec)
    return basis


def solve(rows: list[int], ncols: int, rhs: list[int]) -> int | None:
    """One solution x of A x = b (rhs entries 0/1), or None if inconsistent."""
    aug = [row | (b << ncols) for row, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols)
    sol = 0
    for row, pc in zip(reduced, pivots):
        if row >> ncols:
            sol |= 1 << pc
    for row, b in zip(rows, rhs):
        if ((row & sol).bit_count() & 1) != b:
            return None
    return sol


def span_basis(vectors: list[int], ncols: int) -> list[int]:
    """Reduced basis of the span of the given vectors."""
    reduced, _ = rref(vectors, ncols)
    return reduced


def intersect(basis_a: list[int], basis_b: list[int], dim: int) -> list[int]:
    """Basis of span(basis_a) ∩ span(basis_b) via the Zassenhaus trick."""
    # rows (v | v) for a-vectors and (v | 0) for b-vectors; after eliminating
    # the left block, rows with zero left half carry intersection vectors on
    # the right.
    rows = [v | (v << dim) for v in basis_a]
    rows += [v for v in basis_b]
    left_mask = (1 << dim) - 1
    reduced, _ = rref(rows, 2 * dim)
    out = [r >> dim for r in reduced if (r & left_mask) == 0 and (r >> dim)]
    return span_basis(out, dim)


# -- packed square matrices (n <= 5), row-major bit layout ------------------


def pack(entries, n: int) -> int:
    """n x n 0/1 matrix (sequence of rows) -> bitset."""
    bits = 0
    for i in range(n):
        for j in range(n):
            if entries[i][j] & 1:
                bits |= 1 << (i * n + j)
    return bits


def unpack(bits: int, n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple((bits >> (i * n + j)) & 1 for j in range(n)) for i in range(n)
    )


def identity(n: int) -> int:
    bits = 0
    for i in range(n):
        bits |= 1 << (i * n + i)
    return bits


def transpose_bits(a: int, n: int) -> int:
    out = 0
    for i in range(n):
        for j in range(n):
            if a & (1 << (i * n + j)):
                out |= 1 << (j * n + i)
    return out


def mat_mul(a: int, b: int, n: int) -> int:
    """Product of two packed matrices: XOR of b-rows selected by a's rows."""
    out = 0
    rowmask = (1 << n) - 1
    for i in range(n):
        arow = (a >> (i * n)) & rowmask
        acc = 0
        k = 0
        while arow:
            if arow & 1:
                acc ^= (b >> (k * n)) & rowmask
            arow >>= 1
            k += 1
        out |= acc << (i * n)
    return out


def mat_vec(a: int, x: int, n: int) -> int:
    """Packed matrix times column vector (bit j = coordinate j)."""
    out = 0
    rowmask = (1 << n) - 1
    for i in range(n):
        if ((a >> (i * n)) & x & rowmask).bit_count() & 1:
            out |= 1 << i
    return out


def det(a: int, n: int) -> int:
    rows = [(a >> (i * n)) & ((1 << n) - 1) for i in range(n)]
    return 1 if rank(rows, n) == n else 0


def inv(a: int, n: int) -> int | None:
    """Inverse of a packed matrix, or None if singular."""
    rowmask = (1 << n) - 1
    # augment with the identity and run Gauss-Jordan
    work = [((a >> (i * n)) & rowmask) | (1 << (n + i)) for i in range(n)]
    r = 0
    for col in range(n):
        bit = 1 << col
        pivot = None
        for i in range(r, n):
            if work[i] & bit:
                pivot = i
                break
        if pivot is None:
            return None
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(n):
            if i != r and (work[i] & bit):
                work[i] ^= work[r]
        r += 1
    out = 0
    for i in range(n):
        out |= (work[i] >> n) << (i * n)
    return out


def rank_packed(a: int, n: int) -> int:
    rowmask = (1 << n) - 1
    return rank([(a >> (i * n)) & rowmask for i in range(n)], n)
