"""Dense exact linear algebra over Q (fractions.Fraction).

Small and boring on purpose: matrices here are at most a few hundred
entries (factor matrices, intertwiner systems, dependence checks), so plain
Gaussian elimination with exact rationals is all that is needed.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["rank_q", "solve_q", "nullspace_q", "inverse_q"]


def _to_fractions(rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in rows]


def rank_q(rows) -> int:
    work = _to_fractions(rows)
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i][col]:
                f = work[i][col] / work[r][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return r


def _rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    work = _to_fractions(rows)
    pivots: list[int] = []
    if not work:
        return work, pivots
    ncols = len(work[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][col]
        work[r] = [v * inv for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def solve_q(rows, rhs) -> list[Fraction] | None:
    """One solution of A x = b, or None if inconsistent."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = _rref(aug)
    sol = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        if pc == ncols:
            return None
        sol[pc] = row[-1]
    return sol


def nullspace_q(rows) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    reduced, pivots = _rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[free]
        basis.append(vec)
    return basis


def inverse_q(rows) -> list[list[Fraction]] | None:
    """Inverse of a square matrix over Q, or None if singular."""
    n = len(rows)
    aug = [
        [Fraction(v) for v in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    reduced, pivots = _rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in reduced]
