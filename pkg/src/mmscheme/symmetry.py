"""Symmetry group of matrix multiplication: action, invariants, equivalence.

Group elements are tuples (U, V, W, pi) of invertible matrices and a factor
permutation.  The permutation acts first (transposing all factors when it
is odd), then the matrices sandwich the factors:

    (U,V,W) . (A ⊗ B ⊗ C)  =  U A V^-1 ⊗ V B W^-1 ⊗ W C U^-1.

Correct schemes stay correct under the action, so orbits partition the
solution set into equivalence classes.  Equivalence of two Z2 schemes is
decided exactly by a recursive summand-matching search over intertwiner
subspaces; rank-derived invariants provide a cheap negative filter.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .core import Mat, Ring, Scheme, Summand, rank_profile
from .rng import SplitMix64

__all__ = [
    "GroupElement",
    "identity_element",
    "apply_group",
    "compose",
    "inverse",
    "random_group_element",
    "InvariantKey",
    "invariant_key",
    "equivalent",
    "simplify_weight",
    "GL3_Z2_ORDER",
    "GROUP_ORDER_Z2",
    "SUBSPACE_ENUM_LIMIT",
]

# |GL(3, Z2)| and the order of the full symmetry group over Z2 for n = 3
GL3_Z2_ORDER = 168
GROUP_ORDER_Z2 = GL3_Z2_ORDER**3 * 6

# exhaustive invertibility searches enumerate at most 2^this many points
SUBSPACE_ENUM_LIMIT = 20

# position i of the permuted tensor receives factor PERMUTATIONS[name][i-1];
# odd permutations additionally transpose every factor
PERMUTATIONS: dict[str, tuple[int, int, int]] = {
    "id": (1, 2, 3),
    "(12)": (2, 1, 3),
    "(13)": (3, 2, 1),
    "(23)": (1, 3, 2),
    "(123)": (2, 3, 1),
    "(132)": (3, 1, 2),
}
_PERM_NAMES = tuple(PERMUTATIONS)
_NAME_OF = {v: k for k, v in PERMUTATIONS.items()}
_ODD = {"id": False, "(123)": False, "(132)": False, "(12)": True, "(13)": True, "(23)": True}


@dataclass(frozen=True)
class GroupElement:
    u: Mat
    v: Mat
    w: Mat
    perm_name: str

    def __post_init__(self):
        if self.perm_name not in PERMUTATIONS:
            raise ValueError(f"unknown permutation {self.perm_name!r}")
        if not (self.u.ring is self.v.ring is self.w.ring):
            raise ValueError("group element matrices must share a ring")

    @property
    def odd(self) -> bool:
        return _ODD[self.perm_name]

    def matrices(self) -> tuple[Mat, Mat, Mat]:
        return (self.u, self.v, self.w)


def identity_element(ring: Ring, n: int) -> GroupElement:
    eye = Mat.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])
    return GroupElement(eye, eye, eye, "id")


def _inverses(g: GroupElement) -> tuple[Mat, Mat, Mat]:
    out = []
    for m in g.matrices():
        inv = m.inverse()
        if inv is None:
            raise ValueError("group element matrix is not invertible in the ring")
        out.append(inv)
    return tuple(out)


def apply_group(g: GroupElement, s: Scheme) -> Scheme:
    """Act on every summand: permutation first, then sandwiching."""
    if g.u.n != s.n:
        raise ValueError("group element dimension does not match the scheme")
    if g.u.ring is not s.ring:
        raise ValueError("group element ring does not match the scheme")
    uinv, vinv, winv = _inverses(g)
    perm = PERMUTATIONS[g.perm_name]
    odd = g.odd
    new = []
    for sm in s.summands:
        fac = sm.factors()
        x, y, z = (fac[perm[0] - 1], fac[perm[1] - 1], fac[perm[2] - 1])
        if odd:
            x, y, z = x.transpose(), y.transpose(), z.transpose()
        new.append(
            Summand(
                g.u.mul(x).mul(vinv),
                g.v.mul(y).mul(winv),
                g.w.mul(z).mul(uinv),
            )
        )
    return s.replace_summands(new)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """The element g*h with apply(g*h, s) = apply(g, apply(h, s))."""
    pi = PERMUTATIONS[g.perm_name]
    rho = PERMUTATIONS[h.perm_name]
    tau = tuple(rho[pi[i] - 1] for i in range(3))
    nmats = g.matrices()
    hmats = h.matrices()
    out = []
    for i in range(3):
        if not g.odd:
            out.append(nmats[i].mul(hmats[pi[i] - 1]))
        else:
            # sandwiched transposition flips the cyclic successor structure
            succ = pi[i] % 3 + 1
            inv = hmats[succ - 1].transpose().inverse()
            if inv is None:
                raise ValueError("group element matrix is not invertible in the ring")
            out.append(nmats[i].mul(inv))
    return GroupElement(out[0], out[1], out[2], _NAME_OF[tau])


def inverse(g: GroupElement) -> GroupElement:
    pi = PERMUTATIONS[g.perm_name]
    pinv = [0, 0, 0]
    for i in range(3):
        pinv[pi[i] - 1] = i + 1
    nmats = g.matrices()
    out = []
    for j in range(1, 4):
        if not g.odd:
            m = nmats[pinv[j - 1] - 1].inverse()
            if m is None:
                raise ValueError("group element matrix is not invertible in the ring")
        else:
            pred = (j - 2) % 3 + 1
            m = nmats[pinv[pred - 1] - 1].transpose()
        out.append(m)
    return GroupElement(out[0], out[1], out[2], _NAME_OF[tuple(pinv)])


def random_group_element(n: int, seed_or_rng, ring: Ring = Ring.Z2) -> GroupElement:
    """Uniform permutation and rejection-sampled invertible 0/1 matrices."""
    rng = seed_or_rng if isinstance(seed_or_rng, SplitMix64) else SplitMix64(seed_or_rng)
    mats = []
    for _ in range(3):
        while True:
            bits = rng.getbits(n * n)
            if gf2.det(bits, n):
                break
        mats.append(Mat.from_rows(ring, gf2.unpack(bits, n)))
    name = _PERM_NAMES[rng.randbelow(6)]
    return GroupElement(mats[0], mats[1], mats[2], name)


# -- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class InvariantKey:
    """Three rank-derived polynomials, each as ((exponent, coeff), ...) sorted
    by descending exponent; constant on orbits of the group action."""

    poly1: tuple[tuple[int, int], ...]
    poly2: tuple[tuple[int, int], ...]
    poly3: tuple[tuple[int, int], ...]

    def canonical_string(self) -> str:
        return " | ".join(_poly_str(p) for p in (self.poly1, self.poly2, self.poly3))


def _poly_str(poly: tuple[tuple[int, int], ...]) -> str:
    if not poly:
        return "0"
    parts = []
    for exp, coeff in poly:
        if exp == 0:
            parts.append(str(coeff))
        elif exp == 1:
            parts.append(f"{coeff}*x")
        else:
            parts.append(f"{coeff}*x^{exp}")
    return " + ".join(parts)


def _counter_to_poly(counts: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(counts.items(), reverse=True))


def invariant_key(s: Scheme) -> InvariantKey:
    profile = rank_profile(s)
    single: dict[int, int] = {}
    triple: dict[int, int] = {}
    columns = [0, 0, 0]
    for ra, rb, rc in profile:
        for r in (ra, rb, rc):
            single[r] = single.get(r, 0) + 1
        t = ra + rb + rc
        triple[t] = triple.get(t, 0) + 1
        columns[0] += ra
        columns[1] += rb
        columns[2] += rc
    col: dict[int, int] = {}
    for c in columns:
        col[c] = col.get(c, 0) + 1
    return InvariantKey(_counter_to_poly(single), _counter_to_poly(triple), _counter_to_poly(col))


# -- packed Z2 helpers ---------------------------------------------------------

_DET_TABLES: dict[int, list[int]] = {}
_RANK_TABLES: dict[int, list[int]] = {}


def _det_table(n: int) -> list[int]:
    table = _DET_TABLES.get(n)
    if table is None:
        table = [gf2.det(a, n) for a in range(1 << (n * n))]
        _DET_TABLES[n] = table
    return table


def _rank_table(n: int) -> list[int]:
    table = _RANK_TABLES.get(n)
    if table is None:
        table = [gf2.rank_packed(a, n) for a in range(1 << (n * n))]
        _RANK_TABLES[n] = table
    return table


def _pack_scheme(s: Scheme) -> list[tuple[int, int, int]]:
    n = s.n
    return [
        (
            gf2.pack(sm.a.entries, n),
            gf2.pack(sm.b.entries, n),
            gf2.pack(sm.c.entries, n),
        )
        for sm in s.summands
    ]


def _unpack_scheme(packed, n: int) -> Scheme:
    summands = tuple(
        Summand(
            Mat(Ring.Z2, gf2.unpack(a, n)),
            Mat(Ring.Z2, gf2.unpack(b, n)),
            Mat(Ring.Z2, gf2.unpack(c, n)),
        )
        for a, b, c in packed
    )
    return Scheme(Ring.Z2, n, summands)


def _apply_packed(u, v, w, perm, odd, packed, n):
    ui = gf2.inv(u, n)
    vi = gf2.inv(v, n)
    wi = gf2.inv(w, n)
    out = []
    for triple in packed:
        x = triple[perm[0] - 1]
        y = triple[perm[1] - 1]
        z = triple[perm[2] - 1]
        if odd:
            x = gf2.transpose_bits(x, n)
            y = gf2.transpose_bits(y, n)
            z = gf2.transpose_bits(z, n)
        out.append(
            (
                gf2.mat_mul(gf2.mat_mul(u, x, n), vi, n),
                gf2.mat_mul(gf2.mat_mul(v, y, n), wi, n),
                gf2.mat_mul(gf2.mat_mul(w, z, n), ui, n),
            )
        )
    return out


# -- equivalence ----------------------------------------------------------------


def _intertwiner_basis(t1, t2, n: int) -> list[int]:
    """Solutions (U,V,W) of U A = A' V, V B = B' W, W C = C' U over Z2.

    Unknown layout: U entry (i,k) is bit i*n+k, V starts at bit n^2, W at
    2*n^2.  Returns a basis of the nullspace.
    """
    a, b, c = t1
    a2, b2, c2 = t2
    nn = n * n
    rows = []

    def bit(mat, i, j):
        return (mat >> (i * n + j)) & 1

    for lhs, rhs, off_l, off_r in (
        (a, a2, 0, nn),
        (b, b2, nn, 2 * nn),
        (c, c2, 2 * nn, 0),
    ):
        for i in range(n):
            for j in range(n):
                row = 0
                for k in range(n):
                    if bit(lhs, k, j):
                        row |= 1 << (off_l + i * n + k)
                    if bit(rhs, i, k):
                        row ^= 1 << (off_r + k * n + j)
                rows.append(row)
    return gf2.nullspace(rows, 3 * nn)


def _find_invertible(basis: list[int], n: int) -> int | None:
    """Gray-code scan of a subspace for a triple of invertible blocks."""
    dim = len(basis)
    if dim == 0:
        return None
    if dim > SUBSPACE_ENUM_LIMIT:
        raise RuntimeError(
            f"invertibility search over a {dim}-dimensional subspace "
            f"(limit {SUBSPACE_ENUM_LIMIT}) - not expected after intersections"
        )
    det = _det_table(n)
    nn = n * n
    mask = (1 << nn) - 1
    state = 0
    for counter in range(1, 1 << dim):
        state ^= basis[(counter & -counter).bit_length() - 1]
        if det[state & mask] and det[(state >> nn) & mask] and det[(state >> 2 * nn) & mask]:
            return state
    return None


def _match_summands(remaining, packed1, packed2, used, ranks1, ranks2, q_basis, n):
    if not remaining:
        return _find_invertible(q_basis, n)
    first = remaining[0]
    rest = remaining[1:]
    for cand in range(len(packed2)):
        if used & (1 << cand) or ranks1[first] != ranks2[cand]:
            continue
        p_basis = _intertwiner_basis(packed1[first], packed2[cand], n)
        r_basis = gf2.intersect(p_basis, q_basis, 3 * n * n)
        if not r_basis or _find_invertible(r_basis, n) is None:
            continue
        found = _match_summands(
            rest, packed1, packed2, used | (1 << cand), ranks1, ranks2, r_basis, n
        )
        if found is not None:
            return found
    return None


def equivalent(s1: Scheme, s2: Scheme) -> GroupElement | None:
    """A witness g with apply_group(g, s1) = s2 up to summand order, or None.

    Exhaustive over the six factor permutations and all summand matchings,
    so a None answer is a proof of inequivalence over Z2.
    """
    if s1.ring is not Ring.Z2 or s2.ring is not Ring.Z2:
        raise ValueError("equivalence decision works on Z2 schemes")
    if s1.n != s2.n or s1.m != s2.m:
        raise ValueError("schemes must share dimension and summand count")
    if invariant_key(s1) != invariant_key(s2):
        return None
    n = s1.n
    nn = n * n
    rank_of = _rank_table(n)
    packed2 = _pack_scheme(s2)
    ranks2 = [tuple(rank_of[x] for x in t) for t in packed2]
    base1 = _pack_scheme(s1)
    full_basis = [1 << i for i in range(3 * nn)]
    for name in _PERM_NAMES:
        perm = PERMUTATIONS[name]
        odd = _ODD[name]
        packed1 = []
        for triple in base1:
            x, y, z = (triple[perm[0] - 1], triple[perm[1] - 1], triple[perm[2] - 1])
            if odd:
                x = gf2.transpose_bits(x, n)
                y = gf2.transpose_bits(y, n)
                z = gf2.transpose_bits(z, n)
            packed1.append((x, y, z))
        ranks1 = [tuple(rank_of[x] for x in t) for t in packed1]
        if sorted(ranks1) != sorted(ranks2):
            continue
        state = _match_summands(
            list(range(len(packed1))), packed1, packed2, 0, ranks1, ranks2, full_basis, n
        )
        if state is not None:
            mask = (1 << nn) - 1
            u = Mat(Ring.Z2, gf2.unpack(state & mask, n))
            v = Mat(Ring.Z2, gf2.unpack((state >> nn) & mask, n))
            w = Mat(Ring.Z2, gf2.unpack((state >> 2 * nn) & mask, n))
            return GroupElement(u, v, w, name)
    return None


# -- weight simplification -------------------------------------------------------


def _packed_weight(packed) -> int:
    return sum(a.bit_count() * b.bit_count() * c.bit_count() for a, b, c in packed)


def simplify_weight(s: Scheme, iterations: int, seed: int) -> Scheme:
    """Random hill-climb: keep group images that strictly reduce the weight."""
    if s.ring is Ring.Z2:
        return _simplify_weight_z2(s, iterations, seed)
    if s.ring is not Ring.RAT:
        raise ValueError("weight simplification works over Z2 or Q")
    from .core import weight as scheme_weight

    rng = SplitMix64(seed)
    best = s
    best_weight = scheme_weight(s)
    for _ in range(iterations):
        g = random_group_element(s.n, rng, ring=Ring.RAT)
        candidate = apply_group(g, best)
        w = scheme_weight(candidate)
        if w < best_weight:
            best, best_weight = candidate, w
    return best


def _simplify_weight_z2(s: Scheme, iterations: int, seed: int) -> Scheme:
    n = s.n
    det = _det_table(n)
    rng = SplitMix64(seed)
    packed = _pack_scheme(s)
    best_weight = _packed_weight(packed)
    for _ in range(iterations):
        mats = []
        for _ in range(3):
            while True:
                bits = rng.getbits(n * n)
                if det[bits]:
                    break
            mats.append(bits)
        name = _PERM_NAMES[rng.randbelow(6)]
        candidate = _apply_packed(
            mats[0], mats[1], mats[2], PERMUTATIONS[name], _ODD[name], packed, n
        )
        w = _packed_weight(candidate)
        if w < best_weight:
            packed, best_weight = candidate, w
    return _unpack_scheme(packed, n)
