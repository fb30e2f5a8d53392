"""Parameterized schemes: families that are correct as polynomial identities.

A ParamScheme carries n x n factor matrices whose entries are integer
polynomials in formal parameters x1..xk.  ``verify_family_exact`` expands
every Brent residual symbolically, so a passing family is correct for all
parameter values over any commutative ring.  ``introduce_parameters``
frees one factor of one summand and one factor of every other summand,
solves the resulting linear system exactly, and turns the nullspace into
fresh parameters.  ``merge_reduction`` removes a summand when a shared
factor plus linear dependence allow folding it into the others.

Family files use the mmfamily-v1 JSON layout with entries written in the
polynomial grammar (integers, x<k>, macros, + - * ^ and parentheses);
macros are expanded at parse time and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import exactla, gf2
from .core import (
    BrentIndex,
    Mat,
    Ring,
    Scheme,
    Summand,
    brent_indices,
    verify,
)
from .io import FormatError
from .poly import Poly, PolyParseError, parse_poly

__all__ = [
    "ParamScheme",
    "FamilyVerifyReport",
    "RoundRejected",
    "family_from_scheme",
    "substitute_family",
    "verify_family_exact",
    "introduce_parameters",
    "introduce_parameters_sweep",
    "merge_reduction",
    "load_family",
    "dump_family",
    "read_family",
    "write_family",
    "SWEEP_ORDERS",
]

FAMILY_FORMAT = "mmfamily-v1"
FACTORS = ("alpha", "beta", "gamma")
SWEEP_ORDERS = ("forward", "backward", "transposed-loops")

# all ordered pairs of distinct factor tags, in the order sweeps try them
_FACTOR_PAIRS = tuple(
    (u, v) for u in FACTORS for v in FACTORS if u != v
)

PolyMat = tuple[tuple[Poly, ...], ...]


class RoundRejected(RuntimeError):
    """A parameter-introduction round that cannot keep entries polynomial."""


@dataclass(frozen=True)
class ParamScheme:
    n: int
    params: int
    summands: tuple[tuple[PolyMat, PolyMat, PolyMat], ...]

    def __post_init__(self):
        for triple in self.summands:
            for mat in triple:
                for row in mat:
                    for entry in row:
                        if entry.nvars != self.params:
                            raise ValueError("entry variable count mismatch")
                        if not entry.has_integer_coefficients():
                            raise ValueError("family entries need integer coefficients")

    @property
    def m(self) -> int:
        return len(self.summands)


@dataclass(frozen=True)
class FamilyVerifyReport:
    correct: bool
    violation: BrentIndex | None


def family_from_scheme(s: Scheme) -> ParamScheme:
    """A zero-parameter family; entries must be integral."""
    if s.ring is Ring.Z2:
        raise ValueError("families live over Z, not Z2")

    def entry(v) -> Poly:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError(
                    "family entries need integer coefficients; clear denominators first"
                )
            v = int(v)
        return Poly.const(0, v)

    summands = tuple(
        tuple(
            tuple(tuple(entry(v) for v in row) for row in mat.entries)
            for mat in sm.factors()
        )
        for sm in s.summands
    )
    return ParamScheme(s.n, 0, summands)


def substitute_family(f: ParamScheme, point) -> Scheme:
    """Evaluate every entry at an integer point; yields a scheme over Z."""
    point = list(point)
    if len(point) != f.params:
        raise ValueError(f"expected {f.params} parameter values, got {len(point)}")
    if any(not isinstance(v, int) for v in point):
        raise ValueError("substitution points must be integers")
    summands = []
    for a, b, c in f.summands:
        mats = [
            Mat.from_rows(Ring.INT, [[p.evaluate(point) for p in row] for row in mat])
            for mat in (a, b, c)
        ]
        summands.append(Summand(*mats))
    return Scheme(Ring.INT, f.n, tuple(summands))


def verify_family_exact(f: ParamScheme) -> FamilyVerifyReport:
    """Expand every Brent residual as a polynomial and require it to vanish."""
    zero = Poly.zero(f.params)
    for idx in brent_indices(f.n):
        acc = zero
        for a, b, c in f.summands:
            pa = a[idx.i1 - 1][idx.i2 - 1]
            if pa.is_zero():
                continue
            pb = b[idx.j1 - 1][idx.j2 - 1]
            if pb.is_zero():
                continue
            pc = c[idx.k1 - 1][idx.k2 - 1]
            if pc.is_zero():
                continue
            acc = acc + pa * pb * pc
        if idx.rhs:
            acc = acc - Poly.const(f.params, 1)
        if not acc.is_zero():
            return FamilyVerifyReport(False, idx)
    return FamilyVerifyReport(True, None)


# -- file format ---------------------------------------------------------------


def load_family(text_or_obj) -> ParamScheme:
    import json

    if isinstance(text_or_obj, str):
        try:
            obj = json.loads(text_or_obj)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
    else:
        obj = text_or_obj
    if not isinstance(obj, dict) or obj.get("format") != FAMILY_FORMAT:
        raise FormatError(f"not a {FAMILY_FORMAT} file")
    n = obj.get("n")
    k = obj.get("params")
    raw = obj.get("summands")
    if not isinstance(n, int) or not isinstance(k, int) or k < 0:
        raise FormatError("missing or invalid n/params")
    if not isinstance(raw, list) or not raw:
        raise FormatError("summands must be a nonempty array")
    if isinstance(obj.get("m"), int) and obj["m"] != len(raw):
        raise FormatError("declared m disagrees with the summand count")
    macros: dict[str, Poly] = {}
    for name, text in (obj.get("macros") or {}).items():
        try:
            macros[name] = parse_poly(text, k, macros)
        except PolyParseError as exc:
            raise FormatError(f"macro {name}: {exc}") from exc

    def parse_mat(rows) -> PolyMat:
        if not isinstance(rows, list) or len(rows) != n:
            raise FormatError(f"factor matrix is not {n}x{n}")
        out = []
        for row in rows:
            if not isinstance(row, list) or len(row) != n:
                raise FormatError(f"factor matrix is not {n}x{n}")
            try:
                out.append(tuple(parse_poly(v, k, macros) for v in row))
            except PolyParseError as exc:
                raise FormatError(str(exc)) from exc
        return tuple(out)

    summands = []
    for item in raw:
        if not isinstance(item, dict) or set(item) != {"a", "b", "c"}:
            raise FormatError("each summand needs exactly the fields a, b, c")
        summands.append(tuple(parse_mat(item[key]) for key in ("a", "b", "c")))
    try:
        return ParamScheme(n, k, tuple(summands))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dump_family(f: ParamScheme) -> str:
    import json

    obj = {
        "format": FAMILY_FORMAT,
        "n": f.n,
        "m": f.m,
        "params": f.params,
        "summands": [
            {
                key: [[p.to_string() for p in row] for row in mat]
                for key, mat in zip(("a", "b", "c"), triple)
            }
            for triple in f.summands
        ],
    }
    return json.dumps(obj, indent=1, sort_keys=True)


def read_family(path) -> ParamScheme:
    with open(path, encoding="utf-8") as fh:
        return load_family(fh.read())


def write_family(path, f: ParamScheme) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_family(f))
        fh.write("\n")


# -- parameter introduction ------------------------------------------------------

# growth guards for the fraction-free elimination; a round that blows past
# these is rejected rather than left to run away
_MAX_TERMS = 4000
_MAX_DEGREE = 48


def _row_normalize(row: dict[int, Poly]) -> dict[int, Poly]:
    g = 0
    for p in row.values():
        g = gcd(g, p.content())
        if g == 1:
            return row
    if g <= 1:
        return row
    divisor = Poly.const(next(iter(row.values())).nvars, g)
    return {c: p.divide_exact(divisor) for c, p in row.items()}


def _check_growth(poly: Poly) -> Poly:
    if len(poly.terms) > _MAX_TERMS or poly.total_degree() > _MAX_DEGREE:
        raise RoundRejected("coefficient growth during elimination")
    return poly


def _poly_echelon(rows: list[dict[int, Poly]], columns) -> list[tuple[int, dict[int, Poly]]]:
    """Fraction-free sparse echelon form; returns (pivot column, row) pairs."""
    pivots: list[tuple[int, dict[int, Poly]]] = []
    active = [r for r in rows if r]
    for col in columns:
        holders = [r for r in active if col in r]
        if not holders:
            continue
        holders.sort(
            key=lambda r: (
                0 if r[col].is_constant() else 1,
                len(r),
                r[col].total_degree(),
                len(r[col].terms),
            )
        )
        pivot = holders[0]
        active.remove(pivot)
        p = pivot[col]
        updated = []
        for row in active:
            e = row.pop(col, None)
            if e is None:
                updated.append(row)
                continue
            new: dict[int, Poly] = {}
            for c in set(row) | set(pivot):
                if c == col:
                    continue
                left = row.get(c)
                right = pivot.get(c)
                if left is not None and right is not None:
                    val = left * p - e * right
                elif left is not None:
                    val = left * p
                else:
                    val = (e * right).scale(-1)
                if not val.is_zero():
                    new[c] = _check_growth(val)
            if new:
                updated.append(_row_normalize(new))
        active = updated
        pivots.append((col, pivot))
    return pivots


def _poly_nullspace(
    rows: list[dict[int, Poly]], ncols: int, nvars: int, column_order: str
) -> list[dict[int, Poly]]:
    """Polynomial basis of the right kernel, one vector per free column."""
    if column_order == "forward":
        columns = range(ncols)
    elif column_order == "reversed":
        columns = range(ncols - 1, -1, -1)
    else:
        raise ValueError(f"unknown column order {column_order!r}")
    pivots = _poly_echelon([dict(r) for r in rows], columns)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec: dict[int, Poly] = {free: Poly.const(nvars, 1)}
        for col, row in reversed(pivots):
            s = Poly.zero(nvars)
            for c, val in row.items():
                if c != col and c in vec:
                    s = s + val * vec[c]
            if s.is_zero():
                continue
            p = row[col]
            quotient = s.divide_exact(p)
            if quotient is not None:
                vec[col] = -quotient
            else:
                # keep the vector polynomial: scale it by the pivot instead
                vec = {c: _check_growth(v * p) for c, v in vec.items()}
                vec[col] = -s
        g = 0
        for p in vec.values():
            g = gcd(g, p.content())
        if g > 1:
            divisor = Poly.const(nvars, g)
            vec = {c: p.divide_exact(divisor) for c, p in vec.items()}
        basis.append(vec)
    return basis


def _as_family(s) -> ParamScheme:
    if isinstance(s, ParamScheme):
        return s
    if isinstance(s, Scheme):
        return family_from_scheme(s)
    raise TypeError("expected a Scheme or ParamScheme")


def introduce_parameters(
    s, index: int, u: str, v: str, column_order: str = "forward"
) -> ParamScheme:
    """Free the u-factor of one summand and the v-factors of all others.

    Comparing coefficients against the multiplication tensor gives a
    linear system for the freed entries; its nullspace, parameterized by
    fresh variables, widens the family.  The input must already verify
    (identically, at its current parameter count).
    """
    f = _as_family(s)
    if u not in FACTORS or v not in FACTORS or u == v:
        raise ValueError("u and v must be distinct factor tags alpha/beta/gamma")
    if not 0 <= index < f.m:
        raise ValueError(f"summand index {index} out of range")
    n, k = f.n, f.params
    u_fac, v_fac = FACTORS.index(u), FACTORS.index(v)

    columns: list[tuple[int, int, int, int]] = []
    for r in range(n):
        for c in range(n):
            columns.append((u_fac, index, r, c))
    for mi in range(f.m):
        if mi == index:
            continue
        for r in range(n):
            for c in range(n):
                columns.append((v_fac, mi, r, c))
    col_of = {pos: i for i, pos in enumerate(columns)}

    rows = []
    for idx in brent_indices(n):
        positions = (
            (idx.i1 - 1, idx.i2 - 1),
            (idx.j1 - 1, idx.j2 - 1),
            (idx.k1 - 1, idx.k2 - 1),
        )
        row: dict[int, Poly] = {}
        empty = True
        for mi, triple in enumerate(f.summands):
            freed = u_fac if mi == index else v_fac
            known = Poly.const(k, 1)
            zero = False
            for fac in range(3):
                if fac == freed:
                    continue
                entry = triple[fac][positions[fac][0]][positions[fac][1]]
                if entry.is_zero():
                    zero = True
                    break
                known = known * entry
            if zero:
                continue
            empty = False
            r, c = positions[freed]
            row[col_of[(freed, mi, r, c)]] = known
        if empty:
            # all triple products vanish here, so the target must be 0 too
            assert idx.rhs == 0, "a freed system lost a nonzero target entry"
            continue
        rows.append(row)

    basis = _poly_nullspace(rows, len(columns), k, column_order)
    d = len(basis)
    new_k = k + d

    additions: dict[tuple[int, int, int, int], Poly] = {}
    for j, vec in enumerate(basis):
        fresh = Poly.variable(new_k, k + j)
        for col, p in vec.items():
            pos = columns[col]
            add = fresh * p.extend(new_k)
            additions[pos] = additions.get(pos, Poly.zero(new_k)) + add

    new_summands = []
    for mi, triple in enumerate(f.summands):
        mats = []
        for fac in range(3):
            rows_out = []
            for r in range(n):
                row_out = []
                for c in range(n):
                    p = triple[fac][r][c].extend(new_k)
                    extra = additions.get((fac, mi, r, c))
                    if extra is not None:
                        p = p + extra
                    row_out.append(p)
                rows_out.append(tuple(row_out))
            mats.append(tuple(rows_out))
        new_summands.append(tuple(mats))
    return ParamScheme(n, new_k, tuple(new_summands))


def introduce_parameters_sweep(s, order: str = "forward") -> ParamScheme:
    """Run introduce_parameters over every summand and factor pair.

    Rejected rounds (non-polynomial pivoting) are skipped; each kept round
    can only add parameters, so the count is monotone.
    """
    if order not in SWEEP_ORDERS:
        raise ValueError(f"unknown sweep order {order!r}")
    f = _as_family(s)
    if order == "transposed-loops":
        rounds = [(i, u, v) for (u, v) in _FACTOR_PAIRS for i in range(f.m)]
    else:
        indices = range(f.m) if order == "forward" else range(f.m - 1, -1, -1)
        rounds = [(i, u, v) for i in indices for (u, v) in _FACTOR_PAIRS]
    for i, u, v in rounds:
        try:
            f = introduce_parameters(f, i, u, v)
        except RoundRejected:
            continue
    return f


# -- merge reduction ---------------------------------------------------------------


def _mat_vector(mat: Mat) -> tuple:
    return tuple(v for row in mat.entries for v in row)


def _dependence(ring: Ring, others: list[Mat], target: Mat):
    """Coefficients expressing target as a combination of others, or None."""
    if not others:
        return [] if target.is_zero() else None
    nn = target.n * target.n
    if ring is Ring.Z2:
        rows = []
        rhs = []
        for pos in range(nn):
            row = 0
            for j, mat in enumerate(others):
                if _mat_vector(mat)[pos]:
                    row |= 1 << j
            rows.append(row)
            rhs.append(int(_mat_vector(target)[pos]))
        sol = gf2.solve(rows, len(others), rhs)
        if sol is None:
            return None
        return [(sol >> j) & 1 for j in range(len(others))]
    matrix = [
        [Fraction(_mat_vector(mat)[pos]) for mat in others] for pos in range(nn)
    ]
    rhs = [Fraction(_mat_vector(target)[pos]) for pos in range(nn)]
    sol = exactla.solve_q(matrix, rhs)
    if sol is None:
        return None
    if ring is Ring.INT:
        if any(c.denominator != 1 for c in sol):
            return None
        return [int(c) for c in sol]
    return list(sol)


def merge_reduction(s: Scheme) -> Scheme | None:
    """Drop one summand by folding it into others, if the scheme allows it.

    Looks for summands sharing the same matrix in one factor position
    whose matrices in a second position are linearly dependent; the
    dependent summand folds into the third position.  Returns the reduced
    scheme (one summand fewer) or None.
    """
    ring = s.ring
    for shared in range(3):
        groups: dict[tuple, list[int]] = {}
        for i, sm in enumerate(s.summands):
            groups.setdefault(_mat_vector(sm.factors()[shared]), []).append(i)
        for members in groups.values():
            if len(members) < 2:
                continue
            for dep in range(3):
                if dep == shared:
                    continue
                fold = 3 - shared - dep
                for t in members:
                    others = [i for i in members if i != t]
                    coeffs = _dependence(
                        ring,
                        [s.summands[i].factors()[dep] for i in others],
                        s.summands[t].factors()[dep],
                    )
                    if coeffs is None:
                        continue
                    fold_t = s.summands[t].factors()[fold]
                    new_summands = []
                    for i, sm in enumerate(s.summands):
                        if i == t:
                            continue
                        if i in others:
                            coeff = coeffs[others.index(i)]
                            if coeff:
                                factors = list(sm.factors())
                                factors[fold] = factors[fold].add(
                                    fold_t.scale(coeff)
                                )
                                sm = Summand(*factors)
                        new_summands.append(sm)
                    return s.replace_summands(new_summands)
    return None
