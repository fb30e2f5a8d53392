"""Streamlined CNF encodings of the Brent equations over Z2.

Variable layout (all 1-based DIMACS indices):

    alpha(i, i1, i2), beta(i, j1, j2), gamma(i, k1, k2)   3*n^2*m base vars
    s(i, i1, i2, j1, j2)        <->  alpha & beta          m*n^4
    t(i, i1, i2, j1, j2, k1, k2) <->  s & gamma            m*n^6
    aux(eq, counter)            parity / counting helpers, per equation

Each Brent equation constrains the m t-variables of one index tuple to an
even (rhs 0) or odd (rhs 1) truth count.  Parity mode encodes this
faithfully with xor chunks of size four; zero-or-two mode replaces the
even constraint of rhs-0 equations by the stricter "at most two and not
exactly one".  No SAT solver is embedded here: formulas go out as DIMACS,
models come back as literal lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Mat, Ring, Scheme, Summand, brent_indices
from .rng import SplitMix64

__all__ = [
    "VarMap",
    "CnfFormula",
    "StreamlinePlan",
    "encode_brent",
    "apply_streamline",
    "random_diag_distribution",
    "decode_model",
    "check_assignment",
    "extend_assignment",
    "write_dimacs",
    "dimacs_text",
    "parse_model_text",
    "brent_equation_count",
]

PARITY = "parity"
ZERO_OR_TWO = "zero-or-two"


def brent_equation_count(n: int) -> int:
    return n**6


class VarMap:
    """Bijection between DIMACS variables and their semantic roles."""

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        nn = n * n
        self.base_count = 3 * nn * m
        self._s_offset = 3 * nn * m
        self._t_offset = self._s_offset + m * nn * nn
        self._aux_offset = self._t_offset + m * nn * nn * nn
        self._aux_roles: list[tuple[int, int]] = []

    # -- base variables ------------------------------------------------------

    def alpha(self, i: int, i1: int, i2: int) -> int:
        n = self.n
        return (i - 1) * n * n + (i1 - 1) * n + (i2 - 1) + 1

    def beta(self, i: int, j1: int, j2: int) -> int:
        return self.m * self.n * self.n + self.alpha(i, j1, j2)

    def gamma(self, i: int, k1: int, k2: int) -> int:
        return 2 * self.m * self.n * self.n + self.alpha(i, k1, k2)

    def s(self, i: int, i1: int, i2: int, j1: int, j2: int) -> int:
        n = self.n
        idx = (((i - 1) * n + (i1 - 1)) * n + (i2 - 1)) * n * n + (j1 - 1) * n + (j2 - 1)
        return self._s_offset + idx + 1

    def t(self, i: int, i1: int, i2: int, j1: int, j2: int, k1: int, k2: int) -> int:
        n = self.n
        idx = (i - 1)
        for part in (i1, i2, j1, j2, k1, k2):
            idx = idx * n + (part - 1)
        return self._t_offset + idx + 1

    def new_aux(self, eq_id: int, counter: int) -> int:
        self._aux_roles.append((eq_id, counter))
        return self._aux_offset + len(self._aux_roles)

    @property
    def num_vars(self) -> int:
        return self._aux_offset + len(self._aux_roles)

    # -- reverse lookup ------------------------------------------------------

    def role_of(self, var: int) -> tuple:
        n, m = self.n, self.m
        nn = n * n
        if not 1 <= var <= self.num_vars:
            raise ValueError(f"variable {var} out of range")
        if var <= 3 * nn * m:
            kind, rest = divmod(var - 1, nn * m)
            i, cell = divmod(rest, nn)
            r, c = divmod(cell, n)
            return (("alpha", "beta", "gamma")[kind], i + 1, r + 1, c + 1)
        if var <= self._t_offset:
            rest = var - self._s_offset - 1
            parts = []
            for _ in range(4):
                rest, p = divmod(rest, n)
                parts.append(p + 1)
            return ("s", rest + 1, *reversed(parts))
        if var <= self._aux_offset:
            rest = var - self._t_offset - 1
            parts = []
            for _ in range(6):
                rest, p = divmod(rest, n)
                parts.append(p + 1)
            return ("t", rest + 1, *reversed(parts))
        eq_id, counter = self._aux_roles[var - self._aux_offset - 1]
        return ("aux", eq_id, counter)

    def to_obj(self) -> list[dict]:
        out = []
        for var in range(1, self.num_vars + 1):
            role = self.role_of(var)
            out.append({"var": var, "role": role[0], "indices": list(role[1:])})
        return out

    @classmethod
    def from_obj(cls, obj) -> "VarMap":
        alphas = [e for e in obj if e["role"] == "alpha"]
        if not alphas:
            raise ValueError("varmap has no alpha variables")
        m = max(e["indices"][0] for e in alphas)
        n = max(e["indices"][1] for e in alphas)
        vm = cls(n, m)
        for e in obj:
            if e["role"] == "aux":
                vm._aux_roles.append(tuple(e["indices"]))
        expected = {"alpha", "beta", "gamma", "s", "t", "aux"}
        if any(e["role"] not in expected for e in obj):
            raise ValueError("varmap contains unknown roles")
        if len(obj) != vm.num_vars:
            raise ValueError("varmap variable count is inconsistent")
        return vm


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    # (var, kind, operand literals); kind "xor" defines var as the parity of
    # the operands, "or2and" as  l1 | l2 | (l3 & l4).  Used to extend scheme
    # assignments to the helper variables; not part of the DIMACS output.
    aux_defs: tuple[tuple[int, str, tuple[int, ...]], ...] = field(default=())

    def __post_init__(self):
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            seen = set()
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")
                if -lit in seen:
                    raise ValueError("clause contains a literal and its negation")
                seen.add(lit)


@dataclass(frozen=True)
class StreamlinePlan:
    """What extra constraints to layer on top of the faithful encoding."""

    mode: str = PARITY
    fix_scheme: Scheme | None = None
    fix_fraction: float = 0.0
    offdiag_zero_fraction: float | None = None
    diag_distribution: tuple[int, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.mode not in (PARITY, ZERO_OR_TWO):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.fix_fraction <= 1.0:
            raise ValueError("fix_fraction must be in [0, 1]")
        if self.offdiag_zero_fraction is not None and not (
            0.0 <= self.offdiag_zero_fraction <= 1.0
        ):
            raise ValueError("offdiag_zero_fraction must be in [0, 1]")


# -- parity encoding ---------------------------------------------------------


def _even_direct(literals) -> list[tuple[int, ...]]:
    """2^(k-1) clauses excluding every odd-parity assignment of k literals."""
    k = len(literals)
    clauses = []
    for mask in range(1 << k):
        if bin(mask).count("1") % 2 == 1:
            clauses.append(
                tuple(
                    -lit if mask & (1 << pos) else lit
                    for pos, lit in enumerate(literals)
                )
            )
    return clauses


def _even_chunked(literals, eq_id, varmap, aux_defs) -> list[tuple[int, ...]]:
    """Break a long parity constraint into chunks of four with fresh helpers."""
    queue = list(literals)
    clauses = []
    counter = 0
    while len(queue) > 4:
        l1, l2, l3 = queue[0], queue[1], queue[2]
        queue = queue[3:]
        y = varmap.new_aux(eq_id, counter)
        counter += 1
        aux_defs.append((y, "xor", (l1, l2, l3)))
        clauses.extend(_even_direct([l1, l2, l3, y]))
        queue.append(y)
    clauses.extend(_even_direct(queue))
    return clauses


# -- zero-or-two encoding ----------------------------------------------------


def _not_exactly_one(literals) -> list[tuple[int, ...]]:
    out = []
    for i, lit in enumerate(literals):
        out.append(tuple([-lit] + [l for j, l in enumerate(literals) if j != i]))
    return out


def _at_most_two(literals, eq_id, varmap, aux_defs, counter) -> list[tuple[int, ...]]:
    out = []
    queue = list(literals)
    while len(queue) > 4:
        x1, x2, x3, x4 = queue[:4]
        for trip in ((x1, x2, x3), (x1, x2, x4), (x1, x3, x4), (x2, x3, x4)):
            out.append(tuple(-l for l in trip))
        y = varmap.new_aux(eq_id, counter)
        z = varmap.new_aux(eq_id, counter + 1)
        counter += 2
        aux_defs.append((y, "or2and", (x1, x2, x3, x4)))
        aux_defs.append((z, "or2and", (x3, x4, x1, x2)))
        out.extend(
            [
                (-x1, y),
                (-x2, y),
                (-x1, -x2, z),
                (-x3, z),
                (-x4, z),
                (-x3, -x4, y),
            ]
        )
        queue = [y, z] + queue[4:]
    k = len(queue)
    for a in range(k):
        for b in range(a + 1, k):
            for c in range(b + 1, k):
                out.append((-queue[a], -queue[b], -queue[c]))
    return out


def encode_brent(n: int, m: int, plan: StreamlinePlan) -> tuple[CnfFormula, VarMap]:
    """Build the CNF for n x n multiplication with m summands."""
    if n not in (2, 3):
        raise ValueError(f"unsupported dimension n={n}")
    if m < 1:
        raise ValueError("need at least one summand")
    varmap = VarMap(n, m)
    clauses: list[tuple[int, ...]] = []
    aux_defs: list[tuple[int, str, tuple[int, ...]]] = []
    rng1 = range(1, n + 1)

    for i in range(1, m + 1):
        for i1 in rng1:
            for i2 in rng1:
                a = varmap.alpha(i, i1, i2)
                for j1 in rng1:
                    for j2 in rng1:
                        b = varmap.beta(i, j1, j2)
                        sv = varmap.s(i, i1, i2, j1, j2)
                        clauses += [(-sv, a), (-sv, b), (-a, -b, sv)]

    for i in range(1, m + 1):
        for i1 in rng1:
            for i2 in rng1:
                for j1 in rng1:
                    for j2 in rng1:
                        sv = varmap.s(i, i1, i2, j1, j2)
                        for k1 in rng1:
                            for k2 in rng1:
                                g = varmap.gamma(i, k1, k2)
                                tv = varmap.t(i, i1, i2, j1, j2, k1, k2)
                                clauses += [(-tv, sv), (-tv, g), (-sv, -g, tv)]

    for eq_id, idx in enumerate(brent_indices(n)):
        tvars = [varmap.t(i, *idx) for i in range(1, m + 1)]
        if idx.rhs == 1:
            # odd count == even count with the first literal flipped
            lits = [-tvars[0]] + tvars[1:]
            clauses += _even_chunked(lits, eq_id, varmap, aux_defs)
        elif plan.mode == PARITY:
            clauses += _even_chunked(tvars, eq_id, varmap, aux_defs)
        else:
            clauses += _not_exactly_one(tvars)
            clauses += _at_most_two(tvars, eq_id, varmap, aux_defs, counter=0)

    formula = CnfFormula(varmap.num_vars, tuple(clauses), tuple(aux_defs))
    return formula, varmap


# -- streamlining ------------------------------------------------------------


def random_diag_distribution(n: int, m: int, seed: int) -> tuple[int, ...]:
    """Assign the n^3 diagonal index tuples to summands, 19 singles + 4 pairs."""
    if n != 3 or m != 23:
        raise ValueError("the 19/4 diagonal distribution needs n=3, m=23")
    rng = SplitMix64(seed)
    doubles = set(rng.sample(range(1, m + 1), 4))
    slots = []
    for i in range(1, m + 1):
        slots.append(i)
        if i in doubles:
            slots.append(i)
    rng.shuffle(slots)
    return tuple(slots)


def _validate_diag_distribution(dist, n: int, m: int) -> None:
    if n != 3 or m != 23:
        raise ValueError("diagonal streamlining needs n=3, m=23")
    if len(dist) != n**3:
        raise ValueError(f"distribution must cover all {n**3} diagonal terms")
    counts: dict[int, int] = {}
    for i in dist:
        if not 1 <= i <= m:
            raise ValueError(f"summand index {i} out of range")
        counts[i] = counts.get(i, 0) + 1
    histogram = sorted(counts.values())
    if histogram != [1] * 19 + [2] * 4:
        raise ValueError("distribution must give 19 summands one term and 4 two")


def apply_streamline(plan: StreamlinePlan, varmap: VarMap) -> list[int]:
    """Unit literals implementing the plan's extra constraints."""
    n, m = varmap.n, varmap.m
    rng = SplitMix64(plan.seed)
    units: list[int] = []

    if plan.fix_scheme is not None and plan.fix_fraction > 0.0:
        s = plan.fix_scheme
        if s.ring is not Ring.Z2 or s.n != n or s.m != m:
            raise ValueError("fix scheme must be a Z2 scheme of matching shape")
        base = list(range(1, varmap.base_count + 1))
        k = int(plan.fix_fraction * len(base) + 0.5)
        chosen = sorted(rng.sample(base, k))
        for var in chosen:
            kind, i, r, c = varmap.role_of(var)
            sm = s.summands[i - 1]
            value = {"alpha": sm.a, "beta": sm.b, "gamma": sm.c}[kind].entries[r - 1][c - 1]
            units.append(var if value else -var)

    if plan.offdiag_zero_fraction is not None:
        pool = []
        for i in range(1, m + 1):
            for idx in brent_indices(n):
                if idx.i2 != idx.j1 and idx.j2 != idx.k1 and idx.k2 != idx.i1:
                    pool.append(varmap.t(i, *idx))
        k = int(plan.offdiag_zero_fraction * len(pool) + 0.5)
        units += [-v for v in sorted(rng.sample(pool, k))]

    if plan.diag_distribution is not None:
        _validate_diag_distribution(plan.diag_distribution, n, m)
        diag = [idx for idx in brent_indices(n) if idx.rhs == 1]
        assigned = dict(zip(diag, plan.diag_distribution))
        for idx in diag:
            for i in range(1, m + 1):
                var = varmap.t(i, *idx)
                units.append(var if assigned[idx] == i else -var)

    return units


# -- models ------------------------------------------------------------------


def _normalize_assignment(num_vars: int, assignment) -> list[bool]:
    """To a 1-based list of bools; rejects incomplete assignments."""
    values: list = [None] * (num_vars + 1)
    if isinstance(assignment, dict):
        items = assignment.items()
    else:
        seq = list(assignment)
        if len(seq) == num_vars + 1:
            seq = seq[1:]  # 1-based list with a dummy slot 0
        if len(seq) != num_vars:
            raise ValueError(
                f"assignment covers {len(seq)} of {num_vars} variables"
            )
        items = enumerate(seq, start=1)
    for var, val in items:
        if not 1 <= var <= num_vars:
            raise ValueError(f"variable {var} out of range")
        values[var] = bool(val)
    missing = [v for v in range(1, num_vars + 1) if values[v] is None]
    if missing:
        raise ValueError(f"assignment misses {len(missing)} variables")
    return values


def check_assignment(formula: CnfFormula, assignment) -> bool:
    """True iff every clause contains at least one true literal."""
    values = _normalize_assignment(formula.num_vars, assignment)
    for clause in formula.clauses:
        for lit in clause:
            if values[lit] if lit > 0 else not values[-lit]:
                break
        else:
            return False
    return True


def decode_model(model, varmap: VarMap) -> Scheme:
    """Read the alpha/beta/gamma variables of a model into a Z2 scheme."""
    values: dict[int, bool] = {}
    if isinstance(model, dict):
        values = {int(v): bool(b) for v, b in model.items()}
    else:
        for lit in model:
            if lit == 0:
                continue
            values[abs(lit)] = lit > 0
    n, m = varmap.n, varmap.m
    missing = [v for v in range(1, varmap.base_count + 1) if v not in values]
    if missing:
        raise ValueError(f"model leaves {len(missing)} base variables unassigned")

    def mat(getter, i):
        return Mat.from_rows(
            Ring.Z2,
            [
                [1 if values[getter(i, r, c)] else 0 for c in range(1, n + 1)]
                for r in range(1, n + 1)
            ],
        )

    summands = tuple(
        Summand(mat(varmap.alpha, i), mat(varmap.beta, i), mat(varmap.gamma, i))
        for i in range(1, m + 1)
    )
    return Scheme(Ring.Z2, n, summands)


def extend_assignment(s: Scheme, formula: CnfFormula, varmap: VarMap) -> list[bool]:
    """Extend a Z2 scheme to all s/t/aux variables of its encoding.

    The result satisfies the s and t definitions by construction; whether
    the full formula is satisfied depends on the scheme (always, for a
    correct scheme in parity mode).
    """
    if s.ring is not Ring.Z2 or s.n != varmap.n or s.m != varmap.m:
        raise ValueError("scheme shape does not match the encoding")
    values = [False] * (formula.num_vars + 1)
    n = s.n
    rng1 = range(1, n + 1)
    for i, sm in enumerate(s.summands, start=1):
        for r in rng1:
            for c in rng1:
                values[varmap.alpha(i, r, c)] = bool(sm.a.entries[r - 1][c - 1])
                values[varmap.beta(i, r, c)] = bool(sm.b.entries[r - 1][c - 1])
                values[varmap.gamma(i, r, c)] = bool(sm.c.entries[r - 1][c - 1])
        for i1 in rng1:
            for i2 in rng1:
                for j1 in rng1:
                    for j2 in rng1:
                        sv = varmap.s(i, i1, i2, j1, j2)
                        values[sv] = (
                            values[varmap.alpha(i, i1, i2)]
                            and values[varmap.beta(i, j1, j2)]
                        )
                        for k1 in rng1:
                            for k2 in rng1:
                                tv = varmap.t(i, i1, i2, j1, j2, k1, k2)
                                values[tv] = values[sv] and values[
                                    varmap.gamma(i, k1, k2)
                                ]

    def lit_value(lit: int) -> bool:
        return values[lit] if lit > 0 else not values[-lit]

    for var, kind, operands in formula.aux_defs:
        if kind == "xor":
            values[var] = (sum(lit_value(l) for l in operands) % 2) == 1
        else:  # or2and
            l1, l2, l3, l4 = operands
            values[var] = (
                lit_value(l1) or lit_value(l2) or (lit_value(l3) and lit_value(l4))
            )
    return values


# -- files -------------------------------------------------------------------


def dimacs_text(formula: CnfFormula, extra_units=()) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses) + len(extra_units)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    for unit in extra_units:
        lines.append(f"{unit} 0")
    return "\n".join(lines) + "\n"


def write_dimacs(path, formula: CnfFormula, extra_units=()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dimacs_text(formula, extra_units))


def parse_model_text(text: str) -> list[int]:
    """Literals from 'v'-prefixed solver output or a bare 0-terminated list."""
    lits: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "cs":
            continue
        if line[0] in "vV":
            line = line[1:]
        for tok in line.split():
            val = int(tok)
            if val == 0:
                return lits
            lits.append(val)
    return lits
