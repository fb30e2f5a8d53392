"""Lifting Z2 schemes to integer schemes with entries in {-1, 0, +1}.

A correct Z2 scheme fixes which entries are nonzero; lifting asks for a
sign for every nonzero entry so that the Brent equations hold over Z.
Scaling freedom pins one entry of A and one of B per summand to +1; the
remaining support positions become +-1 variables of a multilinear system.

The system is attacked by algebraic simplification (exponents mod 2,
cancelling variable factors, rewriting x*y +- 1 to x -+ y), elimination of
two-term linear equations, and then a complete backtracking search over
{-1, +1} with the same simplifications as propagation.  Because the search
is exhaustive, an unsatisfiable answer proves that no +-1 signing exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Mat, Ring, Scheme, Summand, brent_indices, verify

__all__ = [
    "SignSystem",
    "SearchOutcome",
    "LiftOutcome",
    "build_sign_system",
    "simplify_sign_system",
    "eliminate_linear",
    "search_signs",
    "lift",
    "enumerate_solutions",
    "DEFAULT_NODE_BUDGET",
]

DEFAULT_NODE_BUDGET = 10**8

_EMPTY = frozenset()

# positions inside a summand: factor 0 = A, 1 = B, 2 = C
Position = tuple[int, int, int, int]  # (factor, summand, row, col)
Poly = dict  # frozenset[int] -> int, the empty monomial being the constant


@dataclass(frozen=True)
class SignSystem:
    """Multilinear +-1 equations plus the substitutions applied so far.

    ``equations`` are polynomials (monomial -> integer coefficient) that
    must vanish on {-1,+1} assignments; ``substitutions`` records
    eliminated variables as (var, sign, target) meaning var = sign*target,
    target None standing for the constant 1.
    """

    equations: tuple[Poly, ...]
    variables: frozenset[int]
    substitutions: tuple[tuple[int, int, int | None], ...] = ()
    unsat: bool = False
    var_positions: tuple[Position, ...] = ()
    normalized: tuple[Position, ...] = ()

    @classmethod
    def from_equations(cls, equations) -> "SignSystem":
        eqs = []
        seen: set[int] = set()
        for eq in equations:
            poly = {frozenset(mono): int(c) for mono, c in eq.items() if c}
            eqs.append(poly)
            for mono in poly:
                seen.update(mono)
        return cls(tuple(eqs), frozenset(seen))

    def num_active_variables(self) -> int:
        live: set[int] = set()
        for eq in self.equations:
            for mono in eq:
                live.update(mono)
        return len(live)


def build_sign_system(s: Scheme) -> SignSystem:
    """Sign variables and Brent equations for the support of a Z2 scheme."""
    if s.ring is not Ring.Z2:
        raise ValueError("sign systems are built from Z2 schemes")
    if not verify(s).correct:
        raise ValueError("cannot build a sign system from an incorrect scheme")
    n = s.n
    var_of: dict[Position, int] = {}
    positions: list[Position] = []
    normalized: list[Position] = []
    for i, sm in enumerate(s.summands):
        for factor, mat in enumerate((sm.a, sm.b, sm.c)):
            first = factor < 2  # one entry of A and one of B are pinned to +1
            for r in range(n):
                for c in range(n):
                    if not mat.entries[r][c]:
                        continue
                    if first:
                        normalized.append((factor, i, r, c))
                        first = False
                    else:
                        var_of[(factor, i, r, c)] = len(positions)
                        positions.append((factor, i, r, c))

    def term_var(factor: int, i: int, r: int, c: int) -> int | None:
        return var_of.get((factor, i, r, c))

    equations = []
    for idx in brent_indices(n):
        poly: Poly = {}
        terms = 0
        for i, sm in enumerate(s.summands):
            if not (
                sm.a.entries[idx.i1 - 1][idx.i2 - 1]
                and sm.b.entries[idx.j1 - 1][idx.j2 - 1]
                and sm.c.entries[idx.k1 - 1][idx.k2 - 1]
            ):
                continue
            terms += 1
            mono = set()
            for factor, (r, c) in enumerate(
                ((idx.i1 - 1, idx.i2 - 1), (idx.j1 - 1, idx.j2 - 1), (idx.k1 - 1, idx.k2 - 1))
            ):
                var = term_var(factor, i, r, c)
                if var is not None:
                    mono.add(var)
            key = frozenset(mono)
            poly[key] = poly.get(key, 0) + 1
        if terms % 2 != idx.rhs:
            raise AssertionError(
                "support parity disagrees with the right-hand side; "
                "the input cannot verify over Z2"
            )
        if idx.rhs:
            poly[_EMPTY] = poly.get(_EMPTY, 0) - 1
        poly = {m: c for m, c in poly.items() if c}
        if poly:
            equations.append(poly)
    return SignSystem(
        tuple(equations),
        frozenset(range(len(positions))),
        var_positions=tuple(positions),
        normalized=tuple(normalized),
    )


# -- simplification ------------------------------------------------------------


def _simplify_poly(poly: Poly):
    """One equation to fixpoint; returns ("ok", poly), ("drop",) or ("unsat",)."""
    while True:
        if not poly:
            return ("drop",)
        if sum(poly.values()) % 2:
            # every monomial evaluates to +-1, so the value is odd
            return ("unsat",)
        if len(poly) == 1:
            mono, c = next(iter(poly.items()))
            if mono:
                return ("unsat",)  # c * (+-1) never vanishes
            return ("unsat",) if c else ("drop",)
        if _EMPTY not in poly:
            common = frozenset.intersection(*poly.keys())
            if common:
                x = min(common)
                poly = {mono - {x}: c for mono, c in poly.items()}
                continue
        if len(poly) == 2:
            (m1, c1), (m2, c2) = sorted(poly.items(), key=lambda kv: len(kv[0]))
            if abs(c1) != abs(c2):
                return ("unsat",)  # two +-k terms of different size never cancel
            if not m1 and len(m2) == 2:
                # x*y = -c1/c2, i.e. x + (c1//c2) y = 0
                x, y = sorted(m2)
                poly = {frozenset([x]): 1, frozenset([y]): c1 // c2}
                continue
        return ("ok", poly)


def simplify_sign_system(sys: SignSystem) -> SignSystem:
    """Exponent reduction, factor cancellation, and the x*y +- 1 rewrite."""
    if sys.unsat:
        return sys
    eqs = []
    for poly in sys.equations:
        result = _simplify_poly(dict(poly))
        if result[0] == "unsat":
            return SignSystem(
                (), sys.variables, sys.substitutions, True, sys.var_positions, sys.normalized
            )
        if result[0] == "ok":
            eqs.append(result[1])
    return SignSystem(
        tuple(eqs), sys.variables, sys.substitutions, False, sys.var_positions, sys.normalized
    )


def _substitute(equations: list[Poly], var: int, sign: int, target: int | None) -> list[Poly]:
    out = []
    for poly in equations:
        if not any(var in mono for mono in poly):
            out.append(poly)
            continue
        new: Poly = {}
        for mono, c in poly.items():
            if var in mono:
                mono = mono - {var}
                c *= sign
                if target is not None:
                    # exponent reduction: target^2 = 1
                    mono = mono - {target} if target in mono else mono | {target}
            new[mono] = new.get(mono, 0) + c
        out.append({m: c for m, c in new.items() if c})
    return out


def _find_linear_substitution(equations: list[Poly]):
    """(eq index, var, sign, target) from a unit two-term linear equation."""
    for i, poly in enumerate(equations):
        if len(poly) > 2 or any(len(m) > 1 for m in poly):
            continue
        if len(poly) == 2:
            (m1, c1), (m2, c2) = sorted(poly.items(), key=lambda kv: len(kv[0]))
            if abs(c1) != abs(c2):
                continue  # unsat; caught by simplification
            if not m1:  # c2*x + c1 = 0
                (x,) = m2
                return i, x, -c1 // c2, None
            (x,) = m1
            (y,) = m2
            big, small = (x, y) if x > y else (y, x)
            cb = poly[frozenset([big])]
            cs = poly[frozenset([small])]
            return i, big, -cs // cb, small
    return None


def _propagate(equations: list[Poly], subs: list[tuple[int, int, int | None]]):
    """Simplify + eliminate to fixpoint.  Returns equations or None if unsat."""
    while True:
        simplified = []
        for poly in equations:
            result = _simplify_poly(dict(poly))
            if result[0] == "unsat":
                return None
            if result[0] == "ok":
                simplified.append(result[1])
        equations = simplified
        found = _find_linear_substitution(equations)
        if found is None:
            return equations
        i, var, sign, target = found
        del equations[i]
        equations = _substitute(equations, var, sign, target)
        subs.append((var, sign, target))


def eliminate_linear(sys: SignSystem) -> SignSystem:
    """Triangularize and substitute two-term linear equations to fixpoint."""
    if sys.unsat:
        return sys
    subs = list(sys.substitutions)
    eqs = _propagate(list(sys.equations), subs)
    if eqs is None:
        return SignSystem(
            (), sys.variables, tuple(subs), True, sys.var_positions, sys.normalized
        )
    return SignSystem(
        tuple(eqs), sys.variables, tuple(subs), False, sys.var_positions, sys.normalized
    )


# -- search --------------------------------------------------------------------


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # "sat" | "unsat" | "inconclusive"
    assignment: dict[int, int] | None
    nodes: int


class _Budget(Exception):
    pass


class _Progress:
    """Node counting with an optional periodic callback."""

    __slots__ = ("nodes", "budget", "callback", "interval", "next_report")

    def __init__(self, budget, callback, interval):
        self.nodes = 0
        self.budget = budget
        self.callback = callback
        self.interval = interval
        self.next_report = interval

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget
        if self.callback is not None and self.nodes >= self.next_report:
            self.callback(self.nodes)
            self.next_report += self.interval


def _branch_variable(equations: list[Poly]) -> int:
    counts: dict[int, int] = {}
    for poly in equations:
        seen: set[int] = set()
        for mono in poly:
            seen.update(mono)
        for v in seen:
            counts[v] = counts.get(v, 0) + 1
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    return best[0]


def _search(equations: list[Poly], subs, progress: _Progress) -> dict[int, int] | None:
    equations = _propagate(equations, subs)
    if equations is None:
        return None
    if not equations:
        return {}
    var = _branch_variable(equations)
    for value in (1, -1):
        progress.tick()
        sub_subs: list = []
        sub_eqs = _substitute(equations, var, value, None)
        found = _search(sub_eqs, sub_subs, progress)
        if found is not None:
            found[var] = value
            for v, sign, target in reversed(sub_subs):
                found[v] = sign * (found.get(target, 1) if target is not None else 1)
            return found
    return None


def search_signs(
    sys: SignSystem,
    node_budget: int = DEFAULT_NODE_BUDGET,
    progress=None,
    progress_interval: int = 1_000_000,
) -> SearchOutcome:
    """Complete backtracking over {-1,+1} with algebraic propagation.

    A "sat" outcome carries an assignment for every variable of the
    system (eliminated ones reconstructed, unconstrained ones +1); an
    "unsat" outcome is a proof of exhaustion.  Exceeding the node budget
    yields "inconclusive", never "unsat".  ``progress``, if given, is
    called with the node count every ``progress_interval`` nodes.
    """
    if sys.unsat:
        return SearchOutcome("unsat", None, 0)
    tracker = _Progress(node_budget, progress, progress_interval)
    subs = list(sys.substitutions)
    try:
        partial = _search(list(sys.equations), subs, tracker)
    except _Budget:
        return SearchOutcome("inconclusive", None, tracker.nodes)
    if partial is None:
        return SearchOutcome("unsat", None, tracker.nodes)
    assignment = dict(partial)
    for var, sign, target in reversed(subs):
        assignment[var] = sign * (assignment.get(target, 1) if target is not None else 1)
    for var in sys.variables:
        assignment.setdefault(var, 1)
    return SearchOutcome("sat", assignment, tracker.nodes)


def enumerate_solutions(sys: SignSystem) -> list[dict[int, int]]:
    """Brute-force oracle: all {-1,+1} assignments satisfying the system."""
    variables = sorted(sys.variables)
    out = []
    for mask in range(1 << len(variables)):
        assignment = {
            v: (1 if mask & (1 << i) else -1) for i, v in enumerate(variables)
        }
        ok = True
        for poly in sys.equations:
            total = 0
            for mono, c in poly.items():
                prod = c
                for v in mono:
                    prod *= assignment[v]
                total += prod
            if total != 0:
                ok = False
                break
        if ok:
            out.append(assignment)
    return out


# -- the full pipeline -----------------------------------------------------------


@dataclass(frozen=True)
class LiftOutcome:
    status: str  # "lifted" | "unliftable" | "inconclusive"
    scheme: Scheme | None
    nodes: int


def lift(s: Scheme, node_budget: int = DEFAULT_NODE_BUDGET, progress=None) -> LiftOutcome:
    """Find an integer scheme with entries in {-1,0,1} reducing to s mod 2.

    "unliftable" certifies by exhaustion that no such signing exists;
    "inconclusive" only reports an exhausted node budget.
    """
    sys = build_sign_system(s)
    sys = eliminate_linear(simplify_sign_system(sys))
    outcome = search_signs(sys, node_budget, progress=progress)
    if outcome.status != "sat":
        return LiftOutcome(
            "unliftable" if outcome.status == "unsat" else "inconclusive",
            None,
            outcome.nodes,
        )
    signs = outcome.assignment
    entries = {}
    for var, pos in enumerate(sys.var_positions):
        entries[pos] = signs[var]
    for pos in sys.normalized:
        entries[pos] = 1
    n = s.n
    summands = []
    for i, sm in enumerate(s.summands):
        mats = []
        for factor, mat in enumerate((sm.a, sm.b, sm.c)):
            rows = [
                [entries.get((factor, i, r, c), 0) for c in range(n)]
                for r in range(n)
            ]
            mats.append(Mat.from_rows(Ring.INT, rows))
        summands.append(Summand(*mats))
    lifted = Scheme(Ring.INT, n, tuple(summands))
    report = verify(lifted)
    if not report.correct:
        raise AssertionError("sign search returned a non-verifying scheme")
    return LiftOutcome("lifted", lifted, outcome.nodes)
