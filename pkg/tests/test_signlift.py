"""Sign lifting: simplification rules, elimination, search, full pipeline."""

import pytest
from hypothesis import given, settings, strategies as st

from mmscheme.core import Ring, classical_scheme, reduce_mod2, verify
from mmscheme.rng import SplitMix64
from mmscheme.signlift import (
    SignSystem,
    build_sign_system,
    eliminate_linear,
    enumerate_solutions,
    lift,
    search_signs,
    simplify_sign_system,
)

X, Y, Z = 0, 1, 2


def system(*equations):
    return SignSystem.from_equations(
        [{frozenset(mono): c for mono, c in eq} for eq in equations]
    )


def test_xy_minus_one_rewrites_to_x_minus_y():
    sys = system([((X, Y), 1), ((), -1)])
    out = simplify_sign_system(sys)
    assert out.equations == ({frozenset([X]): 1, frozenset([Y]): -1},)
    sys = system([((X, Y), -1), ((), -1)])
    out = simplify_sign_system(sys)
    assert out.equations == ({frozenset([X]): 1, frozenset([Y]): 1},)


def test_exponent_reduction_by_substitution_finds_contradiction():
    # x*y*z + y together with z = x reduces to (x^2) y + y = 2y, impossible
    sys = system([((X, Y, Z), 1), ((Y,), 1)], [((Z,), 1), ((X,), -1)])
    out = eliminate_linear(sys)
    assert out.unsat
    assert search_signs(sys).status == "unsat"


def test_product_term_alone_is_unsat():
    sys = system([((X, Z), 1)])
    out = simplify_sign_system(sys)
    assert out.unsat


def test_factor_cancellation():
    # z*(x*y + 1) = 0 forces x = -y with z free
    sys = system([((X, Y, Z), 1), ((Z,), 1)])
    out = simplify_sign_system(sys)
    assert not out.unsat
    assert out.equations == ({frozenset([X]): 1, frozenset([Y]): 1},)


def test_eliminate_linear_example():
    sys = system([((X,), 1), ((Y,), -1)], [((X, Y, Z), 1), ((), 1)])
    out = eliminate_linear(sys)
    assert not out.unsat
    assert out.equations == ()
    result = search_signs(out)
    assert result.status == "sat"
    assert result.assignment[Z] == -1
    assert result.assignment[X] == result.assignment[Y]


def test_eliminate_keeps_nonlinear_systems():
    sys = system([((X, Y), 1), ((Y, Z), 1), ((), -2)])
    out = eliminate_linear(sys)
    assert out.equations == sys.equations


def test_empty_system():
    sys = system()
    result = search_signs(sys)
    assert result.status == "sat"
    assert result.assignment == {}


def test_budget_exhaustion_is_inconclusive_not_unsat():
    w = 3
    sys = system(
        [((X, Y), 1), ((Z, w), 1)],
        [((X, Z), 1), ((Y, w), 1)],
    )
    result = search_signs(sys, node_budget=0)
    assert result.status == "inconclusive"
    assert result.assignment is None
    full = search_signs(sys)
    assert full.status == "sat"


def test_search_progress_callback():
    w = 3
    sys = system(
        [((X, Y), 1), ((Z, w), 1)],
        [((X, Z), 1), ((Y, w), 1)],
    )
    seen = []
    search_signs(sys, progress=seen.append, progress_interval=1)
    assert seen == list(range(1, len(seen) + 1))
    assert seen  # the system needs at least one branch


def random_sign_system(rng: SplitMix64, max_vars: int) -> SignSystem:
    nvars = 1 + rng.randbelow(max_vars)
    neqs = 1 + rng.randbelow(6)
    equations = []
    for _ in range(neqs):
        poly = {}
        for _ in range(1 + rng.randbelow(4)):
            size = rng.randbelow(4)
            mono = frozenset(rng.sample(range(nvars), min(size, nvars)))
            coeff = (1, -1, 2, -2)[rng.randbelow(4)]
            poly[mono] = poly.get(mono, 0) + coeff
        poly = {m: c for m, c in poly.items() if c}
        if poly:
            equations.append(poly)
    return SignSystem.from_equations(
        [dict(eq) for eq in equations]
    )


def check_agreement(sys: SignSystem):
    solutions = enumerate_solutions(sys)
    outcome = search_signs(sys)
    assert outcome.status in ("sat", "unsat")
    if solutions:
        assert outcome.status == "sat"
        assert outcome.assignment in solutions
    else:
        assert outcome.status == "unsat"


def test_search_agrees_with_enumeration_seeded():
    rng = SplitMix64(314159)
    for _ in range(60):
        check_agreement(random_sign_system(rng, max_vars=10))


def test_solution_sets_preserved_by_simplify_eliminate():
    rng = SplitMix64(2718)
    for _ in range(40):
        sys = random_sign_system(rng, max_vars=8)
        before = enumerate_solutions(sys)
        after_sys = eliminate_linear(simplify_sign_system(sys))
        if after_sys.unsat:
            assert before == []
            continue
        active = set()
        for eq in after_sys.equations:
            for mono in eq:
                active.update(mono)
        substituted = {v for v, _, _ in after_sys.substitutions}
        free = set(sys.variables) - active - substituted
        reduced = SignSystem.from_equations([dict(e) for e in after_sys.equations])
        after = enumerate_solutions(reduced) if after_sys.equations else [{}]
        # every original solution restricts to a reduced one and respects
        # the recorded substitutions; counting shows nothing was added
        assert len(before) == len(after) * (1 << len(free))
        for sol in before:
            assert all(
                sol[v] == sign * (sol[t] if t is not None else 1)
                for v, sign, t in after_sys.substitutions
            )


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_search_agrees_with_enumeration_hypothesis(data):
    nvars = data.draw(st.integers(1, 7))
    monos = st.frozensets(st.integers(0, nvars - 1), max_size=3)
    eq = st.dictionaries(monos, st.sampled_from([-2, -1, 1, 2]), min_size=1, max_size=4)
    eqs = data.draw(st.lists(eq, min_size=1, max_size=5))
    sys = SignSystem.from_equations(eqs)
    check_agreement(sys)


def test_build_sign_system_rejects_bad_input(strassen_z2, strassen):
    from mmscheme.core import Mat, Scheme, Summand

    with pytest.raises(ValueError):
        build_sign_system(strassen)  # not Z2
    z = Mat.zero(Ring.Z2, 2)
    broken = Scheme(Ring.Z2, 2, (Summand(z, z, z),))
    with pytest.raises(ValueError):
        build_sign_system(broken)  # does not verify


def test_classical_system_fully_forced():
    sys = build_sign_system(classical_scheme(3, Ring.Z2))
    assert len(sys.variables) == 27  # one gamma entry per summand
    reduced = eliminate_linear(simplify_sign_system(sys))
    assert reduced.num_active_variables() == 0
    assert reduced.equations == ()


def test_strassen_variable_count(strassen_z2):
    sys = build_sign_system(strassen_z2)
    support = sum(
        sm.a.nnz() + sm.b.nnz() + sm.c.nnz() for sm in strassen_z2.summands
    )
    assert len(sys.variables) == support - 2 * strassen_z2.m
    reduced = eliminate_linear(simplify_sign_system(sys))
    assert reduced.num_active_variables() < len(sys.variables)


def test_lift_classical():
    out = lift(classical_scheme(3, Ring.Z2))
    assert out.status == "lifted"
    assert out.scheme == classical_scheme(3, Ring.INT)


def test_lift_strassen(strassen_z2):
    out = lift(strassen_z2)
    assert out.status == "lifted"
    assert verify(out.scheme).correct
    assert reduce_mod2(out.scheme) == strassen_z2
    values = {
        v
        for sm in out.scheme.summands
        for mat in (sm.a, sm.b, sm.c)
        for row in mat.entries
        for v in row
    }
    assert values <= {-1, 0, 1}


def test_hard_fixture_system_is_nonempty(hard_z2):
    sys = build_sign_system(hard_z2)
    assert len(sys.variables) > 0
    assert len(sys.equations) > 0
    reduced = eliminate_linear(simplify_sign_system(sys))
    assert not reduced.unsat  # only the search refutes it


def test_lift_hard_fixture_unliftable(hard_z2):
    out = lift(hard_z2)
    assert out.status == "unliftable"
    assert out.scheme is None
    assert 0 < out.nodes < 10_000  # far below the default budget


def test_lift_group_images_of_strassen(strassen_z2):
    from mmscheme.symmetry import apply_group, random_group_element

    rng = SplitMix64(55)
    for _ in range(5):
        g = random_group_element(2, rng)
        image = apply_group(g, strassen_z2)
        out = lift(image)
        assert out.status == "lifted"
        assert reduce_mod2(out.scheme) == image
