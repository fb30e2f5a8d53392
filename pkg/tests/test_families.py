"""Polynomial engine, exact family verification, parameter introduction, merging."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from mmscheme import fixtures
from mmscheme.core import Mat, Ring, Scheme, Summand, classical_scheme, verify
from mmscheme.families import (
    ParamScheme,
    family_from_scheme,
    dump_family,
    introduce_parameters,
    introduce_parameters_sweep,
    load_family,
    merge_reduction,
    substitute_family,
    verify_family_exact,
)
from mmscheme.io import FormatError
from mmscheme.poly import Poly, PolyParseError, parse_poly
from mmscheme.rng import SplitMix64


# -- polynomials ----------------------------------------------------------------


def test_poly_basics():
    x = Poly.variable(2, 0)
    y = Poly.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.evaluate([3, 2]) == 5
    assert (x + y) ** 2 == x * x + x * y.scale(2) * Poly.const(2, 1) + y * y
    assert Poly.const(2, 0).is_zero()
    assert Poly.const(2, 7).constant_value() == 7
    assert p.total_degree() == 2


def test_poly_parse_and_print():
    p = parse_poly("2*x1*x2^3 - (x1 + 1)*x1 + 5", 2)
    assert p.evaluate([1, 1]) == 2 - 2 + 5
    assert p.evaluate([2, -1]) == 2 * 2 * (-1) - 6 + 5
    assert parse_poly(p.to_string(), 2) == p
    assert parse_poly("-x1^2", 1).evaluate([3]) == -9
    assert parse_poly("0", 3).is_zero()
    assert Poly.zero(1).to_string() == "0"
    assert (Poly.variable(1, 0) - Poly.const(1, 2)).to_string() == "x1 - 2"
    assert (-Poly.variable(1, 0)).to_string() == "-x1"


def test_poly_canonical_order_is_graded_lex():
    p = parse_poly("x2 + x1 + x1*x2 + 1 + x1^2", 2)
    assert p.to_string() == "x1^2 + x1*x2 + x1 + x2 + 1"


def test_poly_parse_errors():
    with pytest.raises(PolyParseError):
        parse_poly("x3", 2)
    with pytest.raises(PolyParseError):
        parse_poly("y + 1", 2)
    with pytest.raises(PolyParseError):
        parse_poly("x1 +", 2)
    with pytest.raises(PolyParseError):
        parse_poly("(x1", 2)
    with pytest.raises(PolyParseError):
        parse_poly("x1 ^ x2", 2)
    with pytest.raises(PolyParseError):
        parse_poly("x1 $ 2", 2)


def test_poly_macros():
    macros = {"sq": parse_poly("x1^2 + 1", 1)}
    assert parse_poly("sq * sq - 1", 1, macros).evaluate([2]) == 24


def test_poly_divide_exact():
    x = Poly.variable(2, 0)
    y = Poly.variable(2, 1)
    p = (x + y) * (x * y - Poly.const(2, 3))
    assert p.divide_exact(x + y) == x * y - Poly.const(2, 3)
    assert p.divide_exact(x) is None
    assert (x.scale(4)).divide_exact(Poly.const(2, 2)) == x.scale(2)
    assert (x.scale(3)).divide_exact(Poly.const(2, 2)) is None


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_poly_ring_laws(data):
    nvars = 2
    monos = st.tuples(st.integers(0, 2), st.integers(0, 2))
    polys = st.dictionaries(monos, st.integers(-4, 4), max_size=4).map(
        lambda d: Poly(nvars, d)
    )
    p, q, r = data.draw(polys), data.draw(polys), data.draw(polys)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p - p).is_zero()
    point = data.draw(st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)


# -- the bundled family -----------------------------------------------------------


@pytest.fixture(scope="module")
def family17():
    return fixtures.family17()


def test_family17_verifies_exactly(family17):
    assert family17.params == 17
    assert family17.m == 23
    report = verify_family_exact(family17)
    assert report.correct and report.violation is None


def test_family17_perturbation_rejected(family17):
    summands = list(family17.summands)
    a, b, c = summands[1]
    rows = [list(r) for r in a]
    # flip the sign of one nonzero entry
    done = False
    for i, row in enumerate(rows):
        for j, p in enumerate(row):
            if not p.is_zero() and not done:
                rows[i][j] = -p
                done = True
    summands[1] = (tuple(tuple(r) for r in rows), b, c)
    broken = ParamScheme(family17.n, family17.params, tuple(summands))
    report = verify_family_exact(broken)
    assert not report.correct
    assert report.violation is not None


def test_family17_random_substitutions(family17):
    rng = SplitMix64(31337)
    for _ in range(20):
        point = [rng.randbelow(21) - 10 for _ in range(17)]
        assert verify(substitute_family(family17, point)).correct


def test_substitute_validation(family17):
    with pytest.raises(ValueError):
        substitute_family(family17, [0] * 16)
    with pytest.raises(ValueError):
        substitute_family(family17, [0.5] * 17)


def test_zero_parameter_family_round_trip(strassen):
    f = family_from_scheme(strassen)
    assert f.params == 0
    assert substitute_family(f, []) == strassen
    assert verify_family_exact(f).correct


def test_family_from_scheme_rejections(strassen_z2):
    with pytest.raises(ValueError):
        family_from_scheme(strassen_z2)  # Z2 has no sign information
    from fractions import Fraction

    half = Mat.from_rows(Ring.RAT, [[Fraction(1, 2), 0], [0, 1]])
    s = Scheme(Ring.RAT, 2, (Summand(half, half, half),))
    with pytest.raises(ValueError):
        family_from_scheme(s)


def test_family_file_round_trip(family17, tmp_path):
    text = dump_family(family17)
    again = load_family(text)
    assert again == family17
    obj = json.loads(text)
    assert obj["format"] == "mmfamily-v1"
    assert obj["params"] == 17
    assert "macros" not in obj  # canonical form is fully expanded


@pytest.mark.parametrize(
    "mutate",
    [
        lambda o: o.update(format="mmfamily-v0"),
        lambda o: o.update(params=-1),
        lambda o: o.update(m=5),
        lambda o: o["summands"][0].pop("b"),
        lambda o: o["summands"][0]["a"][0].__setitem__(0, "x99"),
        lambda o: o["summands"][0]["a"][0].__setitem__(0, "1/2"),
        lambda o: o["summands"][0]["a"].pop(),
    ],
)
def test_family_file_rejections(family17, mutate):
    obj = json.loads(dump_family(family17))
    mutate(obj)
    with pytest.raises(FormatError):
        load_family(json.dumps(obj))


# -- parameter introduction --------------------------------------------------------


def test_introduce_parameters_on_classical():
    base = classical_scheme(3, Ring.RAT)
    fwd = introduce_parameters(base, 0, "gamma", "beta")
    rev = introduce_parameters(base, 0, "gamma", "beta", column_order="reversed")
    assert fwd.params == rev.params  # rank-nullity is order independent
    assert fwd.params > 0
    assert verify_family_exact(fwd).correct
    # the all-zero point is the particular solution, i.e. the input scheme
    at_zero = substitute_family(fwd, [0] * fwd.params)
    assert at_zero == classical_scheme(3, Ring.INT)


def test_introduce_parameters_second_round():
    base = classical_scheme(3, Ring.RAT)
    f1 = introduce_parameters(base, 0, "gamma", "beta")
    f2 = introduce_parameters(f1, 1, "gamma", "beta")
    assert f2.params >= f1.params
    assert verify_family_exact(f2).correct
    assert verify(substitute_family(f2, [0] * f2.params)).correct


def test_introduce_parameters_validation(strassen):
    with pytest.raises(ValueError):
        introduce_parameters(strassen, 0, "gamma", "gamma")
    with pytest.raises(ValueError):
        introduce_parameters(strassen, 0, "delta", "beta")
    with pytest.raises(ValueError):
        introduce_parameters(strassen, 99, "gamma", "beta")


def test_sweep_on_strassen_is_rigid(strassen):
    trail = []
    f = family_from_scheme(strassen)
    for i in range(f.m):
        for u, v in (("alpha", "beta"), ("gamma", "beta")):
            f = introduce_parameters(f, i, u, v)
            trail.append(f.params)
    assert trail == sorted(trail)  # rounds only ever add parameters
    swept = introduce_parameters_sweep(strassen, order="forward")
    assert verify_family_exact(swept).correct
    # the 7-multiplication 2x2 scheme is unique up to symmetry, so no
    # free parameters can appear
    assert swept.params == 0


def test_sweep_recovers_parameters():
    swept = introduce_parameters_sweep(classical_scheme(2, Ring.RAT), order="forward")
    assert swept.params >= 1
    assert verify_family_exact(swept).correct
    assert verify(substitute_family(swept, [0] * swept.params)).correct


def test_sweep_orders(strassen):
    for order in ("backward", "transposed-loops"):
        f = introduce_parameters_sweep(strassen, order=order)
        assert verify_family_exact(f).correct
    with pytest.raises(ValueError):
        introduce_parameters_sweep(strassen, order="diagonal")


# -- merge reduction -----------------------------------------------------------------


def split_summand(s, index=0, position="c"):
    sm = s.summands[index]
    mat = getattr(sm, position)
    rows1 = [[v if j == 0 else 0 for j, v in enumerate(row)] for row in mat.entries]
    rows2 = [[v if j != 0 else 0 for j, v in enumerate(row)] for row in mat.entries]
    parts = {
        "a": lambda m: Summand(m, sm.b, sm.c),
        "b": lambda m: Summand(sm.a, m, sm.c),
        "c": lambda m: Summand(sm.a, sm.b, m),
    }[position]
    halves = [parts(Mat.from_rows(s.ring, rows1)), parts(Mat.from_rows(s.ring, rows2))]
    return s.replace_summands(
        halves + [t for i, t in enumerate(s.summands) if i != index]
    )


def test_merge_reduction_recovers_split(strassen):
    split = split_summand(strassen)
    assert split.m == 8 and verify(split).correct
    merged = merge_reduction(split)
    assert merged is not None and merged.m == 7
    assert verify(merged).correct


def test_merge_reduction_over_z2(strassen_z2):
    split = split_summand(strassen_z2)
    merged = merge_reduction(split)
    assert merged is not None and merged.m == 7
    assert verify(merged).correct


def test_merge_reduction_absent_on_fixtures(strassen, hard_z2):
    assert merge_reduction(strassen) is None
    assert merge_reduction(hard_z2) is None
    assert merge_reduction(classical_scheme(3, Ring.INT)) is None


def test_merge_reduction_iterates_to_fixpoint(strassen):
    s = split_summand(split_summand(strassen), index=3, position="b")
    assert s.m == 9 and verify(s).correct
    sizes = [s.m]
    while True:
        reduced = merge_reduction(s)
        if reduced is None:
            break
        s = reduced
        sizes.append(s.m)
        assert verify(s).correct
    assert sizes[-1] == 7
    assert sizes == sorted(sizes, reverse=True)


def test_merge_reduction_integrality_guard():
    # B-dependence exists over Q only with fractional coefficients (2/3 or
    # 3/2) and the C factors are independent, so over Z nothing merges
    a = Mat.from_rows(Ring.INT, [[1, 0], [0, 1]])
    b1 = Mat.from_rows(Ring.INT, [[2, 0], [0, 0]])
    b2 = Mat.from_rows(Ring.INT, [[3, 0], [0, 0]])
    c1 = Mat.from_rows(Ring.INT, [[0, 0], [0, 1]])
    c2 = Mat.from_rows(Ring.INT, [[0, 0], [1, 0]])
    s = Scheme(Ring.INT, 2, (Summand(a, b1, c1), Summand(a, b2, c2)))
    assert merge_reduction(s) is None
    rat = Scheme(
        Ring.RAT,
        2,
        tuple(
            Summand(
                Mat.from_rows(Ring.RAT, sm.a.entries),
                Mat.from_rows(Ring.RAT, sm.b.entries),
                Mat.from_rows(Ring.RAT, sm.c.entries),
            )
            for sm in s.summands
        ),
    )
    assert merge_reduction(rat) is not None
