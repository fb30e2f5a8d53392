#!/usr/bin/env python3
"""Parameterized families: infinitely many schemes at once.

Freeing one factor of one summand (and a second factor everywhere else)
leaves a linear system whose solution space often has positive dimension;
each nullspace direction becomes a free parameter.  Families verify as
polynomial identities, so they are correct for every parameter value over
every commutative ring.
"""

from mmscheme import (
    Ring,
    classical_scheme,
    introduce_parameters,
    introduce_parameters_sweep,
    merge_reduction,
    substitute_family,
    verify,
    verify_family_exact,
)
from mmscheme import fixtures
from mmscheme.rng import SplitMix64

print("== a bundled 17-parameter family of 23-multiplication schemes ==")
family = fixtures.family17()
report = verify_family_exact(family)
print(f"parameters: {family.params}, summands: {family.m}")
print(f"correct as a polynomial identity: {report.correct}")

rng = SplitMix64(99)
point = [rng.randbelow(201) - 100 for _ in range(17)]
at_point = substitute_family(family, point)
print(f"instance at a random integer point verifies: {verify(at_point).correct}")

print("\n== introducing parameters into a rigid starting point ==")
base = classical_scheme(3, Ring.RAT)
one_round = introduce_parameters(base, 0, "gamma", "beta")
print(f"one round on the schoolbook scheme: {one_round.params} parameters")
print(f"family identity holds: {verify_family_exact(one_round).correct}")

print("\n== sweeping every summand and factor pair ==")
swept = introduce_parameters_sweep(classical_scheme(2, Ring.RAT), order="forward")
print(f"2x2 schoolbook sweep: {swept.params} parameters")
print(f"identity holds: {verify_family_exact(swept).correct}")

strassen_family = introduce_parameters_sweep(fixtures.strassen(), order="forward")
print(f"Strassen sweep: {strassen_family.params} parameters (the scheme is rigid)")

print("\n== merge reduction finds redundant summands ==")
print(f"Strassen reduces: {merge_reduction(fixtures.strassen()) is not None}")
specialized = substitute_family(family, [0] * 17)
print(f"the family's zero point reduces: {merge_reduction(specialized) is not None}")
