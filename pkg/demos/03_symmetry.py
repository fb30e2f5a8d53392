#!/usr/bin/env python3
"""The symmetry group: orbits, invariants, equivalence, simplification.

Invertible sandwiching matrices and factor permutations map correct
schemes to correct schemes, so schemes are really only new up to this
group action.  Rank-derived invariants separate many orbits cheaply; the
exact decision constructs a witness group element or exhausts all
matchings.  Random group elements also drive a hill-climb that trades a
scheme for a lighter equivalent one.
"""

from mmscheme import (
    GROUP_ORDER_Z2,
    Ring,
    apply_group,
    classical_scheme,
    compose,
    equivalent,
    invariant_key,
    inverse,
    random_group_element,
    simplify_weight,
    verify,
    weight,
)
from mmscheme import fixtures
from mmscheme.rng import SplitMix64

hard = fixtures.nonliftable_z2()
rng = SplitMix64(2024)

print(f"group order over Z2 (n=3): {GROUP_ORDER_Z2:,}")

print("\n== the action preserves correctness and invariants ==")
g = random_group_element(3, rng)
image = apply_group(g, hard)
print(f"image verifies: {verify(image).correct}")
print(f"invariants unchanged: {invariant_key(image) == invariant_key(hard)}")
print(f"invariant key: {invariant_key(hard).canonical_string()}")

print("\n== group laws hold by construction ==")
h = random_group_element(3, rng)
print(
    "g(h(s)) == (g*h)(s):",
    apply_group(g, apply_group(h, hard)) == apply_group(compose(g, h), hard),
)
print("g^-1(g(s)) == s:", apply_group(inverse(g), apply_group(g, hard)) == hard)

print("\n== deciding equivalence ==")
witness = equivalent(hard, image)
print(f"witness found: {witness is not None} (permutation part {witness.perm_name!r})")

print("\n== weight simplification by random search ==")
inflated = apply_group(random_group_element(3, SplitMix64(5)), classical_scheme(3, Ring.Z2))
print(f"inflated schoolbook scheme weight: {weight(inflated)}")
slim = simplify_weight(inflated, iterations=10_000, seed=11)
print(f"after 10,000 random group elements: weight {weight(slim)}")
print(f"still correct: {verify(slim).correct}")
print(f"still equivalent to the input: {equivalent(inflated, slim) is not None}")
