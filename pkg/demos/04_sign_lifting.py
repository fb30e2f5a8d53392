#!/usr/bin/env python3
"""Recovering signs: from Z2 schemes to schemes over any ring.

A Z2 scheme fixes which coefficients are nonzero but forgets whether they
were +1 or -1.  Lifting hypothesizes entries in {-1,0,+1}, pins one entry
of A and one of B per summand to +1 (tensor scaling freedom), and solves
the remaining +-1 constraint system by simplification, elimination, and
exhaustive backtracking.  Exhaustion is a proof: some Z2 schemes provably
admit no signing at all.
"""

from mmscheme import (
    Ring,
    build_sign_system,
    classical_scheme,
    eliminate_linear,
    lift,
    reduce_mod2,
    simplify_sign_system,
    verify,
)
from mmscheme import fixtures

print("== the schoolbook scheme lifts trivially ==")
out = lift(classical_scheme(3, Ring.Z2))
print(f"status: {out.status}, search nodes: {out.nodes}")
print(f"all entries +1: {out.scheme == classical_scheme(3, Ring.INT)}")

print("\n== Strassen mod 2 lifts back to a signed scheme ==")
strassen2 = fixtures.strassen_z2()
sys = build_sign_system(strassen2)
print(f"sign variables: {len(sys.variables)}")
reduced = eliminate_linear(simplify_sign_system(sys))
print(f"after simplification + elimination: {reduced.num_active_variables()} active")
out = lift(strassen2)
print(f"status: {out.status}, nodes: {out.nodes}")
print(f"lift verifies over Z: {verify(out.scheme).correct}")
print(f"reduces back mod 2:   {reduce_mod2(out.scheme) == strassen2}")

print("\n== a scheme with no +-1 lift at all ==")
hard = fixtures.nonliftable_z2()
out = lift(hard)
print(f"status: {out.status} (proved by exhausting {out.nodes} search nodes)")
print("any integer scheme reducing to it mod 2 needs a coefficient of size >= 2")
