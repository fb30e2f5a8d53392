#!/usr/bin/env python3
"""Verifying schemes against the Brent equations.

A scheme computes the n x n matrix product with m coefficient
multiplications iff all n^6 Brent equations hold.  Checking them is exact
integer arithmetic, so "correct" here is a theorem about the scheme, not
a numerical observation.
"""

from mmscheme import (
    Ring,
    brent_indices,
    brent_residual,
    classical_scheme,
    dump_scheme,
    load_scheme,
    rank_profile,
    verify,
    weight,
)
from mmscheme import fixtures

print("== the schoolbook scheme ==")
classical = classical_scheme(3, Ring.INT)
print(f"summands: {classical.m} (n^3 products, one unit matrix per factor)")
print(f"verifies: {verify(classical).correct}")
print(f"weight:   {weight(classical)} nonzero coefficient triples")

print("\n== Strassen's 7-multiplication scheme ==")
strassen = fixtures.strassen()
report = verify(strassen)
print(f"verifies: {report.correct}")
print(f"weight over Z2: {weight(fixtures.strassen_z2())}")

print("\n== a 23-multiplication 3x3 scheme over Z2 ==")
hard = fixtures.nonliftable_z2()
residuals = [brent_residual(hard, idx) for idx in brent_indices(3)]
print(f"all {len(residuals)} residuals zero: {all(r == 0 for r in residuals)}")
print(f"weight: {weight(hard)}")
counts = {}
for triple in rank_profile(hard):
    counts[triple] = counts.get(triple, 0) + 1
print("factor rank triples:", dict(sorted(counts.items())))

print("\n== breaking one coefficient breaks at least one equation ==")
from mmscheme import Mat, Summand

sm = strassen.summands[0]
rows = [list(r) for r in sm.c.entries]
rows[0][0] += 1
broken = strassen.replace_summands(
    [Summand(sm.a, sm.b, Mat.from_rows(Ring.INT, rows))] + list(strassen.summands[1:])
)
bad = verify(broken)
print(f"correct: {bad.correct}, violated equations: {len(bad.violations)}")

print("\n== schemes travel as mmscheme-v1 JSON ==")
text = dump_scheme(strassen)
print(f"round trip intact: {load_scheme(text) == strassen}")
