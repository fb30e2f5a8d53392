#!/usr/bin/env python3
"""From Brent equations to CNF and back.

Over Z2 the Brent equations become parity constraints on products of
Boolean variables.  The encoder introduces s = alpha & beta and
t = s & gamma helper variables (three clauses each) and either encodes
each equation's parity faithfully in xor chunks of size four, or uses the
stricter zero-or-two counting constraint as a streamlined variant.

Streamlining narrows the search space further: pinning variables to a
known solution, zeroing random fully-off-diagonal products, or fixing how
the 27 diagonal products distribute over the summands (19 singles + 4
pairs).  No solver ships with this package; the DIMACS file can be handed
to any solver and the model decoded back into a scheme.
"""

import tempfile
from pathlib import Path

from mmscheme import (
    StreamlinePlan,
    apply_streamline,
    check_assignment,
    decode_model,
    encode_brent,
    extend_assignment,
    random_diag_distribution,
    verify,
    write_dimacs,
)
from mmscheme import fixtures

print("== the 3x3 / 23-multiplication instance ==")
plan = StreamlinePlan(mode="parity")
formula, varmap = encode_brent(3, 23, plan)
print(f"base variables (alpha/beta/gamma): {varmap.base_count}")
print(f"total variables: {formula.num_vars}, clauses: {len(formula.clauses)}")

print("\n== streamlining ==")
diag = random_diag_distribution(3, 23, seed=7)
units = apply_streamline(StreamlinePlan(diag_distribution=diag), varmap)
positives = sum(1 for u in units if u > 0)
print(f"diagonal distribution pins {len(units)} t-literals ({positives} positive)")

hard = fixtures.nonliftable_z2()
units = apply_streamline(StreamlinePlan(fix_scheme=hard, fix_fraction=0.5, seed=11), varmap)
print(f"pinning half of a known solution: {len(units)} unit clauses")

print("\n== a known scheme satisfies its own encoding ==")
strassen2 = fixtures.strassen_z2()
formula2, varmap2 = encode_brent(2, 7, StreamlinePlan(mode="parity"))
values = extend_assignment(strassen2, formula2, varmap2)
print(f"extended assignment satisfies the formula: {check_assignment(formula2, values)}")

model = [v if values[v] else -v for v in range(1, formula2.num_vars + 1)]
decoded = decode_model(model, varmap2)
print(f"decoding the model recovers the scheme: {decoded == strassen2}")
print(f"decoded scheme verifies: {verify(decoded).correct}")

with tempfile.TemporaryDirectory() as tmp:
    cnf = Path(tmp) / "brent_2x2_7.cnf"
    write_dimacs(cnf, formula2)
    head = cnf.read_text().splitlines()[0]
    print(f"\nwrote {cnf.name}: '{head}'")
