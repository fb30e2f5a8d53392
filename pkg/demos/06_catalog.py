#!/usr/bin/env python3
"""A deduplicated catalog of schemes.

Content hashes over canonical bytes make renamed and reordered copies
collide; invariant keys bucket the catalog so the expensive equivalence
decision only runs between plausible duplicates.  The weight histogram
exports as a two-column CSV.
"""

import tempfile
from pathlib import Path

from mmscheme import Catalog, apply_group, dedup_catalog, random_group_element, weight
from mmscheme import fixtures
from mmscheme.catalog import weight_histogram
from mmscheme.rng import SplitMix64

hard = fixtures.nonliftable_z2()
rng = SplitMix64(31)

with tempfile.TemporaryDirectory() as tmp:
    catalog = Catalog(Path(tmp) / "catalog")

    record, created = catalog.add(hard)
    print(f"added {record.id[:16]}... weight={record.weight}")
    print(f"invariants: {record.invariant_key}")

    reordered = hard.replace_summands(reversed(hard.summands))
    _, created = catalog.add(reordered)
    print(f"reordered copy added again: {created}  (content hash collides)")

    for seed in (1, 2):
        image = apply_group(random_group_element(3, SplitMix64(seed)), hard)
        record, _ = catalog.add(image)
        print(f"added group image {record.id[:16]}... weight={record.weight}")

    records = catalog.records()
    print(f"\ncatalog holds {len(records)} distinct files")

    schemes = [catalog.load(r) for r in records]
    result = dedup_catalog(schemes)
    print(f"equivalence classes: {len(result.classes)}")
    print(f"exact equivalence calls needed: {result.equivalence_calls}")

    rows = weight_histogram(weight(s) for s in schemes)
    print("\nweight,count")
    for w, c in rows:
        print(f"{w},{c}")
