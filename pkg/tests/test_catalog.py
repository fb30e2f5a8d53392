"""Catalog: content-hash identities, dedup pipeline, histogram payload."""

import json

import pytest

from mmscheme.catalog import Catalog, dedup_catalog, weight_histogram
from mmscheme.core import Mat, Ring, Summand, verify
from mmscheme.rng import SplitMix64
from mmscheme.symmetry import apply_group, random_group_element


@pytest.fixture
def catalog(tmp_path):
    return Catalog(tmp_path / "cat")


def test_add_and_round_trip(catalog, hard_z2):
    record, created = catalog.add(hard_z2)
    assert created
    assert record.ring == "z2" and record.n == 3 and record.m == 23
    assert record.weight == 219
    loaded = catalog.load(record)
    assert verify(loaded).correct
    # canonical files are bit-identical on re-add
    payload = (catalog.root / record.path).read_bytes()
    again, created = catalog.add(hard_z2)
    assert not created and again.id == record.id
    assert (catalog.root / record.path).read_bytes() == payload


def test_reordered_scheme_dedupes_by_content_hash(catalog, hard_z2):
    record, _ = catalog.add(hard_z2)
    reordered = hard_z2.replace_summands(reversed(hard_z2.summands))
    again, created = catalog.add(reordered)
    assert not created
    assert again.id == record.id
    assert len(catalog.records()) == 1


def test_rejects_incorrect_scheme(catalog, hard_z2):
    sm = hard_z2.summands[0]
    rows = [list(r) for r in sm.a.entries]
    rows[0][0] ^= 1
    bad = hard_z2.replace_summands(
        [Summand(Mat.from_rows(Ring.Z2, rows), sm.b, sm.c)] + list(hard_z2.summands[1:])
    )
    with pytest.raises(ValueError):
        catalog.add(bad)
    assert catalog.records() == []


def test_index_is_sorted_and_stable(catalog, hard_z2, strassen_z2):
    catalog.add(hard_z2)
    ids = [r.id for r in catalog.records()]
    assert ids == sorted(ids)
    data = json.loads((catalog.root / "index.json").read_text())
    assert all(set(o) >= {"id", "path", "ring", "n", "m", "weight", "invariant_key"} for o in data)


def test_dedup_classes(hard_z2):
    rng = SplitMix64(41)
    g1 = random_group_element(3, rng)
    g2 = random_group_element(3, rng)
    image1 = apply_group(g1, hard_z2)
    image2 = apply_group(g2, image1)
    # a correct scheme with a different invariant profile: simplify can
    # change weight but not the orbit, so construct a distinct class by
    # reusing the fixture's images only
    schemes = [hard_z2, image1, image2]
    result = dedup_catalog(schemes)
    assert len(result.classes) == 1
    assert result.classes[0] == (0, 1, 2)

    from mmscheme.core import classical_scheme

    mixed = [classical_scheme(3, Ring.Z2), apply_group(g1, classical_scheme(3, Ring.Z2))]
    result = dedup_catalog(mixed)
    assert len(result.classes) == 1


def test_dedup_short_circuits_on_invariants(hard_z2):
    sm = hard_z2.summands[0]
    other = hard_z2.replace_summands(
        [Summand(Mat.zero(Ring.Z2, 3), sm.b, sm.c)] + list(hard_z2.summands[1:])
    )
    result = dedup_catalog([hard_z2, other])
    assert len(result.classes) == 2
    assert result.equivalence_calls == 0  # distinct buckets, no exact checks
    assert len(result.invariant_class_counts) == 2


def test_dedup_order_independence(hard_z2):
    rng = SplitMix64(4242)
    g = random_group_element(3, rng)
    sm = hard_z2.summands[0]
    other = hard_z2.replace_summands(
        [Summand(Mat.zero(Ring.Z2, 3), sm.b, sm.c)] + list(hard_z2.summands[1:])
    )
    schemes = [hard_z2, apply_group(g, hard_z2), other]
    from mmscheme.io import canonical_scheme_bytes

    def class_multiset(order):
        result = dedup_catalog([schemes[i] for i in order])
        return sorted(
            sorted(canonical_scheme_bytes(schemes[order[i]]) for i in cls)
            for cls in result.classes
        )

    assert class_multiset([0, 1, 2]) == class_multiset([2, 1, 0])


def test_dedup_validations(hard_z2, strassen_z2, strassen):
    assert dedup_catalog([]).classes == ()
    assert dedup_catalog([hard_z2]).classes == ((0,),)
    with pytest.raises(ValueError):
        dedup_catalog([hard_z2, strassen_z2])
    with pytest.raises(ValueError):
        dedup_catalog([strassen])  # equivalence is decided over Z2


def test_weight_histogram():
    assert weight_histogram([5, 3, 5, 5]) == [(3, 1), (5, 3)]
    assert weight_histogram([]) == []


def test_catalog_requires_root(monkeypatch):
    monkeypatch.delenv("MMSCHEME_CATALOG", raising=False)
    with pytest.raises(ValueError):
        Catalog.open()


def test_catalog_env_var(monkeypatch, tmp_path, strassen_z2):
    monkeypatch.setenv("MMSCHEME_CATALOG", str(tmp_path / "envcat"))
    cat = Catalog.open()
    record, created = cat.add(strassen_z2)
    assert created
    assert (tmp_path / "envcat" / record.path).exists()


def test_lock_file_released(catalog, strassen_z2):
    catalog.add(strassen_z2)
    assert not (catalog.root / ".lock").exists()
    # a held lock blocks a second writer until timeout
    from mmscheme.catalog import _LockFile

    with _LockFile(catalog.root / ".lock"):
        with pytest.raises(TimeoutError):
            with _LockFile(catalog.root / ".lock", timeout=0.2):
                pass
