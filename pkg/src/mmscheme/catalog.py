"""Deduplicated scheme catalog with content-hash identities.

Canonical bytes (summands sorted, fixed formatting) are hashed so that
renamed or reordered copies of the same scheme land on the same id.  The
index is a JSON file next to the scheme files; writes are serialized
through a lock file, reads are lock-free.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

from .core import Ring, Scheme, verify, weight
from .io import canonical_scheme_bytes, load_scheme, scheme_from_obj
from .symmetry import equivalent, invariant_key

__all__ = [
    "CatalogRecord",
    "Catalog",
    "DedupResult",
    "dedup_catalog",
    "weight_histogram",
    "CATALOG_ENV_VAR",
]

CATALOG_ENV_VAR = "MMSCHEME_CATALOG"
_INDEX_NAME = "index.json"
_LOCK_NAME = ".lock"


@dataclass(frozen=True)
class CatalogRecord:
    id: str
    path: str
    ring: str
    n: int
    m: int
    weight: int
    invariant_key: str

    def to_obj(self) -> dict:
        return {
            "id": self.id,
            "path": self.path,
            "ring": self.ring,
            "n": self.n,
            "m": self.m,
            "weight": self.weight,
            "invariant_key": self.invariant_key,
        }

    @classmethod
    def from_obj(cls, obj) -> "CatalogRecord":
        return cls(
            obj["id"],
            obj["path"],
            obj["ring"],
            obj["n"],
            obj["m"],
            obj["weight"],
            obj["invariant_key"],
        )


class _LockFile:
    """Single-writer lock via exclusive file creation."""

    def __init__(self, path: Path, timeout: float = 10.0):
        self.path = path
        self.timeout = timeout
        self._fd = None

    def __enter__(self):
        deadline = time.monotonic() + self.timeout
        while True:
            try:
                self._fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                return self
            except FileExistsError:
                if time.monotonic() >= deadline:
                    raise TimeoutError(
                        f"catalog is locked (stale {self.path}?)"
                    ) from None
                time.sleep(0.05)

    def __exit__(self, *exc):
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None
        try:
            os.unlink(self.path)
        except FileNotFoundError:
            pass
        return False


def scheme_id(s: Scheme) -> str:
    return hashlib.sha256(canonical_scheme_bytes(s)).hexdigest()


def _canonicalized(s: Scheme) -> Scheme:
    obj = json.loads(canonical_scheme_bytes(s))
    return scheme_from_obj(obj)


class Catalog:
    def __init__(self, root):
        self.root = Path(root)

    @classmethod
    def open(cls, root=None) -> "Catalog":
        root = root or os.environ.get(CATALOG_ENV_VAR)
        if not root:
            raise ValueError(
                f"no catalog root given and {CATALOG_ENV_VAR} is not set"
            )
        return cls(root)

    @property
    def _index_path(self) -> Path:
        return self.root / _INDEX_NAME

    def records(self) -> list[CatalogRecord]:
        if not self._index_path.exists():
            return []
        with open(self._index_path, encoding="utf-8") as fh:
            data = json.load(fh)
        return [CatalogRecord.from_obj(o) for o in data]

    def load(self, record: CatalogRecord) -> Scheme:
        return load_scheme((self.root / record.path).read_text("utf-8"))

    def add(self, s: Scheme) -> tuple[CatalogRecord, bool]:
        """Store a verifying scheme; returns (record, newly_added)."""
        if not verify(s).correct:
            raise ValueError("refusing to catalog a scheme that does not verify")
        canonical = _canonicalized(s)
        payload = canonical_scheme_bytes(canonical)
        sid = hashlib.sha256(payload).hexdigest()
        record = CatalogRecord(
            sid,
            f"{sid}.json",
            s.ring.value,
            s.n,
            s.m,
            weight(s),
            invariant_key(s).canonical_string(),
        )
        self.root.mkdir(parents=True, exist_ok=True)
        with _LockFile(self.root / _LOCK_NAME):
            existing = {r.id: r for r in self.records()}
            if sid in existing:
                return existing[sid], False
            (self.root / record.path).write_bytes(payload + b"\n")
            updated = sorted(
                list(existing.values()) + [record], key=lambda r: r.id
            )
            tmp = self._index_path.with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump([r.to_obj() for r in updated], fh, indent=1, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, self._index_path)
        return record, True


@dataclass(frozen=True)
class DedupResult:
    """Equivalence classes over a list of schemes, bucketed by invariants."""

    classes: tuple[tuple[int, ...], ...]  # input indices, one tuple per class
    invariant_class_counts: tuple[tuple[str, int], ...]
    equivalence_calls: int

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(cls[0] for cls in self.classes)


def dedup_catalog(schemes) -> DedupResult:
    """Group schemes into equivalence classes.

    Cheap invariant keys bucket the input first; the exact (and costly)
    equivalence decision only ever runs inside a bucket.
    """
    schemes = list(schemes)
    if not schemes:
        return DedupResult((), (), 0)
    shape = (schemes[0].n, schemes[0].m)
    for s in schemes:
        if s.ring is not Ring.Z2:
            raise ValueError("dedup decides equivalence over Z2 only")
        if (s.n, s.m) != shape:
            raise ValueError("dedup expects schemes of uniform n and m")
    buckets: dict[str, list[int]] = {}
    for i, s in enumerate(schemes):
        buckets.setdefault(invariant_key(s).canonical_string(), []).append(i)
    calls = 0
    classes: list[list[int]] = []
    key_counts: dict[str, int] = {}
    for key in sorted(buckets):
        bucket_classes: list[list[int]] = []
        for i in buckets[key]:
            for cls in bucket_classes:
                calls += 1
                if equivalent(schemes[cls[0]], schemes[i]) is not None:
                    cls.append(i)
                    break
            else:
                bucket_classes.append([i])
        key_counts[key] = len(bucket_classes)
        classes.extend(bucket_classes)
    classes.sort(key=lambda cls: cls[0])
    return DedupResult(
        tuple(tuple(cls) for cls in classes),
        tuple(sorted(key_counts.items())),
        calls,
    )


def weight_histogram(weights) -> list[tuple[int, int]]:
    """Sorted (weight, count) pairs, the payload of the CSV export."""
    counts: dict[int, int] = {}
    for w in weights:
        counts[w] = counts.get(w, 0) + 1
    return sorted(counts.items())
