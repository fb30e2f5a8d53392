"""Reading and writing the mmscheme-v1 JSON format and group element files.

mmscheme-v1 is the interchange format used by every tool in this package:

    {"format": "mmscheme-v1", "ring": "z2"|"int"|"rat", "n": 2|3,
     "summands": [{"a": [[...]], "b": [[...]], "c": [[...]]}, ...]}

Entries are JSON integers; for ring "rat" they may also be exact fraction
strings "p/q".  Canonical bytes (sorted keys, fixed number formatting,
summands sorted by their own canonical encoding) back the catalog's
content-hash identities.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core import Mat, Ring, Scheme, Summand

__all__ = [
    "FormatError",
    "scheme_to_obj",
    "scheme_from_obj",
    "dump_scheme",
    "load_scheme",
    "write_scheme",
    "read_scheme",
    "canonical_scheme_bytes",
    "transpose_gamma",
    "group_element_to_obj",
    "group_element_from_obj",
]

FORMAT_NAME = "mmscheme-v1"


class FormatError(ValueError):
    """Raised for malformed or inconsistent scheme/family/witness files."""


def _entry_to_json(ring: Ring, v) -> Any:
    if ring is Ring.RAT:
        f = Fraction(v)
        return f"{f.numerator}/{f.denominator}"
    return int(v)


def _entry_from_json(ring: Ring, v) -> Any:
    if isinstance(v, bool):
        raise FormatError(f"invalid entry {v!r}")
    if ring is Ring.RAT:
        if isinstance(v, str):
            try:
                return Fraction(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"invalid rational entry {v!r}") from exc
        if isinstance(v, int):
            return Fraction(v)
        raise FormatError(f"invalid rational entry {v!r}")
    if not isinstance(v, int):
        raise FormatError(f"invalid integer entry {v!r}")
    if ring is Ring.Z2 and v not in (0, 1):
        raise FormatError(f"Z2 entry out of range: {v!r}")
    return v


def _mat_to_json(m: Mat) -> list[list[Any]]:
    return [[_entry_to_json(m.ring, v) for v in row] for row in m.entries]


def _mat_from_json(ring: Ring, n: int, rows) -> Mat:
    if (
        not isinstance(rows, list)
        or len(rows) != n
        or any(not isinstance(r, list) or len(r) != n for r in rows)
    ):
        raise FormatError(f"factor matrix is not {n}x{n}")
    return Mat(ring, tuple(tuple(_entry_from_json(ring, v) for v in row) for row in rows))


def scheme_to_obj(s: Scheme) -> dict:
    return {
        "format": FORMAT_NAME,
        "ring": s.ring.value,
        "n": s.n,
        "summands": [
            {"a": _mat_to_json(sm.a), "b": _mat_to_json(sm.b), "c": _mat_to_json(sm.c)}
            for sm in s.summands
        ],
    }


def scheme_from_obj(obj) -> Scheme:
    if not isinstance(obj, dict):
        raise FormatError("scheme file must hold a JSON object")
    if obj.get("format") != FORMAT_NAME:
        raise FormatError(f"not a {FORMAT_NAME} file")
    try:
        ring = Ring(obj.get("ring"))
    except ValueError as exc:
        raise FormatError(f"unknown ring {obj.get('ring')!r}") from exc
    n = obj.get("n")
    if not isinstance(n, int):
        raise FormatError("missing or invalid dimension n")
    raw = obj.get("summands")
    if not isinstance(raw, list) or not raw:
        raise FormatError("summands must be a nonempty array")
    summands = []
    for item in raw:
        if not isinstance(item, dict) or set(item) != {"a", "b", "c"}:
            raise FormatError("each summand needs exactly the fields a, b, c")
        summands.append(
            Summand(
                _mat_from_json(ring, n, item["a"]),
                _mat_from_json(ring, n, item["b"]),
                _mat_from_json(ring, n, item["c"]),
            )
        )
    try:
        return Scheme(ring, n, tuple(summands))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dump_scheme(s: Scheme) -> str:
    return json.dumps(scheme_to_obj(s), indent=1, sort_keys=True)


def load_scheme(text: str) -> Scheme:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return scheme_from_obj(obj)


def write_scheme(path, s: Scheme) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_scheme(s))
        fh.write("\n")


def read_scheme(path) -> Scheme:
    with open(path, encoding="utf-8") as fh:
        return load_scheme(fh.read())


def canonical_scheme_bytes(s: Scheme) -> bytes:
    """Canonical byte encoding: sorted keys, summands sorted by encoding."""
    obj = scheme_to_obj(s)
    keyed = sorted(
        obj["summands"],
        key=lambda sm: json.dumps(sm, sort_keys=True, separators=(",", ":")),
    )
    obj["summands"] = keyed
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def transpose_gamma(s: Scheme) -> Scheme:
    """Convert a scheme authored in the C = A*B convention.

    Files written with gamma[k1,k2] = coefficient of c_{k1,k2} transpose
    their third factor to land in the internal C^T = A*B convention.
    """
    return s.replace_summands(
        Summand(sm.a, sm.b, sm.c.transpose()) for sm in s.summands
    )


# -- group element files -----------------------------------------------------

PERMUTATION_NAMES = ("id", "(12)", "(13)", "(23)", "(123)", "(132)")


def group_element_to_obj(g) -> dict:
    return {
        "u": [[int(v) for v in row] for row in g.u.entries],
        "v": [[int(v) for v in row] for row in g.v.entries],
        "w": [[int(v) for v in row] for row in g.w.entries],
        "perm": g.perm_name,
    }


def group_element_from_obj(obj, ring: Ring = Ring.Z2):
    from .symmetry import GroupElement

    if not isinstance(obj, dict):
        raise FormatError("group element must be a JSON object")
    perm = obj.get("perm")
    if perm not in PERMUTATION_NAMES:
        raise FormatError(f"unknown permutation {perm!r}")
    mats = {}
    for key in ("u", "v", "w"):
        rows = obj.get(key)
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise FormatError(f"invalid matrix {key!r}")
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise FormatError(f"matrix {key!r} is not square")
        mats[key] = Mat.from_rows(ring, rows)
    return GroupElement(mats["u"], mats["v"], mats["w"], perm)
