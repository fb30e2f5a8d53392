"""Bundled reference schemes, loaded from package data files.

* ``strassen``: the classic 7-multiplication 2x2 scheme over Z, stored in
  the internal transposed convention.
* ``nonliftable_z2``: a 23-multiplication 3x3 scheme over Z2 that admits
  no sign assignment making it correct over Z (the lifting search proves
  this by exhaustion).
* ``family17``: a 23-multiplication 3x3 family with 17 free parameters,
  correct as a polynomial identity.
"""

from __future__ import annotations

from importlib import resources

from .core import Scheme, reduce_mod2
from .io import load_scheme

__all__ = ["strassen", "strassen_z2", "nonliftable_z2", "family17"]


def _data_text(name: str) -> str:
    return resources.files("mmscheme").joinpath("data", name).read_text("utf-8")


def strassen() -> Scheme:
    return load_scheme(_data_text("strassen.json"))


def strassen_z2() -> Scheme:
    return reduce_mod2(strassen())


def nonliftable_z2() -> Scheme:
    return load_scheme(_data_text("z2_23_nonliftable.json"))


def family17():
    from .families import load_family

    return load_family(_data_text("family_17param.json"))
