"""Parameterized multiplication tables and their recorded relations."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..errors import NilalgError
from .fileformat import CatalogEntry, Term, algebra_to_text, parse_algebra_file, parse_single, unparse
from .instantiate import instantiate, resolve_parameters

DATA_FILES = ("low_dim.alg", "ann2.alg", "ext_2_2_2_3.alg", "ext_2_4.alg", "ext_2_5.alg",
              "ext_2_6.alg", "ext_2_7.alg", "external.alg")


class UnknownEntry(NilalgError, KeyError):
    pass


@lru_cache(maxsize=1)
def builtin_catalog() -> tuple:
    entries = []
    root = resources.files(__package__) / "data"
    for name in DATA_FILES:
        entries.extend(parse_algebra_file((root / name).read_text(encoding="utf-8")))
    return tuple(entries)


@lru_cache(maxsize=1)
def _index() -> dict:
    return {e.name: e for e in builtin_catalog()}


def entry(name: str) -> CatalogEntry:
    try:
        return _index()[name]
    except KeyError:
        raise UnknownEntry(f"no catalog entry named {name!r}") from None


def section(sec: str, include_external: bool = False) -> tuple:
    return tuple(e for e in builtin_catalog() if e.section == sec and (include_external or not e.external))


def load(name: str, **params):
    """Instantiate a builtin entry: ``load("CD4_08", alpha=1)``."""
    return instantiate(entry(name), params)


__all__ = ["CatalogEntry", "Term", "UnknownEntry", "algebra_to_text", "builtin_catalog", "entry", "instantiate",
           "load", "parse_algebra_file", "parse_single", "resolve_parameters", "section", "unparse"]
