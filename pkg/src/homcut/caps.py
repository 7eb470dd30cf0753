"""Size caps that make exponential routines fail fast.

Defaults can be overridden through the ``HOMCUT_CAPS`` environment variable,
a comma-separated ``key=value`` list, e.g. ``HOMCUT_CAPS=kron_entries=4096,iso_vertices=10``.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

from homcut.errors import SizeCapExceeded


@dataclass(frozen=True)
class Caps:
    kron_entries: int = 2**20
    mim_entries: int = 2**12
    iso_vertices: int = 12
    rowbasis_width: int = 2**16
    rowbasis_cells: int = 2**22
    oracle_columns: int = 2**14
    oracle_nodes: int = 50_000
    cutwidth_exact_vertices: int = 20
    core_vertices: int = 10
    factor_vertices: int = 12
    cov_exact_vertices: int = 8
    cov_nodes: int = 200_000
    tuple_arity: int = 24
    witness_count: int = 2**16
    hom_nodes: int = 10**7

    def check(self, key: str, size: int, what: str | None = None) -> None:
        cap = getattr(self, key)
        if size > cap:
            raise SizeCapExceeded(what or key, size, cap)


def parse_caps(text: str, base: Caps | None = None) -> Caps:
    base = base or Caps()
    names = {f.name for f in dataclasses.fields(Caps)}
    updates = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ValueError(f"bad HOMCUT_CAPS entry {item!r}")
        updates[key] = int(value)
    return dataclasses.replace(base, **updates)


def get_caps() -> Caps:
    return parse_caps(os.environ.get("HOMCUT_CAPS", ""))
