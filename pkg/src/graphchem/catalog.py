"""Packaged molecule catalog.

Ships a few ready-to-load molecules: lambda-calculus demos plus quines found
by seeded random search and re-verified at build time.  The manifest records
for each entry the chemistry it runs under, the verdict it is expected to
reproduce and how it was obtained.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .molecule import MolError, Molecule, parse_mol


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    file: str
    chemistry: str
    family: str
    expected_status: str
    period: int | None
    nodes: int
    source: str
    comments: str


def _root():
    return resources.files("graphchem") / "catalog"


def catalog_entries() -> list[CatalogEntry]:
    manifest = json.loads((_root() / "manifest.json").read_text())
    return [CatalogEntry(**e) for e in manifest["entries"]]


def catalog_names() -> list[str]:
    return [e.name for e in catalog_entries()]


def catalog_text(name: str) -> tuple[str, CatalogEntry]:
    for entry in catalog_entries():
        if entry.name == name:
            return (_root() / entry.file).read_text(), entry
    raise MolError(f"no catalog entry named {name!r} (have {', '.join(catalog_names())})")


def load_catalog(name: str) -> tuple[Molecule, CatalogEntry]:
    text, entry = catalog_text(name)
    return parse_mol(text, family=entry.family), entry


def catalog_json() -> str:
    """The manifest plus inline mol text, as served to the playground."""
    out = []
    for entry in catalog_entries():
        text = (_root() / entry.file).read_text()
        out.append({"name": entry.name, "chemistry": entry.chemistry,
                    "family": entry.family, "expected_status": entry.expected_status,
                    "period": entry.period, "nodes": entry.nodes,
                    "source": entry.source, "comments": entry.comments,
                    "mol": text})
    return json.dumps({"entries": out}, indent=1, sort_keys=True)
