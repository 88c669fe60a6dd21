from __future__ import annotations

from pathlib import Path

import yaml

from stratakit.dsl import load_document, with_field
from stratakit.models import CatalogEntry, InputDocument


class ExampleCatalog:
    def __init__(self, entries: list[CatalogEntry], root: Path | None = None):
        self._entries = {entry.name: entry for entry in entries}
        self.root = root or Path(".")

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ExampleCatalog":
        catalog_path = Path(path)
        if not catalog_path.exists():
            raise FileNotFoundError(f"Example catalog not found: {catalog_path}")

        raw = yaml.safe_load(catalog_path.read_text(encoding="utf-8"))
        if not raw:
            return cls(entries=[], root=catalog_path.parent)

        entries_data = raw.get("examples", [])
        entries = [CatalogEntry.model_validate(item) for item in entries_data]
        return cls(entries=entries, root=catalog_path.parent)

    def get(self, name: str) -> CatalogEntry | None:
        return self._entries.get(name)

    @property
    def names(self) -> list[str]:
        return list(self._entries)

    def document(self, name: str, field_name: str | None = None) -> InputDocument:
        entry = self._entries.get(name)
        if entry is None:
            raise KeyError(f"unknown example {name!r}; available: {', '.join(self._entries)}")
        document = load_document(self.root / entry.file)
        return with_field(document, field_name or entry.field)
