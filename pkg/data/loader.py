"""
Module and Ideal Data Loader.

Loads and validates kE-modules, subgroup embeddings and ideals from JSON
documents. Every document carries a "schema" field; the current version is 1.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from engine.group_modules import FdModule, SubgroupEmbedding
from engine.ideals import Ideal


SCHEMA_VERSION = 1
FIXTURE_DIR = Path(__file__).parent / "fixtures"


def with_schema(document: Dict[str, Any]) -> Dict[str, Any]:
    """The document with the schema field in front."""
    return {"schema": SCHEMA_VERSION, **document}


def module_document(m: FdModule) -> Dict[str, Any]:
    return with_schema(m.to_json())


def dump_document(document: Dict[str, Any]) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


class DataLoader:
    """Loads JSON documents describing modules, embeddings and ideals."""

    def __init__(self, source: Union[Path, str]):
        """
        Initialize the data loader.

        Args:
            source: Path to a JSON document, or a fixture name under
                    data/fixtures (with or without the .json suffix)

        Raises:
            FileNotFoundError: If neither the path nor the fixture exists
        """
        path = Path(source)
        if not path.exists():
            fixture = FIXTURE_DIR / path.with_suffix(".json").name
            if not fixture.exists():
                raise FileNotFoundError(f"Data file not found: {source}")
            path = fixture
        self.path = path

    def load_document(self) -> Dict[str, Any]:
        """
        Raises:
            ValueError: If the file is not a JSON object of schema version 1
        """
        with open(self.path, "r", encoding="utf-8") as f:
            try:
                document = json.load(f)
            except json.JSONDecodeError as e:
                raise ValueError(f"Invalid JSON in {self.path}: {e}") from e
        if not isinstance(document, dict):
            raise ValueError(f"{self.path} must hold a JSON object")
        version = document.get("schema", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValueError(f"{self.path} has schema {version!r}, expected {SCHEMA_VERSION}")
        return document

    def load_module(self) -> FdModule:
        """
        Raises:
            ValueError: If the document is not a valid module
        """
        return FdModule.from_json(self.load_document())

    def load_embedding(self) -> SubgroupEmbedding:
        """An embedding document carries its prime next to the matrix."""
        document = self.load_document()
        if "p" not in document:
            raise ValueError(f"Embedding in {self.path} is missing 'p'")
        return SubgroupEmbedding.from_json(document, int(document["p"]))

    def load_ideal(self) -> Ideal:
        return Ideal.from_json(self.load_document())
