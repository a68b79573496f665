"""Shared fixtures for cell_params tests."""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any
import pytest


@pytest.fixture
def write_document(tmp_path: Path) -> Callable[[dict[str, Any]], Path]:
    """Return a helper that writes a parameter document into ``tmp_path``."""

    def write(document: dict[str, Any], name: str = "params.json") -> Path:
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f)
        return path

    return write
