import json
from pathlib import Path

import pytest

from couplab.config import configure_logging


@pytest.fixture(autouse=True, scope="session")
def _quiet_logging():
    configure_logging("WARNING", "console")


@pytest.fixture
def write_config(tmp_path: Path):
    """Write a sweep config document and return its path."""

    def _write(doc: dict, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(doc, indent=2))
        return path

    return _write
