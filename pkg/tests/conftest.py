import sys
from pathlib import Path

import pytest

# Repository root on the path, as gini_main.py does
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from gini.experiments import derive_stream  # noqa: E402


@pytest.fixture
def rng():
    return derive_stream(20240601, 99)


@pytest.fixture
def make_rng():
    def factory(*key: int):
        return derive_stream(20240601, 99, *key)
    return factory


@pytest.fixture
def write_values(tmp_path):
    """Write values one per line and return the path"""
    def writer(values, name: str = "values.txt") -> Path:
        path = tmp_path / name
        path.write_text("".join(f"{float(v)!r}\n" for v in values), encoding="utf-8")
        return path
    return writer
