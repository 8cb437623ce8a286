from __future__ import annotations

from pathlib import Path

import pytest

from hyperbethe.serialization import ArrangementInput, load_arrangement

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def triangle() -> ArrangementInput:
    return load_arrangement(DATA_DIR / "triangle.json")


@pytest.fixture
def pair() -> ArrangementInput:
    return load_arrangement(DATA_DIR / "pair.json")


@pytest.fixture
def fourlines() -> ArrangementInput:
    return load_arrangement(DATA_DIR / "fourlines.json")


@pytest.fixture
def fourlines_generic() -> ArrangementInput:
    return load_arrangement(DATA_DIR / "fourlines_generic.json")
