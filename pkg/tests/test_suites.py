from __future__ import annotations

from pathlib import Path

import pytest

from hyperbethe.config import RunConfig
from hyperbethe.errors import FiberError
from hyperbethe.gaudin.data import load_preset
from hyperbethe.pipeline import SuiteContext
from hyperbethe.serialization import ArrangementInput
from hyperbethe.hamiltonians import SYMMETRY_TAG
from hyperbethe.suites import PAIRING_TAG, POSITIVE_TAG, BadFiberSuite, GaudinSuite, GoodFiberSuite, RandomSuite


def _context(**overrides) -> SuiteContext:
    return SuiteContext(config=RunConfig(**overrides))


def test_good_fiber_suite_on_the_pair(pair: ArrangementInput) -> None:
    outcome = GoodFiberSuite(pair).run(_context())

    assert outcome.passed, [c for c in outcome.checks if not c.passed]
    assert outcome.results["dim_sing"] == 1
    assert outcome.results["sing_eigenvalues"] == {"1": 5, "2": -5}
    assert outcome.results["exact_critical"][0]["t"] == ["2/5"]
    pairing = [c for c in outcome.checks if c.tag == PAIRING_TAG]
    assert len(pairing) == 2
    assert all(c.passed for c in pairing)
    assert [c.name for c in outcome.checks if c.tag == POSITIVE_TAG] == ["S on Sing V"]


def test_good_fiber_suite_on_the_triangle(triangle: ArrangementInput) -> None:
    outcome = GoodFiberSuite(triangle).run(_context())

    assert outcome.passed
    assert outcome.results["chi"] == 1
    assert outcome.results["exact_critical"][0]["norm"] == 243


def test_good_fiber_suite_rejects_bad_fibers(fourlines: ArrangementInput) -> None:
    with pytest.raises(FiberError):
        GoodFiberSuite(fourlines).run(_context())


def test_bad_fiber_suite(fourlines: ArrangementInput) -> None:
    outcome = BadFiberSuite(fourlines).run(_context())

    assert outcome.passed, [c for c in outcome.checks if not c.passed]
    assert outcome.results["vanishing_circuits"] == ["{1,2,3}"]
    assert outcome.results["dim_flag"] == 5
    assert outcome.results["dim_sing"] == 2
    assert outcome.results["conservation"]["nearby"] == 3
    (positive,) = [c for c in outcome.checks if c.tag == POSITIVE_TAG]
    assert positive.passed and positive.binding
    (symmetry,) = [c for c in outcome.checks if c.tag == SYMMETRY_TAG]
    assert symmetry.passed and symmetry.measured == {"circuits": 4}
    assert [c.passed for c in outcome.checks if c.tag == PAIRING_TAG] == [True]


def test_random_suite_is_seeded() -> None:
    first = RandomSuite().run(_context(seed=7, good_draws=2, census_draws=1))
    second = RandomSuite().run(_context(seed=7, good_draws=2, census_draws=1))

    assert first.passed
    assert [c.name for c in first.checks] == [c.name for c in second.checks]
    assert first.results["census"] == second.results["census"]


@pytest.mark.parametrize(
    "name",
    ["gaudin_sl2_n2.json", "gaudin_sl2_n3.json", "gaudin_gl2_n2.json", "gaudin_sl2_verma.json"],
)
def test_gaudin_suite_passes_on_presets(data_dir: Path, name: str) -> None:
    outcome = GaudinSuite(load_preset(data_dir / name)).run(_context())

    assert outcome.passed, [c for c in outcome.checks if not c.passed]
    assert outcome.results["bethe"]
    assert outcome.results["spectra"]["dim_geometric"] == outcome.results["spectra"]["dim_gaudin"]


def test_gaudin_suite_reports_gl2_operators(data_dir: Path) -> None:
    outcome = GaudinSuite(load_preset(data_dir / "gaudin_gl2_n2.json")).run(_context())

    assert len(outcome.results["dphi"]) == 1
    assert set(outcome.results["b2_residues"]) == {"1", "2"}
