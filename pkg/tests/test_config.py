from pathlib import Path

import pytest

from hyperbethe.config import Command, ConfigRepository, OutputFormat, ProfileStore, RunConfig, SuiteName


def test_config_repository_roundtrip(tmp_path: Path) -> None:
    repo_path = tmp_path / "config.json"
    repo = ConfigRepository(path=repo_path)

    config = RunConfig(
        command=Command.GAUDIN,
        input_path=tmp_path / "preset.json",
        suite=SuiteName.GAUDIN,
        seed=42,
        tol_newton=1e-10,
        tol_verify=1e-6,
        max_newton_steps=80,
        good_draws=5,
        census_draws=2,
        output_format=OutputFormat.JSON,
        output_dir=tmp_path / "out",
    )

    store = ProfileStore()
    store.register_profile("strict", config)
    repo.save(store)

    loaded = repo.load()
    assert loaded.profiles["strict"] == config
    assert loaded.profiles["strict"].suite == SuiteName.GAUDIN


def test_saving_a_profile_overwrites_by_name(tmp_path: Path) -> None:
    repo = ConfigRepository(path=tmp_path / "cfg.json")
    repo.save_profile("quick", RunConfig(seed=1, good_draws=1, census_draws=0))
    repo.save_profile("quick", RunConfig(seed=3, good_draws=1, census_draws=0))
    repo.save_profile("other", RunConfig(seed=5))

    assert repo.load_profile("quick").seed == 3
    assert repo.load_profile("other").seed == 5
    with pytest.raises(KeyError):
        repo.load_profile("missing")


def test_string_values_are_coerced() -> None:
    config = RunConfig(command="critical", suite="bad", output_format="json")

    assert config.command is Command.CRITICAL
    assert config.suite is SuiteName.BAD
    assert config.output_format is OutputFormat.JSON


@pytest.mark.parametrize(
    "overrides",
    [{"seed": -1}, {"seed": 2**64}, {"tol_newton": 0}, {"tol_verify": -1e-3}, {"max_newton_steps": 0}, {"good_draws": -1}],
)
def test_invalid_settings_are_rejected(overrides) -> None:
    with pytest.raises(ValueError):
        RunConfig(**overrides)
