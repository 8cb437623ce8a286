from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Optional


class Command(str, Enum):
    CIRCUITS = "circuits"
    SING = "sing"
    HAMILTONIANS = "hamiltonians"
    CRITICAL = "critical"
    VERIFY = "verify"
    GAUDIN = "gaudin"


class SuiteName(str, Enum):
    ALL = "all"
    GOOD = "good"
    BAD = "bad"
    RANDOM = "random"
    GAUDIN = "gaudin"


class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"


SEED_LIMIT = 2**64


@dataclass
class RunConfig:
    command: Command = Command.VERIFY
    input_path: Optional[Path] = None
    suite: SuiteName = SuiteName.ALL
    seed: int = 0
    tol_newton: float = 1e-12
    tol_verify: float = 1e-8
    max_newton_steps: int = 60
    good_draws: int = 20
    census_draws: int = 10
    output_format: OutputFormat = OutputFormat.TABLE
    output_dir: Optional[Path] = None

    def __post_init__(self) -> None:
        self.command = Command(self.command)
        self.suite = SuiteName(self.suite)
        self.output_format = OutputFormat(self.output_format)
        if not 0 <= self.seed < SEED_LIMIT:
            raise ValueError("seed must be a non-negative 64-bit integer")
        if self.tol_newton <= 0 or self.tol_verify <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_newton_steps < 1:
            raise ValueError("max_newton_steps must be >= 1")
        if self.good_draws < 0 or self.census_draws < 0:
            raise ValueError("draw counts must be >= 0")
        if self.input_path is not None:
            self.input_path = Path(self.input_path).expanduser()
        if self.output_dir is not None:
            self.output_dir = Path(self.output_dir).expanduser()

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["command"] = self.command.value
        data["suite"] = self.suite.value
        data["output_format"] = self.output_format.value
        data["input_path"] = str(self.input_path) if self.input_path is not None else None
        data["output_dir"] = str(self.output_dir) if self.output_dir is not None else None
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "RunConfig":
        return cls(
            command=Command(data.get("command", Command.VERIFY.value)),
            input_path=Path(data["input_path"]) if data.get("input_path") else None,
            suite=SuiteName(data.get("suite", SuiteName.ALL.value)),
            seed=int(data.get("seed", 0)),
            tol_newton=float(data.get("tol_newton", 1e-12)),
            tol_verify=float(data.get("tol_verify", 1e-8)),
            max_newton_steps=int(data.get("max_newton_steps", 60)),
            good_draws=int(data.get("good_draws", 20)),
            census_draws=int(data.get("census_draws", 10)),
            output_format=OutputFormat(data.get("output_format", OutputFormat.TABLE.value)),
            output_dir=Path(data["output_dir"]) if data.get("output_dir") else None,
        )


@dataclass
class ProfileStore:
    profiles: Dict[str, RunConfig] = field(default_factory=dict)

    def register_profile(self, name: str, config: RunConfig) -> None:
        self.profiles[name] = config

    def to_dict(self) -> Dict[str, object]:
        return {
            "profiles": {name: cfg.to_dict() for name, cfg in self.profiles.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "ProfileStore":
        profiles_cfg = {name: RunConfig.from_dict(cfg) for name, cfg in data.get("profiles", {}).items()}
        return cls(profiles=profiles_cfg)


class ConfigRepository:
    """Persists named run profiles to the filesystem."""

    def __init__(self, path: Optional[Path] = None) -> None:
        default_path = Path.home() / ".config" / "hyperbethe" / "config.json"
        self.path = path or default_path

    def load(self) -> ProfileStore:
        if not self.path.exists():
            return ProfileStore()
        data = json.loads(self.path.read_text(encoding="utf-8"))
        return ProfileStore.from_dict(data)

    def save(self, store: ProfileStore) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(store.to_dict(), indent=2)
        self.path.write_text(payload, encoding="utf-8")

    def load_profile(self, name: str) -> RunConfig:
        profiles = self.load().profiles
        if name not in profiles:
            raise KeyError(f"no profile named {name!r} in {self.path}")
        return profiles[name]

    def save_profile(self, name: str, config: RunConfig) -> None:
        store = self.load()
        store.register_profile(name, config)
        self.save(store)
