from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Optional


@dataclass(frozen=True)
class CheckEvent:
    timestamp: datetime
    tag: str
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ProgressEvent:
    timestamp: datetime
    suite_index: int
    total_suites: Optional[int]
    suite_name: str
    message: str = ""


@dataclass(frozen=True)
class WarningEvent:
    timestamp: datetime
    suite_name: str
    tag: str
    message: str


@dataclass(frozen=True)
class ErrorEvent:
    timestamp: datetime
    suite_name: str
    error_type: str
    message: str


@dataclass(frozen=True)
class StateChangeEvent:
    timestamp: datetime
    state: str


Event = CheckEvent | ProgressEvent | WarningEvent | ErrorEvent | StateChangeEvent
