"""Reading arrangement files and scalar lists, with located errors."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from .arrangement import ArrangementFamily, FiberPoint, as_fiber
from .errors import FamilyError, InputError
from .exact import parse_rational, to_rational


def read_json(path: Path) -> Dict[str, object]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path.name}: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise InputError(f"{path.name}: top level must be a JSON object", line=1, column=1)
    return data


def parse_scalar(value: object, key: str, *, allow_float: bool = False) -> object:
    if isinstance(value, bool):
        raise InputError("booleans are not scalars", path=key)
    if isinstance(value, int):
        return to_rational(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except InputError as exc:
            raise InputError(exc.message, path=key) from exc
    if isinstance(value, float):
        if allow_float:
            return value
        raise InputError(f"exact rational required, write {value!r} as a \"p/q\" string", path=key)
    raise InputError(f"expected a scalar, got {type(value).__name__}", path=key)


def scalar_list(value: object, key: str, *, allow_float: bool = False) -> List[object]:
    if not isinstance(value, list):
        raise InputError("expected a list", path=key)
    return [parse_scalar(entry, f"{key}[{i}]", allow_float=allow_float) for i, entry in enumerate(value)]


def parse_point(text: str) -> List[object]:
    """Comma separated scalars as given on the command line; decimals become floats."""

    values: List[object] = []
    for i, piece in enumerate(part.strip() for part in text.split(",")):
        if not piece:
            raise InputError(f"empty coordinate in {text!r}", path=f"at[{i}]")
        try:
            values.append(parse_rational(piece))
        except InputError:
            try:
                values.append(float(piece))
            except ValueError as exc:
                raise InputError(f"not a number: {piece!r}", path=f"at[{i}]") from exc
    return values


@dataclass(frozen=True)
class ArrangementInput:
    family: ArrangementFamily
    z: Optional[FiberPoint] = None
    source: Optional[Path] = None

    @property
    def stem(self) -> str:
        return self.source.stem if self.source is not None else "arrangement"


def arrangement_from_dict(data: Dict[str, object], *, source: Optional[Path] = None) -> ArrangementInput:
    for key in ("k", "n", "B", "a"):
        if key not in data:
            raise InputError(f"missing key {key!r}", path=key)
    rows_data = data["B"]
    if not isinstance(rows_data, list):
        raise InputError("B must be a list of rows", path="B")
    rows = [scalar_list(row, f"B[{j}]") for j, row in enumerate(rows_data)]
    weights = scalar_list(data["a"], "a")
    if len(rows) != data["n"]:
        raise InputError(f"n = {data['n']} but B has {len(rows)} rows", path="n")
    if any(len(row) != data["k"] for row in rows):
        raise InputError(f"every row of B must have k = {data['k']} entries", path="B")
    labels = data.get("labels", [])
    if not isinstance(labels, list):
        raise InputError("labels must be a list", path="labels")
    try:
        family = ArrangementFamily(tuple(tuple(row) for row in rows), tuple(weights), tuple(labels))
    except FamilyError as exc:
        raise FamilyError(exc.message, path=exc.path or "B") from exc
    z = None
    if data.get("z") is not None:
        z = as_fiber(FiberPoint.of(scalar_list(data["z"], "z", allow_float=True)), family)
    return ArrangementInput(family, z, source)


def load_arrangement(path: Path) -> ArrangementInput:
    return arrangement_from_dict(read_json(path), source=Path(path))


__all__ = [
    "read_json",
    "parse_scalar",
    "scalar_list",
    "parse_point",
    "ArrangementInput",
    "arrangement_from_dict",
    "load_arrangement",
]
