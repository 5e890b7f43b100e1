"""Deterministic JSON/CSV serialization of the package's record dataclasses."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
import typing
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

from .errors import IoError


@dataclass(frozen=True)
class OutputSpec:
    format: str = "json"
    destination: str | None = None  # None means standard output
    precision: int = 12

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.format!r}")
        if not 6 <= self.precision <= 17:
            raise ValueError("precision must lie in [6, 17]")


# -- records <-> plain data ----------------------------------------------------

def _float_token(x: float, precision: int | None):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if precision is None:
        return x
    return float(f"{x:.{precision}g}")


def to_plain(obj: Any, precision: int | None = None) -> Any:
    """Dataclass -> dict (declared field order), enums -> values, non-finite -> strings."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name), precision) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return _float_token(obj, precision)
    if isinstance(obj, (list, tuple)):
        return [to_plain(v, precision) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return to_plain(obj.item(), precision)
    return obj


def _parse_float(v) -> float:
    if isinstance(v, str):
        return float(v)  # accepts "inf", "-inf", "nan"
    return float(v)


def _build(tp, value):
    origin = typing.get_origin(tp)
    if dataclasses.is_dataclass(tp):
        return from_plain(tp, value)
    if isinstance(tp, type) and issubclass(tp, Enum):
        return tp(value)
    if tp is float:
        return _parse_float(value)
    if tp is int:
        return int(value)
    if origin is tuple:
        args = typing.get_args(tp)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_build(args[0], v) for v in value)
        return tuple(_build(a, v) for a, v in zip(args, value))
    if origin is list:
        (arg,) = typing.get_args(tp)
        return [_build(arg, v) for v in value]
    return value


def from_plain(cls, data: dict):
    """Inverse of :func:`to_plain` for a dataclass type."""
    hints = typing.get_type_hints(cls)
    kwargs = {f.name: _build(hints[f.name], data[f.name])
              for f in dataclasses.fields(cls) if f.init}
    return cls(**kwargs)


# -- emit ------------------------------------------------------------------------

def _flatten(prefix: str, value, out: dict):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out[prefix] = value


def _csv_cell(v, precision: int) -> str:
    if isinstance(v, float):
        tok = _float_token(v, None)
        return tok if isinstance(tok, str) else f"{v:.{precision}g}"
    return str(v)


def csv_header(record_type) -> list[str]:
    names = []
    hints = typing.get_type_hints(record_type)
    for f in dataclasses.fields(record_type):
        tp = hints[f.name]
        if dataclasses.is_dataclass(tp):
            names.extend(f"{f.name}.{sub}" for sub in csv_header(tp))
        elif typing.get_origin(tp) is tuple:
            names.extend(f"{f.name}.{i}" for i in range(len(typing.get_args(tp))))
        else:
            names.append(f.name)
    return names


def render(records, spec: OutputSpec, record_type=None) -> str:
    """Serialize a record or list of records to text (newline-terminated)."""
    if spec.format == "json":
        return json.dumps(to_plain(records, spec.precision), indent=2) + "\n"

    rows: Iterable = records if isinstance(records, (list, tuple)) else [records]
    rows = list(rows)
    if record_type is None:
        if not rows:
            raise ValueError("an empty CSV needs an explicit record type for its header")
        record_type = type(rows[0])
    header = csv_header(record_type)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in rows:
        flat: dict = {}
        _flatten("", to_plain(rec), flat)
        writer.writerow([_csv_cell(flat[h], spec.precision) for h in header])
    return buf.getvalue()


def emit(records, spec: OutputSpec, record_type=None) -> str:
    text = render(records, spec, record_type)
    if spec.destination is None:
        sys.stdout.write(text)
    else:
        try:
            Path(spec.destination).write_text(text)
        except OSError as exc:
            raise IoError(f"cannot write {spec.destination}: {exc}") from exc
    return text
