"""Table schemas, CSV/JSON writers, plot-data files and run manifests."""
from __future__ import annotations

import csv
import dataclasses
import enum
import hashlib
import json
import math
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__, kernels

DIGITS = 7


@dataclass(frozen=True)
class Column:
    name: str
    unit: str = ""
    fmt: str = "g"  # g: significant digits, d: integer, s: text, b: bool


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: tuple[Column, ...]

    @property
    def header(self) -> list[str]:
        return [c.name for c in self.columns]

    def format_row(self, row: Sequence[Any], digits: int = DIGITS) -> list[str]:
        if len(row) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} cells, got {len(row)}")
        return [format_cell(v, c.fmt, digits) for v, c in zip(row, self.columns)]

    def parse_row(self, cells: Sequence[str]) -> list[Any]:
        out = []
        for s, c in zip(cells, self.columns):
            if s == "":
                out.append(None)
            elif c.fmt == "d":
                out.append(int(s))
            elif c.fmt == "g":
                out.append(float(s))
            elif c.fmt == "b":
                out.append(s == "true")
            else:
                out.append(s)
        return out


def format_cell(v, fmt: str, digits: int = DIGITS) -> str:
    if v is None:
        return ""
    if fmt == "d":
        return str(int(v))
    if fmt == "b":
        return "true" if v else "false"
    if fmt == "g":
        v = float(v)
        if math.isnan(v):
            return "nan"
        return f"{v:.{digits}g}"
    return str(v)


def write_csv(path: str | Path, schema: TableSchema, rows: Iterable[Sequence[Any]],
              digits: int = DIGITS) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(schema.header)
        for r in rows:
            w.writerow(schema.format_row(r, digits))
    return path


def read_csv(path: str | Path, schema: TableSchema) -> list[list[Any]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        r = csv.reader(fh)
        head = next(r)
        if head != schema.header:
            raise ValueError(f"{path}: header {head} does not match {schema.header}")
        return [schema.parse_row(row) for row in r]


def _jsonable(o):
    if dataclasses.is_dataclass(o) and not isinstance(o, type):
        if hasattr(o, "to_dict"):
            return o.to_dict()
        return {f.name: getattr(o, f.name) for f in dataclasses.fields(o)}
    if isinstance(o, enum.Enum):
        return o.value
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def to_json(obj) -> str:
    return json.dumps(obj, default=_jsonable, indent=2, sort_keys=True, allow_nan=True)


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(obj) + "\n", encoding="utf-8")
    return path


def emit_plot_data(columns: dict[str, Sequence[float]], target: str | Path, *,
                   title: str, figure: str = "", digits: int = DIGITS) -> Path:
    """Whitespace-separated columns with ``#`` header comments naming the axes."""
    names = list(columns)
    n = {len(v) for v in columns.values()}
    if len(n) > 1:
        raise ValueError("plot columns differ in length")
    target = Path(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8") as fh:
        fh.write(f"# {title}\n")
        if figure:
            fh.write(f"# figure: {figure}\n")
        fh.write("# columns: " + " ".join(names) + "\n")
        for row in zip(*columns.values()):
            fh.write(" ".join(format_cell(v, "g", digits) if isinstance(v, (float, np.floating))
                              else str(v) for v in row) + "\n")
    return target


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """Everything needed to rerun a command; the only file carrying timestamps."""

    command: str
    config: dict
    seed: int = 0
    partition: str = ""
    tool_version: str = __version__
    backend: str = kernels.BACKEND
    python: str = platform.python_version()
    started: str = field(default_factory=_now)
    finished: str = ""
    outputs: list[tuple[str, str]] = field(default_factory=list)

    def record(self, path: str | Path) -> None:
        p = Path(path)
        self.outputs.append((p.name, sha256_file(p)))

    def write(self, directory: str | Path) -> Path:
        self.finished = _now()
        path = Path(directory) / f"manifest-{self.command}.json"
        return write_json(path, dataclasses.asdict(self))

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        d = json.loads(Path(path).read_text(encoding="utf-8"))
        d["outputs"] = [tuple(o) for o in d.get("outputs", [])]
        return cls(**d)
