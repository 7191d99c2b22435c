"""JSON and CSV serialization for solve results and sweep tables.

Floats are written with 17 significant digits, so every value round-trips
bit-exactly through the loader.  Output is deterministic: identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Union

import numpy as np

from .analysis import SweepRow, SweepTable
from .energy import EnergyBreakdown
from .grid import ModelParams, Profile, make_grid
from .minimize import SolveResult


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return "null"
    return format(float(x), ".17g")


def _encode(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  "{key}": {_encode(val, indent + 1).lstrip()}'
            for key, val in obj.items()
        )
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        parts = ", ".join(_encode(v, 0) for v in obj)
        return f"{pad}[{parts}]"
    if isinstance(obj, (bool, np.bool_)):
        return pad + ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + _fmt(float(obj))
    if obj is None:
        return pad + "null"
    return pad + json.dumps(obj)


def result_to_dict(result: SolveResult) -> dict:
    p = result.profile
    return {
        "kind": "solve_result",
        "params": {"nu": p.params.nu, "h": p.params.h},
        "grid": {"half_length": p.grid.half_length, "n_points": p.grid.n_points},
        "profile": list(p.values),
        "energy": {
            "exchange": result.energy.exchange,
            "anisotropy": result.energy.anisotropy,
            "stray": result.energy.stray,
            "total": result.energy.total,
        },
        "residual_sup": result.residual_sup,
        "iterations": result.iterations,
        "converged": result.converged,
        "tail_amplitude": result.tail_amplitude,
    }


def table_to_csv(table: SweepTable) -> str:
    lines = [",".join(SweepTable.COLUMNS)]
    for r in table.rows:
        lines.append(",".join([
            _fmt(r.nu), _fmt(r.h), _fmt(r.energy_total), _fmt(r.wall_width),
            _fmt(r.amplitude_multipole), _fmt(r.amplitude_tailfit),
            _fmt(r.residual_sup), "true" if r.converged else "false",
        ]))
    return "\n".join(lines) + "\n"


def table_to_dict(table: SweepTable) -> dict:
    return {
        "kind": "sweep_table",
        "rows": [
            {col: getattr(r, col) for col in SweepTable.COLUMNS}
            for r in table.rows
        ],
    }


def emit(obj: Union[SolveResult, SweepTable], format: str, path: str) -> None:
    """Write a solve result or sweep table to `path`.

    Solve results serialize to JSON only; sweep tables to JSON or CSV.

    Raises:
        ValueError: unsupported (object, format) combination.
        OSError: unwritable destination, message names the path.
    """
    if format not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {format!r}")
    if isinstance(obj, SolveResult):
        if format != "json":
            raise ValueError("solve results serialize to JSON only")
        text = _encode(result_to_dict(obj)) + "\n"
    elif isinstance(obj, SweepTable):
        text = (table_to_csv(obj) if format == "csv"
                else _encode(table_to_dict(obj)) + "\n")
    else:
        raise ValueError(f"cannot emit object of type {type(obj).__name__}")
    try:
        with open(path, "w") as f:
            f.write(text)
    except OSError as exc:
        raise OSError(f"cannot write to {path!r}: {exc}") from exc


def _nan_if_none(x):
    return math.nan if x is None else x


def load_result(path: str) -> SolveResult:
    """Reconstruct a SolveResult from its JSON form; bit-exact round trip."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as exc:
        raise OSError(f"cannot read from {path!r}: {exc}") from exc
    if doc.get("kind") != "solve_result":
        raise ValueError(f"{path!r} does not contain a solve result")
    grid = make_grid(doc["grid"]["half_length"], doc["grid"]["n_points"])
    params = ModelParams(doc["params"]["nu"], doc["params"]["h"])
    profile = Profile(grid, np.array(doc["profile"], dtype=float), params)
    e = doc["energy"]
    energy = EnergyBreakdown(e["exchange"], e["anisotropy"], e["stray"], e["total"])
    return SolveResult(
        profile=profile,
        energy=energy,
        residual_sup=doc["residual_sup"],
        iterations=doc["iterations"],
        converged=doc["converged"],
        tail_amplitude=_nan_if_none(doc["tail_amplitude"]),
    )


def load_table(path: str) -> SweepTable:
    """Read a sweep table back from CSV or JSON."""
    try:
        with open(path) as f:
            text = f.read()
    except OSError as exc:
        raise OSError(f"cannot read from {path!r}: {exc}") from exc
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("kind") != "sweep_table":
            raise ValueError(f"{path!r} does not contain a sweep table")
        rows = [
            SweepRow(**{col: (_nan_if_none(row[col]) if col != "converged"
                              else row[col])
                        for col in SweepTable.COLUMNS})
            for row in doc["rows"]
        ]
        return SweepTable(rows=rows)
    lines = [ln for ln in text.splitlines() if ln]
    header = lines[0].split(",")
    if tuple(header) != SweepTable.COLUMNS:
        raise ValueError(f"{path!r} has unexpected CSV header {header}")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        rows.append(SweepRow(
            nu=float(cells[0]), h=float(cells[1]),
            energy_total=_parse_float(cells[2]),
            wall_width=_parse_float(cells[3]),
            amplitude_multipole=_parse_float(cells[4]),
            amplitude_tailfit=_parse_float(cells[5]),
            residual_sup=_parse_float(cells[6]),
            converged=cells[7] == "true",
        ))
    return SweepTable(rows=rows)


def _parse_float(cell: str) -> float:
    return math.nan if cell == "null" else float(cell)
