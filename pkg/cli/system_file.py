# cli/system_file.py

"""
System files: JSON documents describing one plant, its sensors and their
communication graph.

    {
      "schema_version": "1",
      "name": "fig1",
      "n": 5, "m": 4,
      "a": [[0, 1, 0, 0, 0], ...],                      dense 0/1, or
      "a": {"format": "edges", "edges": [[1, 2], ...]}  1-based tail -> head
      "c": [[1, 0, 0, 0, 0], ...],                      dense m x n, or
      "c": {"format": "edges", "edges": [[state, sensor], ...]}
      "comm": [[1, 0, 1, 0], ...],                      adj[i][j] = 1: sensor j transmits to i
      "costs": [[0, 2, ...], ...],                      optional, multiples of cost_unit
      "cost_unit": 1.0, "cost_unit_label": "c",
      "a_values": ..., "c_values": ..., "w_values": ...,  optional numeric matrices
      "seed": 7,
      "expected": {...},                                optional, used by `demo`
      "notes": "..."
    }

All coordinates in messages are 1-based.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from topology.errors import SystemFileError
from topology.graph_core import Digraph
from topology.structural import SparsityPattern, SystemSpec

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1'


@dataclass
class SystemFile:
    spec            : SystemSpec
    name            : str = ''
    cost_unit       : float = 1.0
    cost_unit_label : str = 'c'
    seed            : int | None = None
    expected        : dict[str, Any] | None = None
    notes           : str | None = None
    source          : Path | None = None
    raw             : dict[str, Any] = field(default_factory=dict, repr=False)


# ── Reading ───────────────────────────────────────────────────────────────────

def load_system_file(path: str | Path) -> SystemFile:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except FileNotFoundError:
        raise SystemFileError(f'{path}: file not found') from None
    except json.JSONDecodeError as exc:
        raise SystemFileError(f'{path}: not valid JSON (line {exc.lineno}, column {exc.colno})') from None
    if not isinstance(data, dict):
        raise SystemFileError(f'{path}: top level must be a JSON object')

    sf = system_file_from_dict(data)
    sf.source = path
    logger.info('System loaded | file=%s | n=%d | m=%d', path.name, sf.spec.n, sf.spec.m)
    return sf


def parse_system(path: str | Path) -> SystemSpec:
    return load_system_file(path).spec


def system_file_from_dict(data: dict[str, Any]) -> SystemFile:
    version = str(data.get('schema_version', SCHEMA_VERSION))
    if version != SCHEMA_VERSION:
        raise SystemFileError(f'unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}')

    n = _count(data, 'n')
    m = _count(data, 'm')

    a_pattern = _pattern(data.get('a'), 'a', n, n, edge_reader=lambda u, v: (v, u))
    c_pattern = _pattern(data.get('c'), 'c', m, n, edge_reader=lambda state, sensor: (sensor, state))
    adjacency = _dense(data.get('comm'), 'comm', m, m, binary=True)
    comm = Digraph(m, frozenset((j, i) for i, j in zip(*np.nonzero(adjacency))))

    cost_unit = float(data.get('cost_unit', 1.0))
    if not np.isfinite(cost_unit) or cost_unit <= 0:
        raise SystemFileError(f'cost_unit must be a positive number, got {data.get("cost_unit")!r}')
    costs = None
    if data.get('costs') is not None:
        costs = _dense(data['costs'], 'costs', m, m) * cost_unit

    spec = SystemSpec(
        n=n, m=m,
        a_pattern=a_pattern,
        c_pattern=c_pattern,
        comm=comm,
        costs=costs,
        a_values=_optional_dense(data, 'a_values', n, n),
        c_values=_optional_dense(data, 'c_values', m, n),
        w_values=_optional_dense(data, 'w_values', m, m),
    )

    seed = data.get('seed')
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise SystemFileError(f'seed must be a nonnegative integer, got {seed!r}')

    return SystemFile(
        spec            = spec,
        name            = str(data.get('name', '')),
        cost_unit       = cost_unit,
        cost_unit_label = str(data.get('cost_unit_label', 'c')),
        seed            = seed,
        expected        = data.get('expected'),
        notes           = data.get('notes'),
        raw             = data,
    )


def _count(data: dict, key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise SystemFileError(f'"{key}" must be a nonnegative integer, got {value!r}')
    return value


def _dense(value, key: str, rows: int, cols: int, binary: bool = False) -> np.ndarray:
    if not isinstance(value, list):
        raise SystemFileError(f'"{key}" must be a list of {rows} rows')
    if len(value) != rows:
        raise SystemFileError(f'"{key}" has {len(value)} rows, expected {rows}')
    out = np.zeros((rows, cols))
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise SystemFileError(f'"{key}" row {r + 1} has {got} entries, expected {cols}')
        for c, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise SystemFileError(f'"{key}" entry ({r + 1}, {c + 1}) is not a number: {entry!r}')
            if binary and entry not in (0, 1):
                raise SystemFileError(f'"{key}" entry ({r + 1}, {c + 1}) must be 0 or 1, got {entry!r}')
            out[r, c] = float(entry)
    return out


def _optional_dense(data: dict, key: str, rows: int, cols: int) -> np.ndarray | None:
    if data.get(key) is None:
        return None
    return _dense(data[key], key, rows, cols)


def _pattern(value, key: str, rows: int, cols: int, edge_reader) -> SparsityPattern:
    if isinstance(value, dict):
        if value.get('format') != 'edges':
            raise SystemFileError(f'"{key}" object must have "format": "edges"')
        cells = set()
        for k, pair in enumerate(value.get('edges', [])):
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(p, int) for p in pair)):
                raise SystemFileError(f'"{key}" edge {k + 1} must be a pair of integers, got {pair!r}')
            r, c = edge_reader(pair[0] - 1, pair[1] - 1)
            if not (0 <= r < rows and 0 <= c < cols):
                raise SystemFileError(f'"{key}" edge {k + 1} {pair} is out of range')
            cells.add((r, c))
        return SparsityPattern(rows, cols, frozenset(cells))
    return SparsityPattern.from_dense(_dense(value, key, rows, cols, binary=True), shape=(rows, cols))


# ── Writing ───────────────────────────────────────────────────────────────────

def spec_to_dict(
    spec: SystemSpec,
    name: str = '',
    cost_unit: float = 1.0,
    cost_unit_label: str = 'c',
    seed: int | None = None,
    notes: str | None = None,
) -> dict[str, Any]:
    """Dense JSON form of a spec. `expected` is never written."""
    adjacency = np.zeros((spec.m, spec.m), dtype=int)
    for t, r in spec.comm.edges:
        adjacency[r, t] = 1

    data: dict[str, Any] = {
        'schema_version'  : SCHEMA_VERSION,
        'name'            : name,
        'n'               : spec.n,
        'm'               : spec.m,
        'a'               : spec.a_pattern.to_dense().tolist(),
        'c'               : spec.c_pattern.to_dense().tolist(),
        'comm'            : adjacency.tolist(),
        'cost_unit'       : cost_unit,
        'cost_unit_label' : cost_unit_label,
    }
    if spec.costs is not None:
        data['costs'] = _plain(np.asarray(spec.costs) / cost_unit)
    for key in ('a_values', 'c_values', 'w_values'):
        values = getattr(spec, key)
        if values is not None:
            data[key] = _plain(values)
    if seed is not None:
        data['seed'] = seed
    if notes:
        data['notes'] = notes
    return data


def dump_system(path: str | Path, spec: SystemSpec, **meta) -> Path:
    path = Path(path)
    path.write_text(json.dumps(spec_to_dict(spec, **meta), indent=2) + '\n', encoding='utf-8')
    logger.info('System written | file=%s', path)
    return path


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _plain(matrix) -> list[list[float | int]]:
    """Integers stay integers so the JSON reads like a hand-written file."""
    return [[int(v) if float(v).is_integer() else float(v) for v in row] for row in np.asarray(matrix)]
