# topology/structural.py

"""
Structural representations of a sensor network and the two observability
tests built on them: plant observability from all sensors, and
distributed-decentralized (DD) observability from every single sensor.

Indices are 0-based everywhere in this module. Reports add 1 for display.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import networkx as nx
import numpy as np

from .errors import InvalidSystemError, InvalidWeightsError
from .graph_core import BipartiteGraph, Digraph, Matching, maximum_matching, min_cost_maximum_matching
from .slack import SlackLayout, slack_bipartite, slack_layout, slack_transmitters

logger = logging.getLogger(__name__)

PLANT_UNOBSERVABLE = 'plant unobservable'


# ── Patterns and systems ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class SparsityPattern:
    rows     : int
    cols     : int
    nonzeros : frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidSystemError(f'pattern shape must be nonnegative, got {self.rows}x{self.cols}')
        cells = frozenset((int(r), int(c)) for r, c in self.nonzeros)
        for r, c in cells:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise InvalidSystemError(
                    f'nonzero ({r + 1}, {c + 1}) outside a {self.rows}x{self.cols} pattern')
        object.__setattr__(self, 'nonzeros', cells)

    @classmethod
    def from_dense(cls, matrix, shape: tuple[int, int] | None = None) -> 'SparsityPattern':
        """Nonzero mask of a dense matrix. `shape` pins the size of empty inputs."""
        arr = np.asarray(matrix, dtype=float)
        if arr.size == 0:
            rows, cols = shape if shape is not None else (arr.shape[0] if arr.ndim == 2 else 0, 0)
            return cls(rows, cols)
        if arr.ndim != 2:
            raise InvalidSystemError(f'expected a 2-D matrix, got shape {arr.shape}')
        if shape is not None and arr.shape != tuple(shape):
            raise InvalidSystemError(f'matrix is {arr.shape[0]}x{arr.shape[1]}, expected {shape[0]}x{shape[1]}')
        rows, cols = np.nonzero(arr)
        return cls(arr.shape[0], arr.shape[1], frozenset(zip(rows.tolist(), cols.tolist())))

    @classmethod
    def identity(cls, k: int) -> 'SparsityPattern':
        return cls(k, k, frozenset((d, d) for d in range(k)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'SparsityPattern':
        return cls(rows, cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=int)
        for r, c in self.nonzeros:
            out[r, c] = 1
        return out

    def row(self, r: int) -> list[int]:
        return sorted(c for rr, c in self.nonzeros if rr == r)


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """
    One plant, its sensors and their communication graph.

    n          : plant dimension
    m          : sensor count
    a_pattern  : n x n pattern of A
    c_pattern  : m x n pattern of C, row i is sensor i's measurement c_i
    comm       : digraph on the m sensors, edge (j, i) = sensor j transmits to i
    costs      : optional m x m Γ, costs[i, j] = γ_ij = price of link j -> i
    a_values, c_values, w_values : optional numeric matrices on the patterns
    """
    n         : int
    m         : int
    a_pattern : SparsityPattern
    c_pattern : SparsityPattern
    comm      : Digraph
    costs     : np.ndarray | None = None
    a_values  : np.ndarray | None = None
    c_values  : np.ndarray | None = None
    w_values  : np.ndarray | None = None

    def __post_init__(self):
        n, m = self.n, self.m
        if (self.a_pattern.rows, self.a_pattern.cols) != (n, n):
            raise InvalidSystemError(
                f'A pattern is {self.a_pattern.rows}x{self.a_pattern.cols}, expected {n}x{n}')
        if (self.c_pattern.rows, self.c_pattern.cols) != (m, n):
            raise InvalidSystemError(
                f'C pattern is {self.c_pattern.rows}x{self.c_pattern.cols}, expected {m}x{n}')
        if self.comm.vertex_count != m:
            raise InvalidSystemError(
                f'communication graph has {self.comm.vertex_count} sensors, expected {m}')
        for k in range(m):
            if (k, k) not in self.comm.edges:
                raise InvalidSystemError(f'self-loop required at sensor {k + 1}')

        object.__setattr__(self, 'costs', self._normalised_costs())
        object.__setattr__(self, 'a_values', _congruent('A', self.a_values, self.a_pattern))
        object.__setattr__(self, 'c_values', _congruent('C', self.c_values, self.c_pattern))
        object.__setattr__(self, 'w_values', _congruent('W', self.w_values, self.w_pattern))

    def _normalised_costs(self) -> np.ndarray | None:
        if self.costs is None:
            return None
        gamma = np.array(self.costs, dtype=float, copy=True)
        if gamma.shape != (self.m, self.m):
            raise InvalidSystemError(f'cost matrix is {gamma.shape}, expected {self.m}x{self.m}')
        bad = np.argwhere(~np.isfinite(gamma))
        if bad.size:
            i, j = bad[0]
            raise InvalidWeightsError(f'non-finite cost at ({i + 1}, {j + 1})')
        bad = np.argwhere(gamma < 0)
        if bad.size:
            i, j = bad[0]
            raise InvalidWeightsError(f'negative cost at ({i + 1}, {j + 1}): {gamma[i, j]:g}')

        # existing links (self-loops included) cost nothing
        for t, r in sorted(self.comm.edges):
            if gamma[r, t] != 0:
                logger.warning('Cost zeroed on existing link | transmitter=%d | receiver=%d | was=%g',
                               t + 1, r + 1, gamma[r, t])
                gamma[r, t] = 0.0
        gamma.setflags(write=False)
        return gamma

    # --- derived views ---

    @property
    def w_pattern(self) -> SparsityPattern:
        """Pattern of W(G): (i, j) nonzero iff sensor j transmits to sensor i."""
        return SparsityPattern(self.m, self.m, frozenset((r, t) for t, r in self.comm.edges))

    def in_neighbors(self, i: int) -> list[int]:
        """N_i^-: sensors transmitting to i, i itself included."""
        self._check_sensor(i)
        return self.comm.predecessors(i)

    def link_cost(self, receiver: int, transmitter: int) -> float:
        if self.costs is None:
            raise InvalidSystemError('cost mode needs a cost matrix')
        return float(self.costs[receiver, transmitter])

    def with_links(self, links: Iterable[tuple[int, int]]) -> 'SystemSpec':
        """New spec with (transmitter, receiver) links added; their γ drops to 0."""
        links = [(int(t), int(r)) for t, r in links]
        comm = self.comm.with_edges(links)
        costs = None
        if self.costs is not None:
            costs = np.array(self.costs, copy=True)
            for t, r in links:
                costs[r, t] = 0.0
        w_values = self.w_values
        if w_values is not None and comm.edges != self.comm.edges:
            logger.debug('Dropping pinned W values | reason=communication pattern changed')
            w_values = None
        return SystemSpec(
            n=self.n, m=self.m,
            a_pattern=self.a_pattern, c_pattern=self.c_pattern,
            comm=comm, costs=costs,
            a_values=self.a_values, c_values=self.c_values, w_values=w_values,
        )

    def _check_sensor(self, i: int) -> None:
        if not 0 <= i < self.m:
            raise InvalidSystemError(f'sensor index {i + 1} outside 1..{self.m}')


def _congruent(name: str, values, pattern: SparsityPattern) -> np.ndarray | None:
    if values is None:
        return None
    arr = np.array(values, dtype=float, copy=True)
    if arr.size == 0 and pattern.rows * pattern.cols == 0:
        arr = arr.reshape(pattern.rows, pattern.cols)
    if arr.shape != (pattern.rows, pattern.cols):
        raise InvalidSystemError(
            f'{name} values are {arr.shape}, expected {pattern.rows}x{pattern.cols}')
    if not np.all(np.isfinite(arr)):
        raise InvalidSystemError(f'{name} values must be finite')
    mismatch = np.argwhere((arr != 0) != (pattern.to_dense() != 0))
    if mismatch.size:
        r, c = mismatch[0]
        raise InvalidSystemError(
            f'{name} values disagree with the {name} pattern at ({r + 1}, {c + 1})')
    arr.setflags(write=False)
    return arr


# ── Digraph builders ──────────────────────────────────────────────────────────

def state_digraph(a: SparsityPattern) -> Digraph:
    """D(Ā): edge x_u -> x_v iff Ā[v, u] != 0."""
    if not a.is_square:
        raise InvalidSystemError(f'state pattern must be square, got {a.rows}x{a.cols}')
    return Digraph(a.rows, frozenset((c, r) for r, c in a.nonzeros), ('X',) * a.rows)


def state_output_digraph(a: SparsityPattern, c: SparsityPattern) -> Digraph:
    """D(Ā, C̄): D(Ā) plus x_k -> y_i iff C̄[i, k] != 0. Output y_i is vertex n+i."""
    if c.cols != a.rows:
        raise InvalidSystemError(f'C has {c.cols} columns but A has {a.rows} states')
    plant = state_digraph(a)
    n = a.rows
    edges = plant.edges | {(k, n + i) for i, k in c.nonzeros}
    return Digraph(n + c.rows, edges, ('X',) * n + ('Y',) * c.rows)


def augmented_pattern(s: SystemSpec) -> SparsityPattern:
    """Pattern of Ã(G) = [Ā, 0; C̄, W(G)]."""
    n = s.n
    cells = set(s.a_pattern.nonzeros)
    cells |= {(n + i, k) for i, k in s.c_pattern.nonzeros}
    cells |= {(n + i, n + j) for i, j in s.w_pattern.nonzeros}
    return SparsityPattern(n + s.m, n + s.m, frozenset(cells))


def augmented_digraph(s: SystemSpec) -> Digraph:
    """D(Ã(G)) over X ∪ Z; x_k = k, z_j = n+j."""
    pattern = augmented_pattern(s)
    return Digraph(pattern.rows, frozenset((c, r) for r, c in pattern.nonzeros),
                   ('X',) * s.n + ('Z',) * s.m)


def sensor_output_pattern(s: SystemSpec, i: int) -> SparsityPattern:
    """Pattern of C̃_i: row 0 = [c_i | 0], then one selector row per j in N_i^-."""
    neighbours = s.in_neighbors(i)
    cells = {(0, k) for k in s.c_pattern.row(i)}
    cells |= {(1 + p, s.n + j) for p, j in enumerate(neighbours)}
    return SparsityPattern(1 + len(neighbours), s.n + s.m, frozenset(cells))


def sensor_slack_bipartite(s: SystemSpec, i: int, slack_weight: dict[int, float]) -> tuple[BipartiteGraph, SlackLayout]:
    layout = slack_layout(s.n, s.m, i, s.in_neighbors(i))
    graph = slack_bipartite(augmented_digraph(s), layout, s.c_pattern.row(i), slack_weight)
    return graph, layout


# ── Observability tests ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class StructuralResult:
    ok               : bool
    unreached        : frozenset[int]   # states with no path to any output
    witness_matching : Matching         # maximum matching of B(Ā, C̄), left = X


@dataclass(frozen=True)
class SensorCondition:
    sensor          : int
    condition_i_ok  : bool            # z_i reachable from every vertex of D(Ã(G))
    condition_ii_ok : bool            # zero-cost saturating slack matching exists
    deficit_links   : tuple[int, ...] # transmitters j whose link j -> i would be needed
    mcmm_cost       : float
    saturated       : bool = True     # every vertex of V is matched

    @property
    def ok(self) -> bool:
        return self.condition_i_ok and self.condition_ii_ok


@dataclass(frozen=True)
class DdReport:
    per_sensor : list[SensorCondition]
    overall_ok : bool
    plant      : StructuralResult
    reason     : str | None = None

    def failing_sensors(self) -> list[int]:
        return [cond.sensor for cond in self.per_sensor if not cond.ok]

    @property
    def condition_i_ok(self) -> bool:
        return all(cond.condition_i_ok for cond in self.per_sensor)


def check_structural_observability(a: SparsityPattern, c: SparsityPattern) -> StructuralResult:
    """
    Plant observability from all outputs: every state reaches an output in
    D(Ā, C̄), and B(Ā, C̄) has a maximum matching covering every state.
    """
    graph = state_output_digraph(a, c)
    n = a.rows

    reaching: set[int] = set()
    nxg = graph.to_networkx()
    for y in range(n, graph.vertex_count):
        reaching |= nx.ancestors(nxg, y)
    unreached = frozenset(k for k in range(n) if k not in reaching)

    bipartite = BipartiteGraph(
        left  = tuple(range(n)),
        right = tuple(range(graph.vertex_count)),
        edges = graph.edges,
    )
    witness = maximum_matching(bipartite)
    ok = not unreached and not witness.left_unmatched

    logger.debug('Plant check | ok=%s | unreached=%d | deficiency=%d',
                 ok, len(unreached), len(witness.left_unmatched))
    return StructuralResult(ok=ok, unreached=unreached, witness_matching=witness)


def check_dd_observability(s: SystemSpec) -> DdReport:
    """
    Per-sensor test of both DD conditions.

    Condition (ii) is decided by the binary slack matching: a saturating
    matching of cost 0 is exactly a maximum matching of B(Ã(G)) whose
    left-unmatched set lies in N_i^- and avoids the plant states.
    """
    plant = check_structural_observability(s.a_pattern, s.c_pattern)
    augmented = augmented_digraph(s)
    everything = frozenset(range(augmented.vertex_count))

    per_sensor: list[SensorCondition] = []
    for i in range(s.m):
        reach_ok = augmented.ancestors(s.n + i) == everything

        graph, layout = sensor_slack_bipartite(s, i, {j: 1.0 for j in range(s.m)})
        matching = min_cost_maximum_matching(graph)
        deficit = tuple(sorted(slack_transmitters(matching, layout)))
        saturated = not matching.left_unmatched
        per_sensor.append(SensorCondition(
            sensor          = i,
            condition_i_ok  = reach_ok,
            condition_ii_ok = saturated and matching.cost == 0,
            deficit_links   = deficit,
            mcmm_cost       = matching.cost,
            saturated       = saturated,
        ))
        logger.debug('Sensor check | i=%d | reach=%s | cost=%g | deficit=%s',
                     i + 1, reach_ok, matching.cost, [j + 1 for j in deficit])

    overall = plant.ok and all(cond.ok for cond in per_sensor)
    reason = None if plant.ok else PLANT_UNOBSERVABLE
    if reason:
        logger.info('DD check flagged | reason=%s', reason)
    return DdReport(per_sensor=per_sensor, overall_ok=overall, plant=plant, reason=reason)
