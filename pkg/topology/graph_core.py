# topology/graph_core.py

"""
Directed-graph and bipartite-matching primitives.

Conventions
-----------
Digraph edges are stored tail -> head, "u points to v". For a state digraph
that means "x_u appears in the update of x_v"; for the communication graph
it means "sensor u transmits to sensor v".

Bipartite graphs keep two separate index spaces. The bipartite
representation of a digraph puts every vertex on both sides: left copy =
edge tails, right copy = edge heads, (u, v) present iff u -> v exists.

Matchings are deterministic: among all optimal matchings the one with the
lexicographically smallest sorted (left, right) edge list is returned.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InconsistentMatchingError, InvalidWeightsError

logger = logging.getLogger(__name__)

# X = plant state, Z = sensor state, Y = output, S = slack
VERTEX_CLASSES = ('X', 'Z', 'Y', 'S')

Edge = tuple[int, int]


# ── Graph types ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Digraph:
    """
    vertex_count  : vertices are 0 .. vertex_count-1
    edges         : set of (u, v) pairs, u points to v
    vertex_labels : optional class tag per vertex, one of VERTEX_CLASSES
    """
    vertex_count  : int
    edges         : frozenset[Edge] = frozenset()
    vertex_labels : tuple[str, ...] | None = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError(f'vertex_count must be >= 0, got {self.vertex_count}')

        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(
                    f'edge ({u}, {v}) out of range for {self.vertex_count} vertices')
        object.__setattr__(self, 'edges', edges)

        if self.vertex_labels is not None:
            labels = tuple(self.vertex_labels)
            if len(labels) != self.vertex_count:
                raise ValueError('vertex_labels must tag every vertex')
            bad = sorted(set(labels) - set(VERTEX_CLASSES))
            if bad:
                raise ValueError(f'unknown vertex classes {bad}')
            object.__setattr__(self, 'vertex_labels', labels)

    def successors(self, v: int) -> list[int]:
        return sorted(h for t, h in self.edges if t == v)

    def predecessors(self, v: int) -> list[int]:
        return sorted(t for t, h in self.edges if h == v)

    def with_edges(self, extra: Iterable[Edge]) -> 'Digraph':
        return Digraph(self.vertex_count, self.edges | frozenset(extra), self.vertex_labels)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def ancestors(self, v: int) -> frozenset[int]:
        """Every vertex with a directed path to v, v itself included."""
        return frozenset(nx.ancestors(self.to_networkx(), v)) | {v}

    def vertex_name(self, v: int) -> str:
        """'x3', 'z1', ... (1-based within the vertex class), or 'v<k>' untagged."""
        if self.vertex_labels is None:
            return f'v{v}'
        tag = self.vertex_labels[v]
        rank = sum(1 for k in range(v + 1) if self.vertex_labels[k] == tag)
        return f'{tag.lower()}{rank}'


@dataclass(frozen=True)
class BipartiteGraph:
    """
    left, right : vertex ids, each side its own index space
    edges       : (l, r) pairs
    weights     : optional edge -> nonnegative weight; missing edges weigh 0
    left_names, right_names : optional display names for reports and logs
    """
    left        : tuple[int, ...]
    right       : tuple[int, ...]
    edges       : frozenset[Edge] = frozenset()
    weights     : Mapping[Edge, float] = field(default_factory=dict)
    left_names  : Mapping[int, str] = field(default_factory=dict)
    right_names : Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        left = tuple(sorted(set(int(v) for v in self.left)))
        right = tuple(sorted(set(int(v) for v in self.right)))
        edges = frozenset((int(l), int(r)) for l, r in self.edges)
        left_set, right_set = set(left), set(right)
        for l, r in edges:
            if l not in left_set or r not in right_set:
                raise ValueError(f'bipartite edge ({l}, {r}) has an unknown endpoint')
        stray = [e for e in self.weights if e not in edges]
        if stray:
            raise ValueError(f'weights given for non-edges {sorted(stray)[:5]}')
        object.__setattr__(self, 'left', left)
        object.__setattr__(self, 'right', right)
        object.__setattr__(self, 'edges', edges)

    def weight(self, edge: Edge) -> float:
        return float(self.weights.get(edge, 0.0))

    def neighbours(self, l: int) -> list[int]:
        return sorted(r for a, r in self.edges if a == l)

    def left_name(self, l: int) -> str:
        return self.left_names.get(l, str(l))

    def right_name(self, r: int) -> str:
        return self.right_names.get(r, str(r))


@dataclass(frozen=True)
class Matching:
    """
    edges          : (l, r) pairs, no vertex used twice on either side
    left_unmatched : left vertices not covered by edges, U_L(M)
    cost           : sum of edge weights (0 for unweighted graphs)
    """
    edges          : frozenset[Edge]
    left_unmatched : frozenset[int]
    cost           : float = 0.0

    def __post_init__(self):
        lefts = [l for l, _ in self.edges]
        rights = [r for _, r in self.edges]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise InconsistentMatchingError('matching reuses a vertex')
        if set(lefts) & set(self.left_unmatched):
            raise InconsistentMatchingError('left_unmatched overlaps the matched vertices')

    @property
    def size(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class SccDecomposition:
    """
    components   : vertex sets, ordered by their smallest vertex
    component_of : vertex -> component index
    dag_edges    : condensation edges (component, component)
    sources      : components without incoming dag edges
    sinks        : components without outgoing dag edges
    """
    components   : tuple[frozenset[int], ...]
    component_of : Mapping[int, int]
    dag_edges    : frozenset[Edge]
    sources      : tuple[int, ...]
    sinks        : tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def isolated(self) -> tuple[int, ...]:
        sinks = set(self.sinks)
        return tuple(k for k in self.sources if k in sinks)

    def condensation(self) -> nx.DiGraph:
        dag = nx.DiGraph()
        dag.add_nodes_from(range(self.count))
        dag.add_edges_from(sorted(self.dag_edges))
        return dag


@dataclass(frozen=True)
class MatchingEnumeration:
    matchings : list[Matching]
    truncated : bool


@dataclass(frozen=True)
class MatchingDecomposition:
    """Vertex sequences in edge order; every path ends at a left-unmatched vertex."""
    paths  : list[tuple[int, ...]]
    cycles : list[tuple[int, ...]]


# ── Constructors ──────────────────────────────────────────────────────────────

def bipartite_of(g: Digraph) -> BipartiteGraph:
    """Bipartite representation: both sides are copies of g's vertices."""
    names = {v: g.vertex_name(v) for v in range(g.vertex_count)}
    return BipartiteGraph(
        left        = tuple(range(g.vertex_count)),
        right       = tuple(range(g.vertex_count)),
        edges       = g.edges,
        left_names  = names,
        right_names = names,
    )


# ── Strongly connected components ─────────────────────────────────────────────

def scc_decompose(g: Digraph) -> SccDecomposition:
    graph = g.to_networkx()
    components = tuple(sorted(
        (frozenset(c) for c in nx.strongly_connected_components(graph)), key=min))
    component_of = {v: k for k, comp in enumerate(components) for v in comp}

    dag_edges = frozenset(
        (component_of[u], component_of[v])
        for u, v in g.edges
        if component_of[u] != component_of[v]
    )
    has_in = {b for _, b in dag_edges}
    has_out = {a for a, _ in dag_edges}

    return SccDecomposition(
        components   = components,
        component_of = component_of,
        dag_edges    = dag_edges,
        sources      = tuple(k for k in range(len(components)) if k not in has_in),
        sinks        = tuple(k for k in range(len(components)) if k not in has_out),
    )


def is_strongly_connected(g: Digraph) -> bool:
    if g.vertex_count <= 1:
        return True
    return scc_decompose(g).count == 1


# ── Matchings ─────────────────────────────────────────────────────────────────

def maximum_matching(b: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching; weights are ignored for the choice."""
    pairs = _lexicographic_optimum(b.left, b.right, set(b.edges), {})
    return _as_matching(b, pairs)


def min_cost_maximum_matching(b: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching of minimum total weight (MCMM)."""
    _check_weights(b)
    pairs = _lexicographic_optimum(b.left, b.right, set(b.edges), dict(b.weights))
    return _as_matching(b, pairs)


def optimum_value(b: BipartiteGraph, weighted: bool = True) -> tuple[int, float]:
    """(cardinality, cost) of an optimal matching, without the tie-break work."""
    weights = dict(b.weights) if weighted else {}
    if weighted:
        _check_weights(b)
    size, cost, _ = _solve(b.left, b.right, set(b.edges), weights)
    return size, cost


def enumerate_maximum_matchings(b: BipartiteGraph, cap: int = 1000) -> MatchingEnumeration:
    """
    All maximum matchings, at most `cap` of them.

    Meant for small graphs (test oracles); cost is exponential. `truncated`
    is set when more than `cap` maximum matchings exist.
    """
    target, _, _ = _solve(b.left, b.right, set(b.edges), {})
    lefts = list(b.left)
    adjacency = {l: b.neighbours(l) for l in lefts}

    found: list[list[Edge]] = []
    current: list[Edge] = []
    used_right: set[int] = set()
    state = {'truncated': False}

    def search(k: int) -> bool:
        # returns False once the search must stop
        if len(current) + (len(lefts) - k) < target:
            return True
        if k == len(lefts):
            if len(found) == cap:
                state['truncated'] = True
                return False
            found.append(list(current))
            return True

        l = lefts[k]
        for r in adjacency[l]:
            if r in used_right:
                continue
            used_right.add(r)
            current.append((l, r))
            keep_going = search(k + 1)
            current.pop()
            used_right.discard(r)
            if not keep_going:
                return False
        return search(k + 1)

    search(0)

    if state['truncated']:
        logger.warning('Matching enumeration truncated | cap=%d', cap)
    return MatchingEnumeration(
        matchings = [_as_matching(b, pairs) for pairs in found],
        truncated = state['truncated'],
    )


def matching_decomposition(g: Digraph, m: Matching) -> MatchingDecomposition:
    """
    Read a matching of bipartite_of(g) back as digraph edges and split it into
    vertex-disjoint elementary paths and cycles. Paths end at the
    left-unmatched vertices, so their count equals |U_L(M)|.
    """
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for u, v in sorted(m.edges):
        if (u, v) not in g.edges:
            raise InconsistentMatchingError(f'matching edge ({u}, {v}) is not a digraph edge')
        succ[u] = v
        pred[v] = u

    unmatched = [v for v in range(g.vertex_count) if v not in succ]
    if m.left_unmatched != frozenset(unmatched):
        raise InconsistentMatchingError(
            'left_unmatched does not match the vertices without a matching edge')

    paths: list[tuple[int, ...]] = []
    on_path: set[int] = set()
    for end in unmatched:
        walk = [end]
        v = end
        while v in pred:
            v = pred[v]
            walk.append(v)
        walk.reverse()
        on_path.update(walk)
        paths.append(tuple(walk))

    cycles: list[tuple[int, ...]] = []
    for start in sorted(succ):
        if start in on_path:
            continue
        cycle = [start]
        on_path.add(start)
        v = succ[start]
        while v != start:
            cycle.append(v)
            on_path.add(v)
            v = succ[v]
        cycles.append(tuple(cycle))

    return MatchingDecomposition(paths=paths, cycles=cycles)


# ── Assignment machinery ──────────────────────────────────────────────────────

def _check_weights(b: BipartiteGraph) -> None:
    for edge, w in b.weights.items():
        if not math.isfinite(w) or w < 0:
            raise InvalidWeightsError(f'weight {w!r} on edge {edge} must be finite and >= 0')


def _solve(left, right, edges: set[Edge], weights: Mapping[Edge, float]):
    """
    One assignment solve on a square matrix padded with a sentinel cost.
    The sentinel exceeds (max weight x dimension + 1) so cardinality always
    dominates cost. Returns (cardinality, cost, pairs).
    """
    if not left or not right or not edges:
        return 0, 0.0, []

    size = max(len(left), len(right))
    row = {l: k for k, l in enumerate(left)}
    col = {r: k for k, r in enumerate(right)}
    max_w = max((weights.get(e, 0.0) for e in edges), default=0.0)
    sentinel = max_w * size + 2.0

    cost = np.full((size, size), sentinel)
    for l, r in edges:
        cost[row[l], col[r]] = weights.get((l, r), 0.0)

    rows, cols = linear_sum_assignment(cost)
    pairs = [
        (left[i], right[j])
        for i, j in zip(rows, cols)
        if i < len(left) and j < len(right) and (left[i], right[j]) in edges
    ]
    total = float(sum(weights.get(p, 0.0) for p in pairs))
    return len(pairs), total, pairs


def _lexicographic_optimum(left, right, edges: set[Edge], weights) -> list[Edge]:
    """
    Fix left vertices in ascending order to their smallest right partner that
    still admits an optimal (cardinality, cost); left unmatched comes last.
    """
    best_size, best_cost, witness = _solve(left, right, edges, weights)
    if best_size == 0:
        return []

    chosen: list[Edge] = []
    for l in left:
        options = sorted(r for a, r in edges if a == l)
        mate = dict(witness)
        for r in options:
            trial = {(a, c) for a, c in edges if a != l and c != r}
            trial.add((l, r))
            if mate.get(l) == r:
                edges = trial
                chosen.append((l, r))
                break
            size, cost, pairs = _solve(left, right, trial, weights)
            if size == best_size and math.isclose(cost, best_cost, rel_tol=1e-9, abs_tol=1e-9):
                edges = trial
                witness = pairs
                chosen.append((l, r))
                break
        else:
            # the witness already leaves l unmatched, otherwise its edge would have been taken
            edges = {(a, c) for a, c in edges if a != l}

    return chosen


def _as_matching(b: BipartiteGraph, pairs: list[Edge]) -> Matching:
    matched = {l for l, _ in pairs}
    return Matching(
        edges          = frozenset(pairs),
        left_unmatched = frozenset(l for l in b.left if l not in matched),
        cost           = float(sum(b.weight(p) for p in pairs)),
    )
