# topology/augment.py

"""
Communication-link design.

Two repairs, usually applied in this order:

    strongly_connect   add max(α, β) links so every sensor hears, directly or
                       not, from every other one
    augment_all        per sensor, run a min-cost maximum matching on the
                       slack bipartite graph and add one link per slack the
                       matching uses; earlier sensors' links are committed
                       before the next sensor is processed

Links are (transmitter, receiver) pairs of 0-based sensor indices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx
import numpy as np

from .errors import InconsistentMatchingError, InvalidSystemError, UnobservablePlantError
from .graph_core import (
    BipartiteGraph,
    Digraph,
    Matching,
    is_strongly_connected,
    maximum_matching,
    min_cost_maximum_matching,
    scc_decompose,
)
from .slack import Weighting, slack_transmitters
from .structural import SystemSpec, check_structural_observability, sensor_slack_bipartite

logger = logging.getLogger(__name__)

ORDERS = ('asc', 'desc')


@dataclass(frozen=True)
class AddedLink:
    transmitter   : int
    receiver      : int
    attributed_to : int | None   # sensor whose repair needed it; None for connectivity links
    cost          : float


@dataclass(frozen=True)
class StrongConnectResult:
    added : frozenset[tuple[int, int]]
    alpha : int   # source components
    beta  : int   # sink components
    cost  : float = 0.0


@dataclass(frozen=True, eq=False)
class AugmentationResult:
    """
    Output of augment_all.

    added_links  : links in the order they were committed
    total_links  : len(added_links)
    total_cost   : Σ cost over added_links (1 per link in binary mode)
    final_comm   : G*, the input graph plus every added link
    final_system : the input system rebuilt on G*
    sensor_costs : MCMM cost of each sensor at the moment it was processed
    """
    added_links  : list[AddedLink]
    total_links  : int
    total_cost   : float
    final_comm   : Digraph
    final_system : SystemSpec
    weighting    : Weighting
    order        : str
    sensor_costs : dict[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class IndependentCount:
    """Links each sensor needs when repaired alone on the input graph."""
    per_sensor_links : dict[int, int]
    per_sensor_cost  : dict[int, float]
    total_links      : int
    total_cost       : float


# ── Strong connectivity ───────────────────────────────────────────────────────

def sequential_pairing(i_set: Sequence[int], j_set: Sequence[int], m: Matching) -> frozenset[tuple[int, int]]:
    """
    Close a matching into one cycle.

    m holds (i, j) pairs with i from i_set and j from j_set. With the
    matched pairs ordered by their position in i_set as (i_1, j_1) ..
    (i_k, j_k), returns {(i_l, j_{l-1}) : l = 2..k} ∪ {(i_1, j_k)}.
    """
    if not m.edges:
        raise InconsistentMatchingError('sequential pairing needs a nonempty matching')
    i_pos = {v: p for p, v in enumerate(i_set)}
    j_members = set(j_set)
    for i, j in m.edges:
        if i not in i_pos or j not in j_members:
            raise InconsistentMatchingError(f'matching pair ({i}, {j}) is outside the index sets')

    pairs = sorted(m.edges, key=lambda e: i_pos[e[0]])
    k = len(pairs)
    closing = {(pairs[l][0], pairs[l - 1][1]) for l in range(1, k)}
    closing.add((pairs[0][0], pairs[k - 1][1]))
    return frozenset(closing)


def strongly_connect(g: Digraph, costs: np.ndarray | None = None) -> StrongConnectResult:
    """
    Minimum link set making g strongly connected, max(α, β) links.

    Sources are matched to sinks they reach; the matched pairs are closed into
    one cycle with sequential_pairing, forming an extended component E. Left
    over sinks are then paired with left over sources, and whatever remains
    is hooked to E (E -> source, or sink -> E).

    With `costs` (costs[receiver, transmitter]) every link picks the cheapest
    endpoints between the two components involved; otherwise the lowest-index
    vertex of each.
    """
    if g.vertex_count == 0:
        return StrongConnectResult(frozenset(), 0, 0)

    scc = scc_decompose(g)
    alpha, beta = len(scc.sources), len(scc.sinks)
    if scc.count == 1:
        return StrongConnectResult(frozenset(), alpha, beta)

    dag = scc.condensation()
    reach = BipartiteGraph(
        left  = scc.sources,
        right = scc.sinks,
        edges = frozenset(
            (u, t)
            for u in scc.sources
            for t in scc.sinks
            if t == u or t in nx.descendants(dag, u)
        ),
    )
    matched = maximum_matching(reach)

    # pairing closes sink_l -> source_{l-1}, i.e. (i=sink, j=source)
    sink_source = Matching(
        edges          = frozenset((t, u) for u, t in matched.edges),
        left_unmatched = frozenset(),
    )
    component_links = list(sequential_pairing(scc.sinks, scc.sources, sink_source))

    extended: set[int] = set()
    for u, t in matched.edges:
        extended |= scc.components[u] | scc.components[t]

    spare_sources = [u for u in scc.sources if u not in {a for a, _ in matched.edges}]
    spare_sinks = [t for t in scc.sinks if t not in {b for _, b in matched.edges}]
    paired = min(len(spare_sources), len(spare_sinks))

    links: set[tuple[int, int]] = set()
    for t, u in component_links:
        links.add(_cheapest(scc.components[t], scc.components[u], costs))
    for t, u in zip(spare_sinks[:paired], spare_sources[:paired]):
        links.add(_cheapest(scc.components[t], scc.components[u], costs))
    for u in spare_sources[paired:]:
        links.add(_cheapest(extended, scc.components[u], costs))
    for t in spare_sinks[paired:]:
        links.add(_cheapest(scc.components[t], extended, costs))

    total = float(sum(costs[r, t] for t, r in links)) if costs is not None else float(len(links))
    logger.info('Strong connectivity repaired | components=%d | alpha=%d | beta=%d | links=%d',
                scc.count, alpha, beta, len(links))
    return StrongConnectResult(frozenset(links), alpha, beta, total)


def _cheapest(transmitters, receivers, costs) -> tuple[int, int]:
    if costs is None:
        return min(transmitters), min(receivers)
    return min(
        ((t, r) for t in transmitters for r in receivers),
        key=lambda e: (float(costs[e[1], e[0]]), e[0], e[1]),
    )


# ── Per-sensor repair ─────────────────────────────────────────────────────────

def build_slack_bipartite(s: SystemSpec, i: int, weighting: Weighting | str = Weighting.BINARY) -> BipartiteGraph:
    graph, _ = _slack_graph(s, i, Weighting.parse(weighting))
    return graph


def augment_for_sensor(s: SystemSpec, i: int, weighting: Weighting | str = Weighting.BINARY) -> list[AddedLink]:
    """Links sensor i needs: one per slack edge in the MCMM of its slack graph."""
    weighting = Weighting.parse(weighting)
    graph, layout = _slack_graph(s, i, weighting)
    matching = min_cost_maximum_matching(graph)

    links = [
        AddedLink(
            transmitter   = j,
            receiver      = i,
            attributed_to = i,
            cost          = graph.weight((s.n + j, layout.slack_vertex(j))),
        )
        for j in slack_transmitters(matching, layout)
    ]
    if logger.isEnabledFor(logging.DEBUG):
        named = ' '.join(f'{graph.left_name(l)}-{graph.right_name(r)}' for l, r in matching.sorted_edges())
        logger.debug('Augment sensor | i=%d | links=%d | cost=%g | matching=%s',
                     i + 1, len(links), matching.cost, named)
    return links


def augment_all(s: SystemSpec, weighting: Weighting | str = Weighting.BINARY, order: str = 'asc') -> AugmentationResult:
    """
    Repair every sensor in turn, committing each sensor's links before the
    next one is examined.

    Raises
    ------
    UnobservablePlantError
        The plant is not structurally observable from all sensors together.
    """
    weighting = Weighting.parse(weighting)
    if order not in ORDERS:
        raise ValueError(f'order must be one of {ORDERS}, got {order!r}')
    if weighting is Weighting.COST and s.costs is None:
        raise InvalidSystemError('cost mode needs a cost matrix')

    plant = check_structural_observability(s.a_pattern, s.c_pattern)
    if not plant.ok:
        raise UnobservablePlantError(
            f'plant is structurally unobservable (unreached states '
            f'{sorted(k + 1 for k in plant.unreached)}, matching deficiency '
            f'{len(plant.witness_matching.left_unmatched)}); no communication link can fix it')
    if not is_strongly_connected(s.comm):
        logger.warning('Communication graph is not strongly connected; reachability may still fail')

    sensors = range(s.m) if order == 'asc' else range(s.m - 1, -1, -1)
    current = s
    added: list[AddedLink] = []
    sensor_costs: dict[int, float] = {}
    for i in sensors:
        links = augment_for_sensor(current, i, weighting)
        sensor_costs[i] = float(sum(link.cost for link in links))
        if links:
            current = current.with_links((link.transmitter, link.receiver) for link in links)
            added.extend(links)

    total_cost = float(sum(link.cost for link in added))
    logger.info('Augmentation complete | mode=%s | order=%s | links=%d | cost=%g',
                weighting.value, order, len(added), total_cost)
    return AugmentationResult(
        added_links  = added,
        total_links  = len(added),
        total_cost   = total_cost,
        final_comm   = current.comm,
        final_system = current,
        weighting    = weighting,
        order        = order,
        sensor_costs = sensor_costs,
    )


def independent_link_count(s: SystemSpec, weighting: Weighting | str = Weighting.BINARY) -> IndependentCount:
    """Upper bound on augment_all's totals: each sensor repaired on the untouched graph."""
    weighting = Weighting.parse(weighting)
    links: dict[int, int] = {}
    costs: dict[int, float] = {}
    for i in range(s.m):
        needed = augment_for_sensor(s, i, weighting)
        links[i] = len(needed)
        costs[i] = float(sum(link.cost for link in needed))
    return IndependentCount(
        per_sensor_links = links,
        per_sensor_cost  = costs,
        total_links      = sum(links.values()),
        total_cost       = float(sum(costs.values())),
    )


def _slack_graph(s: SystemSpec, i: int, weighting: Weighting):
    if weighting is Weighting.COST:
        if s.costs is None:
            raise InvalidSystemError('cost mode needs a cost matrix')
        weights = {j: float(s.costs[i, j]) for j in range(s.m)} if 0 <= i < s.m else {}
    else:
        weights = {j: 1.0 for j in range(s.m)}
    return sensor_slack_bipartite(s, i, weights)
