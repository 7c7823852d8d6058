# testing_stuff/test_graph_core.py

import numpy as np
import pytest

from oracles import all_maximum_matchings, best_matching_value, random_bipartite, random_digraph
from topology.errors import InconsistentMatchingError, InvalidWeightsError
from topology.graph_core import (
    BipartiteGraph,
    Digraph,
    Matching,
    bipartite_of,
    enumerate_maximum_matchings,
    is_strongly_connected,
    matching_decomposition,
    maximum_matching,
    min_cost_maximum_matching,
    optimum_value,
    scc_decompose,
)
from topology.structural import augmented_digraph


def complete_bipartite(k: int, weights=None) -> BipartiteGraph:
    edges = frozenset((l, r) for l in range(k) for r in range(k))
    return BipartiteGraph(tuple(range(k)), tuple(range(k)), edges, weights or {})


# ── Types ─────────────────────────────────────────────────────────────────────

def test_digraph_rejects_out_of_range_edge():
    with pytest.raises(ValueError):
        Digraph(2, frozenset({(0, 2)}))


def test_digraph_neighbours_and_ancestors():
    g = Digraph(4, frozenset({(0, 1), (1, 2), (3, 2)}))
    assert g.successors(1) == [2]
    assert g.predecessors(2) == [1, 3]
    assert g.ancestors(2) == frozenset({0, 1, 2, 3})
    assert g.ancestors(0) == frozenset({0})


def test_vertex_names_follow_classes():
    g = Digraph(3, frozenset(), ('X', 'X', 'Z'))
    assert [g.vertex_name(v) for v in range(3)] == ['x1', 'x2', 'z1']
    assert Digraph(1).vertex_name(0) == 'v0'


def test_bipartite_rejects_weight_on_non_edge():
    with pytest.raises(ValueError):
        BipartiteGraph((0,), (0, 1), frozenset({(0, 0)}), {(0, 1): 1.0})


def test_matching_rejects_reused_vertex():
    with pytest.raises(InconsistentMatchingError):
        Matching(frozenset({(0, 1), (1, 1)}), frozenset())


# ── Strongly connected components ─────────────────────────────────────────────

def test_scc_decomposition_sources_and_sinks():
    g = Digraph(4, frozenset({(0, 1), (1, 0), (1, 2)}))
    scc = scc_decompose(g)
    assert scc.components == (frozenset({0, 1}), frozenset({2}), frozenset({3}))
    assert scc.dag_edges == frozenset({(0, 1)})
    assert scc.sources == (0, 2)
    assert scc.sinks == (1, 2)
    assert scc.isolated == (2,)
    assert scc.condensation().number_of_edges() == 1


def test_strong_connectivity_edge_cases():
    assert is_strongly_connected(Digraph(0))
    assert is_strongly_connected(Digraph(1))
    assert not is_strongly_connected(Digraph(2))
    assert is_strongly_connected(Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)})))


@pytest.mark.parametrize('seed', range(20))
def test_scc_components_partition_vertices(seed):
    rng = np.random.default_rng(seed)
    g = random_digraph(rng, int(rng.integers(1, 15)), 0.15)
    scc = scc_decompose(g)
    covered = sorted(v for comp in scc.components for v in comp)
    assert covered == list(range(g.vertex_count))
    assert all(a != b for a, b in scc.dag_edges)


# ── Matchings ─────────────────────────────────────────────────────────────────

def test_complete_bipartite_matches_everything():
    m = maximum_matching(complete_bipartite(4))
    assert m.size == 4
    assert m.left_unmatched == frozenset()


def test_tie_break_is_lexicographic():
    assert maximum_matching(complete_bipartite(2)).sorted_edges() == [(0, 0), (1, 1)]

    weights = {(0, 0): 1.0, (1, 1): 1.0, (0, 1): 0.0, (1, 0): 0.0}
    m = min_cost_maximum_matching(complete_bipartite(2, weights))
    assert m.sorted_edges() == [(0, 1), (1, 0)]
    assert m.cost == 0.0


def test_cardinality_dominates_cost():
    # the cheap edge would block a perfect matching
    b = BipartiteGraph((0, 1), (0, 1), frozenset({(0, 0), (0, 1), (1, 0)}),
                       {(0, 0): 0.0, (0, 1): 5.0, (1, 0): 5.0})
    m = min_cost_maximum_matching(b)
    assert m.size == 2
    assert m.cost == 10.0


def test_all_zero_weights_give_zero_cost():
    m = min_cost_maximum_matching(complete_bipartite(3, {}))
    assert (m.size, m.cost) == (3, 0.0)


@pytest.mark.parametrize('weight', [-1.0, float('nan'), float('inf')])
def test_bad_weights_rejected(weight):
    b = BipartiteGraph((0,), (0,), frozenset({(0, 0)}), {(0, 0): weight})
    with pytest.raises(InvalidWeightsError):
        min_cost_maximum_matching(b)


def test_empty_graph_has_empty_matching():
    b = BipartiteGraph((0, 1), (0,))
    m = maximum_matching(b)
    assert m.size == 0
    assert m.left_unmatched == frozenset({0, 1})


@pytest.mark.parametrize('seed', range(40))
def test_maximum_matching_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    b = random_bipartite(rng, 7, 7, 0.3, weighted=False)
    m = maximum_matching(b)
    assert m.size == best_matching_value(b, weighted=False)[0]
    assert m.edges <= b.edges
    assert len(m.left_unmatched) == len(b.left) - m.size


@pytest.mark.parametrize('batch', range(4))
def test_mcmm_matches_oracle(batch):
    for seed in range(batch * 50, batch * 50 + 50):
        rng = np.random.default_rng(seed)
        left, right = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        b = random_bipartite(rng, left, right, 0.5)
        m = min_cost_maximum_matching(b)
        assert (m.size, m.cost) == best_matching_value(b), f'seed {seed}'
        assert optimum_value(b) == (m.size, m.cost)
        assert m.cost == sum(b.weight(e) for e in m.edges)


def test_mcmm_is_deterministic(rng):
    b = random_bipartite(rng, 6, 6, 0.6, max_weight=2)
    assert min_cost_maximum_matching(b) == min_cost_maximum_matching(b)


# ── Enumeration ───────────────────────────────────────────────────────────────

@pytest.mark.parametrize('seed', range(15))
def test_enumeration_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    b = random_bipartite(rng, 5, 5, 0.5, weighted=False)
    found = enumerate_maximum_matchings(b)
    assert not found.truncated
    assert {m.edges for m in found.matchings} == set(all_maximum_matchings(b))


def test_enumeration_truncates_at_cap(caplog):
    b = complete_bipartite(3)
    assert len(enumerate_maximum_matchings(b).matchings) == 6

    capped = enumerate_maximum_matchings(b, cap=4)
    assert capped.truncated
    assert len(capped.matchings) == 4
    assert 'truncated' in caplog.text

    exact = enumerate_maximum_matchings(b, cap=6)
    assert not exact.truncated


# ── Path / cycle decomposition ────────────────────────────────────────────────

def test_decomposition_of_a_path():
    g = Digraph(3, frozenset({(0, 1), (1, 2)}))
    m = Matching(frozenset({(0, 1), (1, 2)}), frozenset({2}))
    parts = matching_decomposition(g, m)
    assert parts.paths == [(0, 1, 2)]
    assert parts.cycles == []


def test_decomposition_of_a_cycle():
    g = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    m = maximum_matching(bipartite_of(g))
    parts = matching_decomposition(g, m)
    assert parts.paths == []
    assert parts.cycles == [(0, 1, 2)]


def test_decomposition_rejects_foreign_edge():
    g = Digraph(2, frozenset({(0, 1)}))
    with pytest.raises(InconsistentMatchingError):
        matching_decomposition(g, Matching(frozenset({(1, 0)}), frozenset({0})))
    with pytest.raises(InconsistentMatchingError):
        matching_decomposition(g, Matching(frozenset({(0, 1)}), frozenset()))


def test_paths_count_left_unmatched(fig1):
    g = augmented_digraph(fig1.spec)
    m = maximum_matching(bipartite_of(g))
    parts = matching_decomposition(g, m)
    assert len(parts.paths) == len(m.left_unmatched) == 3
    covered = sorted(v for seq in parts.paths + parts.cycles for v in seq)
    assert covered == list(range(g.vertex_count))
