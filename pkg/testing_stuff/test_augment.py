# testing_stuff/test_augment.py

import itertools
import logging

import numpy as np
import pytest

from oracles import no_smaller_strong_augmentation, random_digraph, random_observable_system
from topology.augment import (
    augment_all,
    augment_for_sensor,
    build_slack_bipartite,
    independent_link_count,
    sequential_pairing,
    strongly_connect,
)
from topology.errors import InconsistentMatchingError, InvalidSystemError, UnobservablePlantError
from topology.graph_core import Digraph, Matching, is_strongly_connected, scc_decompose
from topology.pipeline import run_design
from topology.slack import Weighting
from topology.structural import SparsityPattern, SystemSpec, check_dd_observability


def one_based(links):
    return sorted((link.transmitter + 1, link.receiver + 1) for link in links)


def adjacency(spec):
    out = np.zeros((spec.m, spec.m), dtype=int)
    for t, r in spec.comm.edges:
        out[r, t] = 1
    return out.tolist()


# ── Sequential pairing ────────────────────────────────────────────────────────

def test_sequential_pairing_closes_a_cycle():
    m = Matching(frozenset({(10, 1), (20, 2), (30, 3)}), frozenset())
    assert sequential_pairing([10, 20, 30], [1, 2, 3], m) == frozenset({(20, 1), (30, 2), (10, 3)})


def test_sequential_pairing_single_pair_links_back():
    m = Matching(frozenset({(5, 7)}), frozenset())
    assert sequential_pairing([5], [7], m) == frozenset({(5, 7)})


def test_sequential_pairing_rejects_bad_input():
    with pytest.raises(InconsistentMatchingError):
        sequential_pairing([1], [2], Matching(frozenset(), frozenset()))
    with pytest.raises(InconsistentMatchingError):
        sequential_pairing([1], [2], Matching(frozenset({(1, 3)}), frozenset()))


# ── Strong connectivity ───────────────────────────────────────────────────────

def test_strongly_connect_isolated_vertices():
    result = strongly_connect(Digraph(3))
    assert result.added == frozenset({(1, 0), (2, 1), (0, 2)})
    assert (result.alpha, result.beta) == (3, 3)


def test_strongly_connect_path_links_end_to_start():
    result = strongly_connect(Digraph(3, frozenset({(0, 1), (1, 2)})))
    assert result.added == frozenset({(2, 0)})


def test_strongly_connect_noop_cases():
    assert strongly_connect(Digraph(0)).added == frozenset()
    assert strongly_connect(Digraph(1)).added == frozenset()
    cycle = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    assert strongly_connect(cycle).added == frozenset()


def test_strongly_connect_uses_cheapest_endpoints():
    g = Digraph(4, frozenset({(0, 1), (1, 0), (2, 3), (3, 2)}))
    costs = np.full((4, 4), 5.0)
    costs[1, 3] = 1.0   # 3 -> 1
    costs[3, 1] = 2.0   # 1 -> 3

    plain = strongly_connect(g)
    assert plain.added == frozenset({(2, 0), (0, 2)})

    priced = strongly_connect(g, costs)
    assert priced.added == frozenset({(3, 1), (1, 3)})
    assert priced.cost == 3.0


@pytest.mark.parametrize('batch', range(10))
def test_strongly_connect_random_digraphs(batch):
    for seed in range(batch * 100, batch * 100 + 100):
        rng = np.random.default_rng(seed)
        g = random_digraph(rng, int(rng.integers(1, 21)), float(rng.uniform(0.0, 0.2)))
        scc = scc_decompose(g)
        result = strongly_connect(g)
        assert is_strongly_connected(g.with_edges(result.added)), f'seed {seed}'
        expected = 0 if scc.count == 1 else max(len(scc.sources), len(scc.sinks))
        assert len(result.added) == expected, f'seed {seed}'
        assert not result.added & g.edges


def all_small_digraphs():
    for n in range(1, 4):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for k in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, k):
                yield Digraph(n, frozenset(edges))


def test_strongly_connect_is_minimal_on_every_small_digraph():
    for g in all_small_digraphs():
        result = strongly_connect(g)
        assert no_smaller_strong_augmentation(g.vertex_count, g.edges, len(result.added)), sorted(g.edges)


@pytest.mark.parametrize('batch', range(4))
def test_strongly_connect_is_minimal_on_random_digraphs(batch):
    for seed in range(batch * 50, batch * 50 + 50):
        rng = np.random.default_rng(10_000 + seed)
        g = random_digraph(rng, int(rng.integers(2, 7)), float(rng.uniform(0.1, 0.5)))
        result = strongly_connect(g)
        assert no_smaller_strong_augmentation(g.vertex_count, g.edges, len(result.added)), f'seed {seed}'


@pytest.mark.parametrize('edges', [
    frozenset(),
    frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)}),
    frozenset({(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)}),
    frozenset({(0, 1), (1, 0), (2, 3), (3, 2), (4, 5)}),
])
def test_strongly_connect_is_minimal_on_six_vertices(edges):
    g = Digraph(6, edges)
    result = strongly_connect(g)
    assert is_strongly_connected(g.with_edges(result.added))
    assert no_smaller_strong_augmentation(6, g.edges, len(result.added))


# ── Per-sensor repair ─────────────────────────────────────────────────────────

def test_fig1_sensor1_needs_link_from_sensor4(fig1):
    links = augment_for_sensor(fig1.spec, 0)
    assert one_based(links) == [(4, 1)]
    assert links[0].attributed_to == 0
    assert links[0].cost == 1.0


def test_sensor_matching_is_logged_with_vertex_names(fig1, caplog):
    with caplog.at_level(logging.DEBUG, logger='topology.augment'):
        augment_for_sensor(fig1.spec, 0)
    assert 'z4-s4' in caplog.text
    assert 'x1-' in caplog.text


def test_build_slack_bipartite_weights(fig1):
    graph = build_slack_bipartite(fig1.spec, 0, 'binary')
    assert sorted(graph.weights.values()) == [1.0, 1.0]
    with pytest.raises(InvalidSystemError):
        build_slack_bipartite(fig1.spec, 0, Weighting.COST)


def test_fig1_augmentation(fig1):
    result = augment_all(fig1.spec, Weighting.BINARY)
    assert one_based(result.added_links) == [(4, 1), (4, 2)]
    assert result.total_links == 2
    assert result.total_cost == 2.0
    assert result.sensor_costs == {0: 1.0, 1: 1.0, 2: 0.0, 3: 0.0}
    assert adjacency(result.final_system) == fig1.expected['final_comm']
    assert result.final_comm == result.final_system.comm
    assert check_dd_observability(result.final_system).overall_ok


def test_fig1_final_pattern_matches_reference_w(fig1):
    result = augment_all(fig1.spec)
    reference = (np.array(fig1.expected['w_gstar']) != 0).astype(int)
    assert (result.final_system.w_pattern.to_dense() == reference).all()


def test_descending_order_also_repairs(fig1):
    result = augment_all(fig1.spec, order='desc')
    assert result.order == 'desc'
    assert check_dd_observability(result.final_system).overall_ok
    assert result.total_links <= independent_link_count(fig1.spec).total_links


def test_augmentation_is_idempotent(fig1):
    once = augment_all(fig1.spec)
    assert augment_all(once.final_system).total_links == 0


def test_independent_count_bounds_sequential(fig1):
    independent = independent_link_count(fig1.spec)
    assert independent.per_sensor_links[0] == 1
    assert independent.total_links >= augment_all(fig1.spec).total_links
    assert independent.total_cost == float(independent.total_links)


def test_bad_arguments(fig1):
    with pytest.raises(ValueError):
        augment_all(fig1.spec, order='random')
    with pytest.raises(InvalidSystemError):
        augment_all(fig1.spec, Weighting.COST)
    with pytest.raises(ValueError):
        Weighting.parse('fastest')


def test_zero_cost_slack_still_adds_a_link(fig1):
    s = fig1.spec
    free = SystemSpec(n=s.n, m=s.m, a_pattern=s.a_pattern, c_pattern=s.c_pattern,
                      comm=s.comm, costs=np.zeros((s.m, s.m)))
    links = augment_for_sensor(free, 0, Weighting.COST)
    assert links
    assert all(link.cost == 0.0 for link in links)
    repaired = check_dd_observability(free.with_links((l.transmitter, l.receiver) for l in links))
    assert repaired.per_sensor[0].condition_ii_ok


@pytest.mark.parametrize('batch', range(4))
def test_unit_costs_match_binary_mode(batch):
    for seed in range(batch * 50, batch * 50 + 50):
        rng = np.random.default_rng(40_000 + seed)
        s = random_observable_system(rng, n_max=8, m_max=5)
        ones = SystemSpec(n=s.n, m=s.m, a_pattern=s.a_pattern, c_pattern=s.c_pattern,
                          comm=s.comm, costs=np.ones((s.m, s.m)))
        binary = augment_all(s, Weighting.BINARY)
        priced = augment_all(ones, Weighting.COST)
        assert priced.total_links == binary.total_links, f'seed {seed}'
        assert one_based(priced.added_links) == one_based(binary.added_links), f'seed {seed}'
        assert priced.total_cost == float(priced.total_links), f'seed {seed}'


@pytest.mark.parametrize('batch', range(2))
def test_committed_links_never_hurt_later_sensors(batch):
    for seed in range(batch * 50, batch * 50 + 50):
        rng = np.random.default_rng(30_000 + seed)
        original = random_observable_system(rng, n_max=8, m_max=5)

        s = original
        before = check_dd_observability(s)
        for i in range(s.m):
            links = augment_for_sensor(s, i)
            if not links:
                continue
            s = s.with_links((link.transmitter, link.receiver) for link in links)
            after = check_dd_observability(s)
            for old, new in zip(before.per_sensor, after.per_sensor):
                assert new.mcmm_cost <= old.mcmm_cost, f'seed {seed}, sensor {new.sensor + 1}'
                assert new.condition_ii_ok or not old.condition_ii_ok, f'seed {seed}, sensor {new.sensor + 1}'
            assert after.per_sensor[i].condition_ii_ok, f'seed {seed}'
            before = after

        result = augment_all(original)
        independent = independent_link_count(original)
        for i, cost in result.sensor_costs.items():
            assert cost <= independent.per_sensor_cost[i], f'seed {seed}, sensor {i + 1}'


def test_brain_cost_mode(brain):
    result = augment_all(brain.spec, Weighting.COST)
    assert one_based(result.added_links) == [(2, 4)]
    assert result.total_cost == 3.0
    assert adjacency(result.final_system) == brain.expected['final_comm']
    assert independent_link_count(brain.spec, 'cost').total_cost >= result.total_cost


def test_unobservable_plant_raises():
    s = SystemSpec(n=2, m=1,
                   a_pattern=SparsityPattern.zeros(2, 2),
                   c_pattern=SparsityPattern(1, 2, frozenset({(0, 0)})),
                   comm=Digraph(1, frozenset({(0, 0)})))
    with pytest.raises(UnobservablePlantError, match='unreached states'):
        augment_all(s)


# ── Design pipeline ───────────────────────────────────────────────────────────

def disconnected_pair() -> SystemSpec:
    return SystemSpec(n=2, m=2,
                      a_pattern=SparsityPattern.zeros(2, 2),
                      c_pattern=SparsityPattern.identity(2),
                      comm=Digraph(2, frozenset({(0, 0), (1, 1)})))


def test_design_repairs_connectivity_first():
    messages = []
    result = run_design(disconnected_pair(), on_status=messages.append)
    assert result.success
    assert result.connect is not None
    assert (result.connect.alpha, result.connect.beta) == (2, 2)
    assert one_based(result.connect_links) == [(1, 2), (2, 1)]
    assert all(link.attributed_to is None for link in result.connect_links)
    assert result.augmentation.total_links == 0
    assert result.total_cost == 2.0
    assert messages and messages[-1].startswith('Design complete')


def test_design_on_fig1(fig1):
    result = run_design(fig1.spec)
    assert result.success
    assert result.connect is None
    assert one_based(result.links) == [(4, 1), (4, 2)]
    assert not result.initial.overall_ok
    assert result.final.overall_ok


def test_design_connect_first_on_strongly_connected_graph(fig1):
    assert run_design(fig1.spec, connect_first=True).connect is None


def test_design_on_observable_system_adds_nothing(identity_complete):
    result = run_design(identity_complete.spec)
    assert result.success
    assert result.links == []


def test_design_reports_unobservable_plant():
    s = SystemSpec(n=2, m=1,
                   a_pattern=SparsityPattern.zeros(2, 2),
                   c_pattern=SparsityPattern(1, 2, frozenset({(0, 0)})),
                   comm=Digraph(1, frozenset({(0, 0)})))
    result = run_design(s)
    assert not result.success
    assert result.error.startswith('plant unobservable')
    assert result.links == []
    assert result.final_system is s


def test_design_cost_mode_needs_costs(fig1):
    with pytest.raises(InvalidSystemError):
        run_design(fig1.spec, weighting='cost')


def test_design_on_brain(brain):
    result = run_design(brain.spec, Weighting.COST)
    assert result.success
    assert one_based(result.links) == [(2, 4)]
    assert result.links[0].attributed_to == 3
    assert result.total_cost == 3.0
