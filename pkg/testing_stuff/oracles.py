# testing_stuff/oracles.py

"""
Brute-force references and random instance generators for the test suite
and the offline experiments. Everything here is exponential and only meant
for tiny inputs.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from topology.graph_core import BipartiteGraph, Digraph, optimum_value
from topology.structural import (
    SparsityPattern,
    SystemSpec,
    augmented_digraph,
    check_structural_observability,
    sensor_slack_bipartite,
)


# ── Matchings ─────────────────────────────────────────────────────────────────

def best_matching_value(b: BipartiteGraph, weighted: bool = True) -> tuple[int, float]:
    """(max cardinality, min cost among maximum matchings) by DP over right-vertex subsets."""
    lefts = list(b.left)
    right_pos = {r: k for k, r in enumerate(b.right)}
    options = [[(right_pos[r], b.weight((l, r)) if weighted else 0.0) for r in b.neighbours(l)]
               for l in lefts]

    @lru_cache(maxsize=None)
    def best(k: int, used: int) -> tuple[int, float]:
        if k == len(lefts):
            return 0, 0.0
        size, cost = best(k + 1, used)
        top = (size, -cost)
        for pos, w in options[k]:
            if used & (1 << pos):
                continue
            s, c = best(k + 1, used | (1 << pos))
            if (s + 1, -(c + w)) > top:
                top = (s + 1, -(c + w))
        return top[0], -top[1]

    return best(0, 0)


def all_maximum_matchings(b: BipartiteGraph) -> list[frozenset]:
    """Every maximum matching, via itertools over edge subsets of the right size."""
    size, _ = best_matching_value(b, weighted=False)
    found = []
    for combo in itertools.combinations(sorted(b.edges), size):
        lefts = {l for l, _ in combo}
        rights = {r for _, r in combo}
        if len(lefts) == size and len(rights) == size:
            found.append(frozenset(combo))
    return found


# ── Reachability ──────────────────────────────────────────────────────────────

def reach_masks(n: int, edges) -> list[int]:
    """reach[v] = bitmask of vertices reachable from v (v included)."""
    reach = [1 << v for v in range(n)]
    for u, v in edges:
        reach[u] |= 1 << v
    changed = True
    while changed:
        changed = False
        for v in range(n):
            mask = reach[v]
            acc = mask
            w = mask
            while w:
                low = w & -w
                acc |= reach[low.bit_length() - 1]
                w ^= low
            if acc != mask:
                reach[v] = acc
                changed = True
    return reach


def strongly_connected_bits(n: int, edges) -> bool:
    if n <= 1:
        return True
    full = (1 << n) - 1
    return all(mask == full for mask in reach_masks(n, edges))


def no_smaller_strong_augmentation(n: int, edges, k: int) -> bool:
    """
    True when no set of k-1 new edges makes the graph strongly connected.

    Edge addition is monotone, so checking size k-1 covers every smaller size.
    Only edges between different components can help, and a candidate set
    must enter every source component and leave every sink component.
    """
    if k <= 0:
        return True
    existing = set(edges)
    forward = reach_masks(n, existing)
    backward = reach_masks(n, {(v, u) for u, v in existing})
    component = [forward[v] & backward[v] for v in range(n)]

    comps = set(component)
    if len(comps) == 1:
        return False
    sources = [mask for mask in comps if not any(component[v] == mask and component[u] != mask
                                                  for u, v in existing)]
    sinks = [mask for mask in comps if not any(component[u] == mask and component[v] != mask
                                                for u, v in existing)]

    crossing = [(u, v) for u in range(n) for v in range(n) if component[u] != component[v]
                and (u, v) not in existing]
    size = min(k - 1, len(crossing))
    for extra in itertools.combinations(crossing, size):
        heads = {component[v] for _, v in extra}
        tails = {component[u] for u, _ in extra}
        if not all(mask in heads for mask in sources) or not all(mask in tails for mask in sinks):
            continue
        if strongly_connected_bits(n, existing | set(extra)):
            return False
    return True


# ── DD observability ──────────────────────────────────────────────────────────

def dd_ok_fast(s: SystemSpec, plant_ok: bool | None = None) -> bool:
    """DD observability without the lexicographic tie-break work."""
    if plant_ok is None:
        plant_ok = check_structural_observability(s.a_pattern, s.c_pattern).ok
    if not plant_ok:
        return False
    aug = augmented_digraph(s)
    total = s.n + s.m
    reach = reach_masks(total, aug.edges)
    for i in range(s.m):
        target = 1 << (s.n + i)
        if not all(mask & target for mask in reach):
            return False
        graph, _ = sensor_slack_bipartite(s, i, {j: 1.0 for j in range(s.m)})
        size, cost = optimum_value(graph)
        if size != total or cost != 0:
            return False
    return True


def exact_min_links(s: SystemSpec, upper: int | None = None) -> int | None:
    """
    Fewest links making `s` DD-observable, by trying every link subset in
    order of size. Returns None when nothing up to `upper` links works.
    """
    missing = [(t, r) for r in range(s.m) for t in range(s.m) if (t, r) not in s.comm.edges]
    limit = len(missing) if upper is None else min(upper, len(missing))
    if not check_structural_observability(s.a_pattern, s.c_pattern).ok:
        return None
    for k in range(limit + 1):
        for extra in itertools.combinations(missing, k):
            if dd_ok_fast(s.with_links(extra), plant_ok=True):
                return k
    return None


# ── Random instances ──────────────────────────────────────────────────────────

def random_digraph(rng: np.random.Generator, n: int, density: float) -> Digraph:
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    return Digraph(n, frozenset(zip(rows.tolist(), cols.tolist())))


def random_bipartite(rng: np.random.Generator, left: int, right: int, density: float,
                     weighted: bool = True, max_weight: int = 5) -> BipartiteGraph:
    mask = rng.random((left, right)) < density
    edges = frozenset((int(l), int(r)) for l, r in zip(*np.nonzero(mask)))
    weights = {e: float(rng.integers(0, max_weight + 1)) for e in sorted(edges)} if weighted else {}
    return BipartiteGraph(tuple(range(left)), tuple(range(right)), edges, weights)


def random_pattern(rng: np.random.Generator, rows: int, cols: int, density: float,
                   full_diagonal: bool = False) -> SparsityPattern:
    mask = rng.random((rows, cols)) < density
    if full_diagonal:
        for d in range(min(rows, cols)):
            mask[d, d] = True
    return SparsityPattern.from_dense(mask.astype(int), shape=(rows, cols))


def random_comm(rng: np.random.Generator, m: int, density: float, strongly_connected: bool = True) -> Digraph:
    """Sensor graph with self-loops; a random Hamiltonian cycle guarantees strong connectivity."""
    edges = {(k, k) for k in range(m)}
    edges |= set(random_digraph(rng, m, density).edges)
    if strongly_connected and m > 1:
        order = rng.permutation(m).tolist()
        edges |= {(order[k], order[(k + 1) % m]) for k in range(m)}
    return Digraph(m, frozenset(edges))


def random_observable_system(rng: np.random.Generator, n_max: int, m_max: int,
                             density: float = 0.3, tries: int = 200) -> SystemSpec:
    """Structurally observable plant with a strongly connected communication graph."""
    for _ in range(tries):
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        a = random_pattern(rng, n, n, density)
        c = random_pattern(rng, m, n, density)
        if check_structural_observability(a, c).ok:
            return SystemSpec(n=n, m=m, a_pattern=a, c_pattern=c, comm=random_comm(rng, m, density / 2))
    raise RuntimeError('could not draw a structurally observable plant')


def random_values(rng: np.random.Generator, pattern: SparsityPattern) -> np.ndarray:
    """Entries of random sign and magnitude in [0.5, 1.5] on the pattern."""
    out = np.zeros((pattern.rows, pattern.cols))
    for r, c in pattern.nonzeros:
        out[r, c] = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
    return out
