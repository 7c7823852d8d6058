# topology/slack.py

"""
Per-sensor slack bipartite graph.

Right-side index layout for sensor i of a system with n states, m sensors:

    0 .. n+m-1                  copies of V = X ∪ Z (heads of Ã edges)
    n+m                         y_i, the sensor's own plant measurement
    n+m+1 .. n+m+|N_i^-|        selectors of z_j, j ∈ N_i^- (ascending j)
    after that                  slacks s_j, j ∉ N_i^- (ascending j)

Left side is V, indexed x_k = k and z_j = n+j.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .graph_core import BipartiteGraph, Digraph, Matching


class Weighting(Enum):
    BINARY = 'binary'   # every slack edge costs one link
    COST   = 'cost'     # slack edge (z_j, s_j) costs γ_ij

    @classmethod
    def parse(cls, value: 'str | Weighting') -> 'Weighting':
        if isinstance(value, Weighting):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown weighting {value!r}, expected 'binary' or 'cost'") from None


@dataclass(frozen=True)
class SlackLayout:
    n             : int
    m             : int
    sensor        : int
    in_neighbors  : tuple[int, ...]
    slack_sensors : tuple[int, ...]

    @property
    def output_vertex(self) -> int:
        return self.n + self.m

    def selector_vertex(self, j: int) -> int:
        return self.n + self.m + 1 + self.in_neighbors.index(j)

    def slack_vertex(self, j: int) -> int:
        return self.n + self.m + 1 + len(self.in_neighbors) + self.slack_sensors.index(j)

    @property
    def right_count(self) -> int:
        return self.n + self.m + 1 + len(self.in_neighbors) + len(self.slack_sensors)

    def sensor_of_slack(self, r: int) -> int | None:
        """Sensor j whose slack s_j sits at right index r, else None."""
        offset = r - (self.n + self.m + 1 + len(self.in_neighbors))
        if 0 <= offset < len(self.slack_sensors):
            return self.slack_sensors[offset]
        return None

    def left_names(self) -> dict[int, str]:
        names = {k: f'x{k + 1}' for k in range(self.n)}
        names.update({self.n + j: f'z{j + 1}' for j in range(self.m)})
        return names

    def right_names(self) -> dict[int, str]:
        names = self.left_names()
        names[self.output_vertex] = f'y{self.sensor + 1}'
        for j in self.in_neighbors:
            names[self.selector_vertex(j)] = f'y{self.sensor + 1}.z{j + 1}'
        for j in self.slack_sensors:
            names[self.slack_vertex(j)] = f's{j + 1}'
        return names


def slack_layout(n: int, m: int, sensor: int, in_neighbors: Iterable[int]) -> SlackLayout:
    neighbours = tuple(sorted(set(in_neighbors)))
    return SlackLayout(
        n             = n,
        m             = m,
        sensor        = sensor,
        in_neighbors  = neighbours,
        slack_sensors = tuple(j for j in range(m) if j not in neighbours),
    )


def slack_transmitters(matching: Matching, layout: SlackLayout) -> list[int]:
    """Sensors j whose slack edge (z_j, s_j) the matching uses, ascending."""
    found = []
    for _, r in matching.edges:
        j = layout.sensor_of_slack(r)
        if j is not None:
            found.append(j)
    return sorted(found)


def slack_bipartite(
    augmented    : Digraph,
    layout       : SlackLayout,
    measured     : Iterable[int],
    slack_weight : Mapping[int, float],
) -> BipartiteGraph:
    """
    Assemble the bipartite graph from D(Ã(G)), the states measured by the
    sensor and the per-transmitter slack weights. Only slack edges carry
    weight; every other edge weighs 0.
    """
    n, m = layout.n, layout.m
    edges = set(augmented.edges)
    weights: dict[tuple[int, int], float] = {}

    for k in measured:
        edges.add((k, layout.output_vertex))
    for j in layout.in_neighbors:
        edges.add((n + j, layout.selector_vertex(j)))
    for j in layout.slack_sensors:
        edge = (n + j, layout.slack_vertex(j))
        edges.add(edge)
        weights[edge] = float(slack_weight[j])

    return BipartiteGraph(
        left        = tuple(range(n + m)),
        right       = tuple(range(layout.right_count)),
        edges       = frozenset(edges),
        weights     = weights,
        left_names  = layout.left_names(),
        right_names = layout.right_names(),
    )
