# topology/__init__.py
"""
topology
========
Structural side of sensor-network design: decide whether every sensor can
reconstruct the plant state plus all sensor states, and add the fewest (or
cheapest) communication links when it cannot.

Public API
----------
run_design              — main entry point; check, repair, re-check
DesignResult            — dataclass returned by run_design()

SystemSpec              — plant pattern, measurement pattern, comm graph, costs
SparsityPattern         — zero/nonzero mask of a matrix
Weighting               — BINARY (link count) or COST (Σ γ)

Individual stages (use directly only if you need fine-grained control):
check_structural_observability — plant observable from all sensors together
check_dd_observability         — per-sensor reachability + matching conditions
strongly_connect               — max(α, β) links for strong connectivity
augment_for_sensor / augment_all — slack-matching link repair

Graph primitives live in topology.graph_core.

Typical usage
-------------
    from topology import SystemSpec, SparsityPattern, run_design
    from topology.graph_core import Digraph

    spec = SystemSpec(
        n=2, m=2,
        a_pattern=SparsityPattern.from_dense([[0, 1], [1, 0]]),
        c_pattern=SparsityPattern.from_dense([[1, 0], [0, 0]]),
        comm=Digraph(2, {(0, 0), (1, 1), (0, 1)}),
    )
    result = run_design(spec)
    for link in result.links:
        print(f'sensor {link.transmitter + 1} -> sensor {link.receiver + 1}')
"""

from .augment import (
    AddedLink,
    AugmentationResult,
    IndependentCount,
    StrongConnectResult,
    augment_all,
    augment_for_sensor,
    build_slack_bipartite,
    independent_link_count,
    sequential_pairing,
    strongly_connect,
)
from .errors import (
    InconsistentMatchingError,
    InvalidSystemError,
    InvalidWeightsError,
    NetobsError,
    NumericFailureError,
    ParametrizationError,
    SystemFileError,
    UnobservablePlantError,
)
from .pipeline import DesignResult, run_design
from .slack import Weighting
from .structural import (
    DdReport,
    SensorCondition,
    SparsityPattern,
    StructuralResult,
    SystemSpec,
    augmented_digraph,
    augmented_pattern,
    check_dd_observability,
    check_structural_observability,
    sensor_output_pattern,
    state_digraph,
    state_output_digraph,
)

__all__ = [
    'run_design',
    'DesignResult',
    'SystemSpec',
    'SparsityPattern',
    'Weighting',
    'DdReport',
    'SensorCondition',
    'StructuralResult',
    'AddedLink',
    'AugmentationResult',
    'IndependentCount',
    'StrongConnectResult',
    'state_digraph',
    'state_output_digraph',
    'augmented_pattern',
    'augmented_digraph',
    'sensor_output_pattern',
    'check_structural_observability',
    'check_dd_observability',
    'sequential_pairing',
    'strongly_connect',
    'build_slack_bipartite',
    'augment_for_sensor',
    'augment_all',
    'independent_link_count',
    'NetobsError',
    'InvalidSystemError',
    'SystemFileError',
    'InvalidWeightsError',
    'InconsistentMatchingError',
    'UnobservablePlantError',
    'ParametrizationError',
    'NumericFailureError',
]

__version__ = '0.1.0'
