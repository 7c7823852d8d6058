"""
topology/pipeline.py

Single entry point for communication-graph design.

Callers that just want "make this network DD-observable" only need
run_design(). The stage order lives here: check, repair strong
connectivity when needed, per-sensor matching repair, check again.

Usage
-----
    from topology import run_design, Weighting
    from cli.system_file import parse_system

    spec = parse_system('cli/fixtures/fig1.json')
    result = run_design(spec, weighting=Weighting.BINARY)

    print(result.success)                  # True once G* is DD-observable
    print([(l.transmitter + 1, l.receiver + 1) for l in result.links])
    print(result.final.overall_ok)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from .augment import AddedLink, AugmentationResult, StrongConnectResult, augment_all, strongly_connect
from .errors import InvalidSystemError
from .graph_core import is_strongly_connected
from .slack import Weighting
from .structural import DdReport, SystemSpec, check_dd_observability

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Result type
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class DesignResult:
    """
    Everything one design run produced.

    Attributes
    ----------
    initial : DdReport
        DD check of the input system.
    connect : StrongConnectResult | None
        Strong-connectivity repair, None when it was not needed.
    connect_links : list[AddedLink]
        Links added by the connectivity stage (attributed_to is None).
    augmentation : AugmentationResult | None
        Per-sensor repair; None when the plant is unobservable.
    final : DdReport | None
        DD check of the output system.
    final_system : SystemSpec
        Input system with every added link.
    error : str | None
        Why the run stopped early, if it did.
    """
    initial       : DdReport
    final_system  : SystemSpec
    connect       : StrongConnectResult | None = None
    connect_links : list[AddedLink] = field(default_factory=list)
    augmentation  : AugmentationResult | None = None
    final         : DdReport | None = None
    error         : str | None = None

    @property
    def success(self) -> bool:
        return self.error is None and self.final is not None and self.final.overall_ok

    @property
    def links(self) -> list[AddedLink]:
        matching_links = self.augmentation.added_links if self.augmentation else []
        return list(self.connect_links) + list(matching_links)

    @property
    def total_cost(self) -> float:
        return float(sum(link.cost for link in self.links))


# ---------------------------------------------------------------------------
# Main entry point
# ---------------------------------------------------------------------------

def run_design(
    spec: SystemSpec,
    weighting: Weighting | str = Weighting.BINARY,
    order: str = 'asc',
    connect_first: bool = False,
    on_status: Callable[[str], None] | None = None,
) -> DesignResult:
    """
    Add communication links until every sensor can reconstruct the full
    augmented state.

    Steps:
        1. Check plant observability and both DD conditions
        2. If the reachability condition fails (or connect_first is set and
           the graph is not strongly connected), add max(α, β) links
        3. Repair every sensor's matching condition in `order`
        4. Check the result again

    Parameters
    ----------
    spec : SystemSpec
        System to design for. Never mutated.
    weighting : Weighting | str
        'binary' minimises link count, 'cost' minimises Σ γ.
    order : str
        'asc' or 'desc' sensor processing order.
    connect_first : bool
        Run the connectivity repair whenever G is not strongly connected,
        even if the check did not flag it.
    on_status : Callable[[str], None] | None
        Optional progress callback, as in the CLI's verbose mode.

    Returns
    -------
    DesignResult
        An unobservable plant is reported through `error`, not raised.
    """
    weighting = Weighting.parse(weighting)
    if weighting is Weighting.COST and spec.costs is None:
        raise InvalidSystemError('cost mode needs a cost matrix')
    logger.info('Design started | n=%d | m=%d | mode=%s | order=%s', spec.n, spec.m, weighting.value, order)

    def status(msg: str) -> None:
        logger.info('[STATUS] %s', msg)
        if on_status:
            on_status(msg)

    # --- Step 1: initial check ---
    status('Checking DD observability...')
    initial = check_dd_observability(spec)
    if initial.reason is not None:
        msg = f'{initial.reason}: no communication link can fix the plant'
        status(msg)
        return DesignResult(initial=initial, final_system=spec, final=initial, error=msg)

    current = spec

    # --- Step 2: strong connectivity ---
    connect = None
    connect_links: list[AddedLink] = []
    needs_connect = not initial.condition_i_ok or (connect_first and not is_strongly_connected(spec.comm))
    if needs_connect:
        status('Repairing strong connectivity...')
        costs = spec.costs if weighting is Weighting.COST else None
        connect = strongly_connect(spec.comm, costs)
        connect_links = [
            AddedLink(
                transmitter   = t,
                receiver      = r,
                attributed_to = None,
                cost          = float(costs[r, t]) if costs is not None else 1.0,
            )
            for t, r in sorted(connect.added)
        ]
        current = current.with_links(connect.added)

    # --- Step 3: per-sensor matching repair ---
    status('Repairing per-sensor matching condition...')
    augmentation = augment_all(current, weighting, order)

    # --- Step 4: final check ---
    final = check_dd_observability(augmentation.final_system)
    result = DesignResult(
        initial       = initial,
        final_system  = augmentation.final_system,
        connect       = connect,
        connect_links = connect_links,
        augmentation  = augmentation,
        final         = final,
    )
    status(f'Design complete: {len(result.links)} link(s) added, DD-observable={final.overall_ok}.')
    logger.info('Design complete | links=%d | cost=%g | ok=%s', len(result.links), result.total_cost, final.overall_ok)
    return result
