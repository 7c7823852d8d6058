"""
verification/pipeline.py

Single entry point for numeric verification of a design.

For each trial a W(G) is realised on the communication pattern (the pinned
W of the system file for trial 0, when there is one), Ã(G) is assembled, and
every sensor gets a PBH test plus a batch reconstruction of a random
initial state.

Usage
-----
    from verification import run_verification
    from cli.system_file import parse_system

    spec = parse_system('cli/fixtures/fig1_gstar.json')
    result = run_verification(spec, seed=7)

    print(result.observable)            # every sensor, every trial
    print(result.passing_trials)        # trials where all sensors passed
    for sensor in result.trials[0].sensors:
        print(sensor.sensor + 1, sensor.pbh.margin, sensor.reconstruction.relative_error)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from topology.structural import SystemSpec
from .parametrize import parametrize_w
from .pbh import RANK_TOL, PbhReport, assemble_augmented, pbh_check, sensor_output_matrix
from .reconstruct import ReconstructionResult, batch_reconstruct

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SensorVerification:
    sensor         : int
    pbh            : PbhReport
    reconstruction : ReconstructionResult

    @property
    def observable(self) -> bool:
        return self.pbh.observable


@dataclass(frozen=True, eq=False)
class TrialResult:
    trial    : int
    seed     : int
    w_source : str            # 'pinned' or 'drawn'
    w        : np.ndarray
    sensors  : list[SensorVerification] = field(default_factory=list)

    @property
    def observable(self) -> bool:
        return all(s.observable for s in self.sensors)


@dataclass(frozen=True, eq=False)
class VerificationResult:
    """
    Attributes
    ----------
    trials : list[TrialResult]
        One entry per W realisation.
    seed : int
        Base seed; trial t draws W with seed + t.
    tol : float
        PBH tolerance before dimension scaling.
    horizon : int
        Reconstruction horizon used for every sensor.
    """
    trials  : list[TrialResult]
    seed    : int
    tol     : float
    horizon : int

    @property
    def observable(self) -> bool:
        return all(t.observable for t in self.trials)

    @property
    def passing_trials(self) -> int:
        return sum(1 for t in self.trials if t.observable)

    def failing_sensors(self) -> list[int]:
        return sorted({s.sensor for t in self.trials for s in t.sensors if not s.observable})


# ---------------------------------------------------------------------------
# Main entry point
# ---------------------------------------------------------------------------

def numeric_plant(spec: SystemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Numeric A and C, falling back to the 0/1 patterns when no values are given."""
    a = spec.a_values if spec.a_values is not None else spec.a_pattern.to_dense().astype(float)
    c = spec.c_values if spec.c_values is not None else spec.c_pattern.to_dense().astype(float)
    return np.asarray(a, dtype=float), np.asarray(c, dtype=float)


def run_verification(
    spec: SystemSpec,
    seed: int = 0,
    tol: float = RANK_TOL,
    trials: int = 1,
    horizon: int | None = None,
    on_status: Callable[[str], None] | None = None,
) -> VerificationResult:
    """
    Numerically verify DD observability of `spec` as it stands.

    Parameters
    ----------
    spec : SystemSpec
        System to verify, usually the output of run_design().
    seed : int
        Base seed for W draws and initial states.
    tol : float
        PBH threshold before scaling by the augmented dimension.
    trials : int
        Number of W realisations.
    horizon : int | None
        Reconstruction horizon, n + m when None.

    Returns
    -------
    VerificationResult

    Raises
    ------
    ParametrizationError
        No admissible W within the retry budget.
    """
    if trials < 1:
        raise ValueError(f'trials must be >= 1, got {trials}')
    dim = spec.n + spec.m
    horizon = dim if horizon is None else horizon
    a, c = numeric_plant(spec)
    logger.info('Verification started | n=%d | m=%d | seed=%d | trials=%d', spec.n, spec.m, seed, trials)

    results: list[TrialResult] = []
    for t in range(trials):
        if t == 0 and spec.w_values is not None:
            w, source = np.asarray(spec.w_values, dtype=float), 'pinned'
        else:
            w, source = parametrize_w(spec.w_pattern, a, seed + t), 'drawn'

        a_tilde = assemble_augmented(a, c, w)
        rng = np.random.default_rng([seed, t])
        sensors: list[SensorVerification] = []
        for i in range(spec.m):
            c_tilde = sensor_output_matrix(spec, i, c)
            x0 = rng.standard_normal(dim)
            x0 /= np.linalg.norm(x0) or 1.0
            sensors.append(SensorVerification(
                sensor         = i,
                pbh            = pbh_check(a_tilde, c_tilde, tol),
                reconstruction = batch_reconstruct(a_tilde, c_tilde, x0, horizon),
            ))

        trial = TrialResult(trial=t, seed=seed + t, w_source=source, w=w, sensors=sensors)
        results.append(trial)
        if on_status:
            on_status(f'Trial {t + 1}/{trials}: observable={trial.observable}')
        logger.debug('Trial done | t=%d | source=%s | observable=%s', t, source, trial.observable)

    result = VerificationResult(trials=results, seed=seed, tol=tol, horizon=horizon)
    logger.info('Verification complete | passing=%d/%d', result.passing_trials, trials)
    return result
