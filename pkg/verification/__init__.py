# verification/__init__.py
"""
verification
============
Numeric side: realise W(G) on a communication pattern and check that every
sensor can actually reconstruct the augmented state.

Public API
----------
run_verification     — main entry point; W draws, PBH per sensor, reconstruction
VerificationResult   — dataclass returned by run_verification()

Individual components:
parametrize_w        — seeded admissible W(G) draw
validate_w           — list the constraints a given W violates
assemble_augmented   — Ã(G) = [A, 0; C, W]
sensor_output_matrix — C̃_i
pbh_check            — Popov-Belevitch-Hautus rank test
observability_matrix_rank — Kalman rank cross-check (dimension ≤ 30)
batch_reconstruct    — least-squares recovery of the initial state

Typical usage
-------------
    from verification import run_verification

    result = run_verification(spec, seed=7, trials=100)
    print(f'{result.passing_trials}/100 draws observable for every sensor')
"""

from .parametrize import RETRY_BUDGET, SEPARATION_TOL, W_HIGH, W_LOW, parametrize_w, validate_w
from .pbh import (
    MAX_RANK_DIM,
    RANK_TOL,
    PbhReport,
    assemble_augmented,
    observability_matrix_rank,
    pbh_check,
    sensor_output_matrix,
)
from .pipeline import SensorVerification, TrialResult, VerificationResult, numeric_plant, run_verification
from .reconstruct import ReconstructionResult, batch_reconstruct

__all__ = [
    'run_verification',
    'VerificationResult',
    'TrialResult',
    'SensorVerification',
    'numeric_plant',
    'parametrize_w',
    'validate_w',
    'assemble_augmented',
    'sensor_output_matrix',
    'pbh_check',
    'PbhReport',
    'observability_matrix_rank',
    'batch_reconstruct',
    'ReconstructionResult',
    'W_LOW',
    'W_HIGH',
    'SEPARATION_TOL',
    'RETRY_BUDGET',
    'RANK_TOL',
    'MAX_RANK_DIM',
]

__version__ = '0.1.0'
