# verification/reconstruct.py

"""
Batch least-squares reconstruction of the initial augmented state from one
sensor's measurements over a finite horizon.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from topology.errors import InvalidSystemError

logger = logging.getLogger(__name__)

LSTSQ_RCOND = 1e-12   # relative cutoff for the stacked system


@dataclass(frozen=True)
class ReconstructionResult:
    estimate       : np.ndarray
    relative_error : float   # ‖x̂0 - x0‖ / ‖x0‖ (absolute when x0 = 0)
    residual       : float   # ‖O x̂0 - y‖
    rank           : int     # numerical rank of the stacked system
    ambiguous      : bool    # rank < dimension: x0 is not determined by y
    horizon        : int


def batch_reconstruct(
    a_tilde: np.ndarray,
    c_tilde: np.ndarray,
    x0: np.ndarray,
    horizon: int | None = None,
) -> ReconstructionResult:
    """
    Simulate x[k+1] = Ã x[k], y[k] = C̃ x[k] for k < horizon, then solve the
    stacked system O x0 = y by least squares.

    Rows of O are scaled to unit norm first, because later blocks grow like
    ‖Ã‖^k. A rank-deficient O is reported through `ambiguous`, not raised.
    """
    a_tilde = np.asarray(a_tilde, dtype=float)
    c_tilde = np.atleast_2d(np.asarray(c_tilde, dtype=float))
    x0 = np.asarray(x0, dtype=float).ravel()
    dim = a_tilde.shape[0]
    horizon = dim if horizon is None else int(horizon)

    if x0.shape != (dim,):
        raise InvalidSystemError(f'x0 has {x0.size} entries, expected {dim}')
    if horizon < dim:
        raise InvalidSystemError(f'horizon {horizon} is shorter than the state dimension {dim}')
    if dim == 0:
        return ReconstructionResult(x0.copy(), 0.0, 0.0, 0, False, horizon)

    blocks, outputs = [], []
    power = np.eye(dim)
    state = x0.copy()
    for _ in range(horizon):
        blocks.append(c_tilde @ power)
        outputs.append(c_tilde @ state)
        power = a_tilde @ power
        state = a_tilde @ state

    obs = np.vstack(blocks)
    y = np.concatenate(outputs)

    norms = np.linalg.norm(obs, axis=1)
    norms[norms == 0] = 1.0
    estimate, _, rank, _ = np.linalg.lstsq(obs / norms[:, None], y / norms, rcond=LSTSQ_RCOND)

    residual = float(np.linalg.norm(obs @ estimate - y))
    scale = float(np.linalg.norm(x0))
    error = float(np.linalg.norm(estimate - x0))
    relative = error / scale if scale > 0 else error
    ambiguous = int(rank) < dim

    logger.debug('Reconstruct | dim=%d | T=%d | rank=%d | rel_error=%.3g', dim, horizon, rank, relative)
    return ReconstructionResult(
        estimate       = estimate,
        relative_error = relative,
        residual       = residual,
        rank           = int(rank),
        ambiguous      = ambiguous,
        horizon        = horizon,
    )
