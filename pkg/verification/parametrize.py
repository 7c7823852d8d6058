# verification/parametrize.py

"""
Numeric realisations of a communication pattern W(G).

A draw is admissible when W is nonzero exactly on the pattern, its
eigenvalues are simple, none of them lies near an eigenvalue of A, and W is
nonsingular. Under those conditions a structurally DD-observable design is
numerically observable for almost every draw.
"""

from __future__ import annotations

import logging

import numpy as np

from topology.errors import InvalidSystemError, ParametrizationError
from topology.structural import SparsityPattern

logger = logging.getLogger(__name__)

# ── Draw settings ─────────────────────────────────────────────────────────────
W_LOW          = 0.1    # smallest |w_ij| drawn
W_HIGH         = 1.0    # upper end of the uniform draw
SEPARATION_TOL = 1e-4   # min distance between eigenvalues (of W, and W vs A)
RETRY_BUDGET   = 64     # draws before giving up


def validate_w(
    w: np.ndarray,
    pattern: SparsityPattern,
    a_values: np.ndarray | None = None,
    tol: float = SEPARATION_TOL,
) -> list[str]:
    """
    Every constraint the matrix violates, as human-readable strings.
    Empty list means W is admissible.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (pattern.rows, pattern.cols):
        return [f'W is {w.shape}, expected {pattern.rows}x{pattern.cols}']
    if w.size == 0:
        return []

    problems: list[str] = []
    off_pattern = np.argwhere((w != 0) != (pattern.to_dense() != 0))
    if off_pattern.size:
        r, c = off_pattern[0]
        problems.append(f'W disagrees with the pattern at ({r + 1}, {c + 1})')

    eig_w = np.linalg.eigvals(w)
    gaps = np.abs(eig_w[:, None] - eig_w[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() <= tol:
        problems.append(f'eigenvalues of W are not simple (closest pair {gaps.min():.3g} apart)')

    if a_values is not None and np.size(a_values):
        eig_a = np.linalg.eigvals(np.asarray(a_values, dtype=float))
        overlap = np.abs(eig_w[:, None] - eig_a[None, :]).min()
        if overlap <= tol:
            problems.append(f'an eigenvalue of W is within {overlap:.3g} of an eigenvalue of A')

    if np.abs(eig_w).min() <= tol:
        problems.append('W is singular')

    return problems


def parametrize_w(
    pattern: SparsityPattern,
    a_values: np.ndarray | None,
    seed: int,
    retry_budget: int = RETRY_BUDGET,
) -> np.ndarray:
    """
    Draw an admissible W on `pattern`, entries uniform in (W_LOW, W_HIGH).

    Parameters
    ----------
    pattern : SparsityPattern
        Square pattern of W(G) with a full diagonal.
    a_values : np.ndarray | None
        Numeric plant matrix whose spectrum W must avoid.
    seed : int
        Same seed, same matrix.
    retry_budget : int
        Draws attempted before ParametrizationError.

    Returns
    -------
    np.ndarray
        m x m matrix.
    """
    if not pattern.is_square:
        raise InvalidSystemError(f'W pattern must be square, got {pattern.rows}x{pattern.cols}')
    missing = [d + 1 for d in range(pattern.rows) if (d, d) not in pattern.nonzeros]
    if missing:
        raise InvalidSystemError(f'W pattern needs a nonzero diagonal, missing at sensors {missing}')

    rng = np.random.default_rng(seed)
    cells = sorted(pattern.nonzeros)
    rows = np.array([r for r, _ in cells], dtype=int)
    cols = np.array([c for _, c in cells], dtype=int)

    last: list[str] = []
    for attempt in range(1, retry_budget + 1):
        w = np.zeros((pattern.rows, pattern.cols))
        w[rows, cols] = rng.uniform(W_LOW, W_HIGH, size=len(cells))
        last = validate_w(w, pattern, a_values)
        if not last:
            logger.debug('W drawn | seed=%d | attempt=%d', seed, attempt)
            return w
        logger.warning('W draw rejected | seed=%d | attempt=%d | reason=%s', seed, attempt, last[0])

    raise ParametrizationError(
        f'no admissible W after {retry_budget} draws (seed {seed}); last problem: {"; ".join(last)}')
