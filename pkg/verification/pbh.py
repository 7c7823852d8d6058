# verification/pbh.py

"""
Numeric observability tests for (Ã(G), C̃_i).

pbh_check is the primary test. observability_matrix_rank is the Kalman
cross-check, kept to small dimensions where the Krylov basis stays
well conditioned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import orth, svdvals

from topology.errors import InvalidSystemError, NumericFailureError
from topology.structural import SystemSpec

logger = logging.getLogger(__name__)

RANK_TOL       = 1e-8   # normalised singular-value threshold, scaled by dimension
MAX_RANK_DIM   = 30     # observability-matrix guard
CLUSTER_RADIUS = 1e-3   # relative radius for grouping nearby eigenvalues


@dataclass(frozen=True)
class PbhReport:
    """
    eigenvalues                 : spectrum of Ã with multiplicity
    min_singular_per_eigenvalue : σ_min / σ_max of [Ã - λI; C̃] at each λ
    observable                  : every entry above `tolerance`
    tolerance                   : effective threshold (RANK_TOL x dimension by default)
    """
    eigenvalues                 : list[complex]
    min_singular_per_eigenvalue : list[float]
    observable                  : bool
    tolerance                   : float

    @property
    def margin(self) -> float:
        return min(self.min_singular_per_eigenvalue, default=float('inf'))


def assemble_augmented(a: np.ndarray, c: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Ã(G) = [A, 0; C, W]."""
    a = np.asarray(a, dtype=float)
    w = np.asarray(w, dtype=float)
    n = a.shape[0] if a.size else 0
    m = w.shape[0] if w.size else 0
    a = a.reshape(n, n) if a.size == 0 else a
    w = w.reshape(m, m) if w.size == 0 else w
    c = np.asarray(c, dtype=float).reshape(m, n) if np.size(c) == 0 else np.asarray(c, dtype=float)

    if a.shape != (n, n) or w.shape != (m, m):
        raise InvalidSystemError(f'A {a.shape} and W {w.shape} must both be square')
    if c.shape != (m, n):
        raise InvalidSystemError(f'C is {c.shape}, expected {m}x{n}')
    return np.block([[a, np.zeros((n, m))], [c, w]])


def sensor_output_matrix(s: SystemSpec, i: int, c_values: np.ndarray | None = None) -> np.ndarray:
    """C̃_i: [c_i | 0] on top of 0/1 selector rows for N_i^-."""
    c = s.c_values if c_values is None else np.asarray(c_values, dtype=float)
    if c is None:
        raise InvalidSystemError('numeric C values are missing')
    neighbours = s.in_neighbors(i)

    out = np.zeros((1 + len(neighbours), s.n + s.m))
    out[0, :s.n] = c[i]
    for p, j in enumerate(neighbours):
        out[1 + p, s.n + j] = 1.0
    return out


def pbh_check(a_tilde: np.ndarray, c_tilde: np.ndarray, tol: float = RANK_TOL) -> PbhReport:
    """
    Popov-Belevitch-Hautus test at every eigenvalue of a_tilde.

    Computed eigenvalues of a defective block scatter around the true one, so
    each eigenvalue is also tested at the centroid of its cluster and the
    smaller of the two ratios is kept.
    """
    a_tilde = np.asarray(a_tilde, dtype=float)
    c_tilde = np.atleast_2d(np.asarray(c_tilde, dtype=float))
    dim = a_tilde.shape[0]
    threshold = tol * max(dim, 1)
    if dim == 0:
        return PbhReport([], [], True, threshold)
    if c_tilde.shape[1] != dim:
        raise InvalidSystemError(f'C̃ has {c_tilde.shape[1]} columns, Ã is {dim}x{dim}')

    try:
        eigenvalues = np.linalg.eigvals(a_tilde)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f'eigenvalue computation failed: {exc}') from exc

    radius = CLUSTER_RADIUS * max(1.0, float(np.linalg.norm(a_tilde, 2)))
    identity = np.eye(dim)
    stacked_c = c_tilde.astype(complex)

    def ratio(lam: complex) -> float:
        stacked = np.vstack([a_tilde - lam * identity, stacked_c])
        try:
            sv = svdvals(stacked)
        except np.linalg.LinAlgError as exc:
            raise NumericFailureError(f'SVD failed at λ={lam:.4g}: {exc}') from exc
        return float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0

    ratios: list[float] = []
    for lam in eigenvalues:
        cluster = eigenvalues[np.abs(eigenvalues - lam) <= radius]
        value = ratio(lam)
        if len(cluster) > 1:
            value = min(value, ratio(cluster.mean()))
        ratios.append(value)

    observable = all(r > threshold for r in ratios)
    logger.debug('PBH | dim=%d | margin=%.3g | threshold=%.3g | observable=%s',
                 dim, min(ratios), threshold, observable)
    return PbhReport(
        eigenvalues                 = [complex(v) for v in eigenvalues],
        min_singular_per_eigenvalue = ratios,
        observable                  = observable,
        tolerance                   = threshold,
    )


def observability_matrix_rank(a_tilde: np.ndarray, c_tilde: np.ndarray, tol: float = RANK_TOL) -> int:
    """
    Rank of [C̃; C̃Ã; ...; C̃Ã^(d-1)], computed as the dimension of the Krylov
    space spanned by Ãᵀ acting on the rows of C̃. Each block is
    orthonormalised before the next multiplication.
    """
    a_tilde = np.asarray(a_tilde, dtype=float)
    c_tilde = np.atleast_2d(np.asarray(c_tilde, dtype=float))
    dim = a_tilde.shape[0]
    if dim > MAX_RANK_DIM:
        raise InvalidSystemError(f'observability matrix rank is limited to dimension {MAX_RANK_DIM}, got {dim}')
    if dim == 0 or not np.any(c_tilde):
        return 0

    scale = max(1.0, float(np.linalg.norm(a_tilde, 2)))
    at = (a_tilde / scale).T
    rcond = tol * dim

    basis = orth(c_tilde.T, rcond=rcond)
    for _ in range(dim):
        grown = orth(np.hstack([basis, at @ basis]), rcond=rcond)
        if grown.shape[1] == basis.shape[1]:
            break
        basis = grown
    return int(basis.shape[1])
