# topology/errors.py

"""
Exception types shared by the topology, verification and cli packages.

Everything subclasses a builtin so callers that only know about
ValueError / RuntimeError still catch them.
"""

from __future__ import annotations


class NetobsError(Exception):
    """Base class for every error raised on purpose by this project."""


class InvalidSystemError(NetobsError, ValueError):
    """A system description violates one of its invariants."""


class SystemFileError(InvalidSystemError):
    """A system file could not be read or parsed."""


class InvalidWeightsError(NetobsError, ValueError):
    """Negative or non-finite matching weights or link costs."""


class InconsistentMatchingError(NetobsError, ValueError):
    """A matching uses edges the graph does not have, or reuses a vertex."""


class UnobservablePlantError(NetobsError, RuntimeError):
    """The plant (A, C) is structurally unobservable; no link addition can fix it."""


class ParametrizationError(NetobsError, RuntimeError):
    """No admissible W(G) was found within the retry budget."""


class NumericFailureError(NetobsError, RuntimeError):
    """A linear-algebra routine (eigenvalues, SVD) did not converge."""
