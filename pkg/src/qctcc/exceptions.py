"""Errors raised across the package, named after the contract they guard."""


class QctccError(Exception):
    """Base class for all package errors."""


class FcidumpError(QctccError):
    """Malformed FCIDUMP input; message carries the offending line number."""


class UnsupportedReferenceError(QctccError):
    """Reference determinant cannot be built (odd electron count)."""


class ActiveSpaceError(QctccError):
    """Requested active space exceeds the available orbitals/electrons."""


class DimensionCapError(QctccError):
    """Determinant basis larger than the configured cap."""


class QubitCapError(QctccError):
    """Active space needs more qubits than the configured cap."""


class EigensolverError(QctccError):
    """Iterative eigensolver failed to converge."""


class DegenerateReferenceError(QctccError):
    """Reference weight too small for interference-based phase recovery."""


class DegenerateProjectionError(QctccError):
    """All real parts vanish; real projection has no meaningful result."""


class CcDivergenceError(QctccError):
    """Coupled-cluster iteration diverged (amplitude RMS above threshold)."""


class TailoringError(QctccError):
    """Intermediate normalization breaks down (reference coefficient ~ 0)."""


class AmplitudeContractError(QctccError):
    """Amplitude tensors violate a stated contract (shape, mask, zeros)."""
