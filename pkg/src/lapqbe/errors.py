"""Exception hierarchy shared by all modules."""


class LapqbeError(Exception):
    """Base class for all package errors."""


class SpecificationError(LapqbeError, ValueError):
    """Invalid problem definition or input (bad qubit count, spacing, weights, state)."""


class StructuralError(LapqbeError, ValueError):
    """Malformed circuit: unknown qubit, overlapping controls, unsupported control."""


class ResourceError(LapqbeError, RuntimeError):
    """A configured size cap (matrix dimension, simulated qubits) was exceeded."""
