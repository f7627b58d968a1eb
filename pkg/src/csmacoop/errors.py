"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid scenario, network, parameter, or configuration input."""


class SimulationError(RuntimeError):
    """A simulation run could not produce a usable result."""


class ProtocolError(RuntimeError):
    """A protocol state machine detected an internal invariant breach."""
