"""Exception types raised by constructions, metrics and searches."""


class TopologyError(Exception):
    """Base class for construction and validation failures."""


class DisconnectedGraph(TopologyError):
    pass


class InvalidGraph(TopologyError):
    """A graph fails simplicity/regularity checks (e.g. on file load)."""


class DegenerateJumpSet(TopologyError):
    pass


class InvalidPartition(TopologyError):
    pass


class AsymmetricJumpSet(TopologyError):
    pass


class NotCoprime(TopologyError):
    pass


class WindowViolation(TopologyError):
    pass


class NoFeasibleOffset(TopologyError):
    pass


class NoFeasibleJumpSet(TopologyError):
    pass


class InfeasibleSample(TopologyError):
    pass


class IncompatibleDensity(TopologyError):
    pass


class ConnectorExhaustion(TopologyError):
    pass


class RangeViolation(AssertionError):
    """An edge longer than the link range survived construction. Always a bug."""
