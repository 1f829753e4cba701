"""Exception types shared across the package."""


class MstageError(Exception):
    """Base class for all errors raised by this package."""


class MalformedModel(MstageError):
    """An LP model violates its structural invariants."""


class NumericalFailure(MstageError):
    """Floating-point simplex gave up (cycling guard or verification failure).

    Signals that the instance should be re-solved with rational arithmetic.
    """


class RoundLimitExceeded(MstageError):
    """Cutting-plane loop hit its round limit before the oracle went quiet."""

    def __init__(self, message, solution=None, rounds=0):
        super().__init__(message)
        self.solution = solution
        self.rounds = rounds


class ValueOutOfRange(MstageError):
    """A fractional input fell outside [0, 1] beyond tolerance."""


class SubsetDisconnected(MstageError):
    """Requested spanning structure does not exist on the given subset."""


class OddSubset(MstageError):
    """Perfect matching requested on an odd-sized vertex subset."""


class OddDegreeVertex(MstageError):
    """Eulerian circuit requested on a multigraph with an odd-degree vertex."""


class Disconnected(MstageError):
    """Eulerian circuit requested on a disconnected multigraph."""


class UncoverableElement(MstageError):
    """Some ground-set element belongs to no set at one of the time steps."""


class HalfIntegralityViolation(MstageError):
    """A basic LP solution coordinate was too far from {0, 1/2, 1}."""


class InstanceTooLarge(MstageError):
    """Brute-force guard tripped: the instance exceeds desk-scale limits."""


class SchemaError(MstageError):
    """Instance JSON is structurally invalid (wrong type / missing key)."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ValidationError(MstageError):
    """Instance JSON is well-formed but semantically invalid."""

    def __init__(self, message, field=""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
