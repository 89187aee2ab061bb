"""Exception types shared across the package."""


class GridFreeError(Exception):
    """Base class for all errors raised by gridfree."""


# field arithmetic
class NotPrime(GridFreeError, ValueError):
    pass


class EvenCharacteristic(GridFreeError, ValueError):
    pass


# q odd is enforced when the field is made, so an even field never reaches a builder
EvenField = EvenCharacteristic


class DegreeOutOfRange(GridFreeError, ValueError):
    pass


class FieldMismatch(GridFreeError, TypeError):
    pass


class DivisionByZero(GridFreeError, ZeroDivisionError):
    pass


class NotEnoughNonsquares(GridFreeError, ValueError):
    pass


# geometry
class CoincidentPoints(GridFreeError, ValueError):
    pass


class IdenticalLines(GridFreeError, ValueError):
    pass


class LineAtInfinity(GridFreeError, ValueError):
    pass


# hypergraphs
class NotUniform(GridFreeError, ValueError):
    pass


class LinearityViolation(GridFreeError, ValueError):
    def __init__(self, pair, prior_edge, message=None):
        self.pair = pair
        self.prior_edge = prior_edge
        super().__init__(message or f"pair {pair} already covered by edge {prior_edge}")


class BoundViolated(GridFreeError, AssertionError):
    pass


# constructions
class TooManyLayers(GridFreeError, ValueError):
    pass


class NonPrimeForFR(GridFreeError, ValueError):
    pass


# pattern search
class NoGeometry(GridFreeError, ValueError):
    pass


class InstanceTooLarge(GridFreeError, RuntimeError):
    pass


# Cayley-Bacharach checks
class DegreeOutOfScope(GridFreeError, ValueError):
    pass


class KernelTooLarge(GridFreeError, RuntimeError):
    pass


class GridTooLarge(GridFreeError, ValueError):
    pass


class ScenarioUnsatisfiable(GridFreeError, ValueError):
    pass


# pipeline
class ParseError(GridFreeError, ValueError):
    pass


class ChecksFailed(GridFreeError, RuntimeError):
    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.failures) or "checks failed")
