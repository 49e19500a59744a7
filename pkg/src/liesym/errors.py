class LieSymError(Exception):
    """Base class for every error raised by liesym."""


class NotALieAlgebra(LieSymError):
    pass


class DegenerateMetric(LieSymError):
    pass


class SingularBasisChange(LieSymError):
    pass


class NotOrthonormal(LieSymError):
    pass


class DivisionByZero(LieSymError, ZeroDivisionError):
    pass


class ParamOutOfRange(LieSymError, ValueError):
    pass


class NotASolution(LieSymError):
    pass


class InvalidStep(LieSymError, ValueError):
    pass


class DomainExceeded(LieSymError, ValueError):
    pass
