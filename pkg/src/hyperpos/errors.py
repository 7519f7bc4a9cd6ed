"""Exception types shared by all modules."""


class HyperposError(Exception):
    """Base class."""


class InvalidParameter(HyperposError, ValueError):
    pass


class NonConvergent(HyperposError):
    pass


class PrecisionLoss(HyperposError):
    pass


class DegenerateCase(HyperposError):
    pass


class OrderViolation(HyperposError, ValueError):
    pass


class CaseUnsupported(HyperposError):
    pass


class SaalschutzViolation(HyperposError, ValueError):
    pass


class DenominatorPole(HyperposError):
    pass


class PreconditionViolation(HyperposError, ValueError):
    pass


class OffPlane(HyperposError, ValueError):
    pass


class InvalidNu(HyperposError, ValueError):
    pass


class QuadratureFailure(HyperposError):
    pass
