"""Exception types shared across the package."""


class SsdeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SsdeError):
    """An evaluation point lies outside a function's domain."""


class ShapeMismatchError(SsdeError):
    """Two segmented functions do not share breakpoints and node counts."""


class TilingError(SsdeError):
    """The horizontal scales do not tile the domain (sum of |a_i| is not 1)."""


class ShiftMismatchError(SsdeError):
    """A horizontal shift is inconsistent with the derived breakpoints."""


class DegenerateMapError(SsdeError):
    """A graph map has zero horizontal scale."""


class ShearUnsupportedError(SsdeError):
    """A problem file carries a nonzero shear entry, which is not supported."""


class DomainMismatchError(SsdeError):
    """A function's domain or breakpoints do not match the piecemealing's."""


class ArgumentOutOfRangeError(SsdeError):
    """A back-mapped argument falls outside the domain beyond rounding slack."""


class LConditionViolatedError(SsdeError):
    """The orientation-weighted scale sum is nonzero, so the boundary system
    for the solution's total integral cannot be closed."""


class NotContractiveError(SsdeError):
    """The iteration's contraction factor is not below 1."""


class NoAdmissibleAError(SsdeError):
    """The boundary system is inconsistent: no total integral is admissible."""


class MissingTargetAError(SsdeError):
    """The boundary system admits a family of solutions and no target total
    integral was supplied to pick one."""


class TargetMismatchError(SsdeError):
    """A target total integral disagrees with the unique admissible one."""


class InitialIntegralMismatchError(SsdeError):
    """The initial function's integral does not match the admissible total."""


class OrderingError(SsdeError):
    """Bump knots are not strictly increasing."""


class NonConvergentError(SsdeError):
    """Brute-force quadrature refinements failed to settle."""


class ProblemFileError(SsdeError):
    """A problem file is malformed or violates the input contract."""
