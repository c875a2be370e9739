"""Exception hierarchy for ok_groupoid"""


class GroupoidException(ValueError):
    """Exception base class for `ok_groupoid` errors."""

    where: str | None
    """What the error is about: a `file:line`, arrows, a unit, etc."""

    def __init__(self, message: str, where: str | None = None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class MalformedSpec(GroupoidException):
    """Exception raised for unparseable or inconsistent groupoid input."""

    pass


class AxiomViolation(GroupoidException):
    """Exception raised when a table breaks a groupoid law."""

    pass


class UndefinedComposition(GroupoidException):
    """Exception raised composing arrows with `s(γ₁) != r(γ₂)`."""

    pass


class UnknownArrow(GroupoidException):
    """Exception raised for an arrow id outside the groupoid."""

    pass


class NotAUnit(GroupoidException):
    """Exception raised when a unit is required but another arrow given."""

    pass


class GroupoidMismatch(GroupoidException):
    """Exception raised combining values over different groupoids."""

    pass


class NotInIsotropy(GroupoidException):
    """Exception raised for an arrow outside the isotropy group `G(x)`."""

    pass


class SupportOutsideIsotropy(NotInIsotropy):
    """Exception raised for an element not supported on `G(x)`."""

    pass


class BaseUnitMismatch(GroupoidException):
    """Exception raised combining module vectors over different units."""

    pass


class InvalidRep(GroupoidException):
    """Exception raised for a non-unitary or non-multiplicative `G(x)` rep."""

    pass


class NotSelfAdjoint(GroupoidException):
    """Exception raised when a self-adjoint element is required."""

    pass


class SpectralException(GroupoidException):
    """Exception base class for dense linear algebra failures."""

    pass


class NotSquare(SpectralException):
    """Exception raised when a square matrix is required."""

    pass


class NotHermitian(SpectralException):
    """Exception raised when a Hermitian matrix is required."""

    pass


class NoConvergence(SpectralException):
    """Exception raised when Jacobi iteration hits its sweep limit."""

    pass


class SingularMatrix(SpectralException):
    """Exception raised inverting a matrix with a zero pivot."""

    pass
