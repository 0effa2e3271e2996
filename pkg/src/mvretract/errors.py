"""Exception hierarchy shared by all mvretract modules."""


class MvRetractError(Exception):
    """Base class for every error raised by this package."""


class ParseError(MvRetractError):
    """Raised on malformed term text; carries the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ArityError(MvRetractError):
    pass


class DimensionMismatchError(MvRetractError):
    pass


class NotRegularError(MvRetractError):
    pass


class ZeroDimensionalError(MvRetractError):
    pass


class PointOutsideSupportError(MvRetractError):
    pass


class PointOutsideDomainError(MvRetractError):
    pass


class NotASubsetError(MvRetractError):
    pass


class NotClosedDomainError(MvRetractError):
    pass


class ShapeMismatchError(MvRetractError):
    pass


class BlowUpCapExceededError(MvRetractError):
    """Desingularization exceeded its configured blow-up budget."""


class NotIdempotentError(MvRetractError):
    """Raised when a candidate map fails sigma(sigma(x)) = sigma(x).

    ``witness`` is a rational point where the double application differs.
    """

    def __init__(self, witness):
        shown = "(" + ", ".join(str(c) for c in witness) + ")"
        super().__init__(f"map is not idempotent; differs at {shown}")
        self.witness = witness


class ImproperComplexError(MvRetractError):
    """A simplex collection violates the proper-complex invariant."""


class DiscontinuityError(MvRetractError):
    """Affine pieces of a map disagree on a shared face."""


class UnknownFixtureError(MvRetractError):
    pass


class VerificationError(MvRetractError):
    """A supplied object could not be verified by the implemented checks."""
