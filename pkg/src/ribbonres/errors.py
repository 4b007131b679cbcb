"""Exception hierarchy shared by every module."""


class RibbonResError(Exception):
    pass


class InvalidCompositionError(RibbonResError, ValueError):
    pass


class UnsupportedDiagramError(RibbonResError, ValueError):
    pass


class FieldRequiredError(RibbonResError, TypeError):
    pass


class NotAComplexError(RibbonResError, ArithmeticError):
    pass


class DegenerateInputError(RibbonResError, ValueError):
    """Raised for inputs whose answer is trivial and has no resolution to build."""


class PreconditionError(RibbonResError, ValueError):
    pass


class ResourceError(RibbonResError):
    pass


class VerificationError(RibbonResError, AssertionError):
    """A checked identity failed.  ``details`` carries a serializable counterexample."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class ViolatedFreenessError(VerificationError):
    pass


class ViolatedSpanError(VerificationError):
    pass
