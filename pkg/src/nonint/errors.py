"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` which the CLI
reports alongside the message.
"""


class NonintError(Exception):
    code = "Error"


class DimensionMismatch(NonintError, ValueError):
    code = "DimensionMismatch"


class DegreeTooHigh(NonintError, ValueError):
    code = "DegreeTooHigh"


class SpecParseError(NonintError, ValueError):
    code = "SpecParseError"


class NotAnEquilibrium(NonintError):
    code = "NotAnEquilibrium"


class EmptyField(NonintError):
    code = "EmptyField"


class DefectiveMatrix(NonintError):
    code = "DefectiveMatrix"


class IllConditioned(NonintError):
    code = "IllConditioned"


class BiorthogonalityFailure(NonintError):
    code = "BiorthogonalityFailure"


class CaseMismatch(NonintError):
    code = "CaseMismatch"


class QuadraticTermsPresent(NonintError):
    code = "QuadraticTermsPresent"


class NormalFormError(NonintError):
    code = "NormalFormError"


class NotAdapted(NonintError):
    code = "NotAdapted"


class DomainError(NonintError, ValueError):
    code = "DomainError"


class UndefinedIntegral(NonintError):
    code = "Undefined"


class StiffnessFailure(NonintError):
    code = "StiffnessFailure"


class PreconditionFailed(NonintError):
    code = "PreconditionFailed"

    def __init__(self, message, *, precondition=None, sample=None):
        super().__init__(message)
        self.precondition = precondition
        self.sample = sample


class TooLarge(NonintError):
    code = "TooLarge"


class Degenerate(NonintError):
    code = "Degenerate"


class ParameterDomainError(NonintError, ValueError):
    code = "ParameterDomainError"
