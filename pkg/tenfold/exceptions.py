class TenfoldError(Exception):
    exit_code = 1

    def __init__(self, message: str, name: str = None) -> None:
        self.message = message
        self.name = name or self.__class__.__name__
        super().__init__(message)

    def __str__(self):
        return self.message


class SpecParseError(TenfoldError):
    """
    Raised when a spec file, a family file or a command line argument can not be parsed.
    """

    exit_code = 2


class InconsistentSpec(TenfoldError):
    """
    Raised when a parsed spec breaks one of the symmetry rules.
    The message names the rule."""

    exit_code = 3


class StepTooLarge(TenfoldError):
    """
    Raised when adjacent samples of a family are too far apart to read off a winding.
    """

    exit_code = 4


class InvalidGrading(TenfoldError):
    """
    Raised when a sample is not a grading (square, hermiticity or anticommutation fails)
    or the family has too few samples.
    """

    exit_code = 5


class CocycleError(TenfoldError):
    """
    Raised on a non-normalized or non-closed cocycle, or a phase the base field can't carry.
    """


class NotReducedError(TenfoldError):
    """
    Raised when standardize gets data that was not put through reduce_antiunitaries.
    """


class NotAntiunitary(TenfoldError):
    """
    Raised when the element handed to pm1_reduce is unitary.
    """


class WedderburnError(TenfoldError):
    pass


class ExtensionError(TenfoldError):
    """
    Raised when a finite extension is malformed: N not normal, N outside ker(c), bad section.
    """


class Gapless(TenfoldError):
    pass


class NotInvolution(TenfoldError):
    pass


class NotOdd(TenfoldError):
    pass


class SymmetryViolation(TenfoldError):
    pass


class VerificationFailed(TenfoldError):
    exit_code = 1


class RepresentationError(TenfoldError):
    """
    Raised when a constructed Clifford module fails its identities or the
    irreducible list fails the dimension count.
    """
