"""Exception hierarchy shared by the library and the command line."""


class ZernikeError(Exception):
    exit_code = 3


class ParameterError(ZernikeError, ValueError):
    """Invalid order/repetition, shapes, ranges or configuration."""

    exit_code = 1


class DomainError(ParameterError):
    """Argument outside the domain of a special function."""


class AliasingError(ParameterError):
    """Transform length too short to resolve every repetition of an order."""


class NumericalError(ZernikeError, ArithmeticError):
    exit_code = 3


class CoefficientOverflowError(NumericalError, OverflowError):
    """Factorial-sum coefficients no longer representable in float64."""


class UndefinedDenominatorError(NumericalError, ZeroDivisionError):
    pass


class MomentFileError(ZernikeError):
    """Malformed moment file; ``offset`` is the character position, if known."""

    exit_code = 2

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class InputError(ZernikeError, OSError):
    """A file that cannot be read or is not in a supported format."""

    exit_code = 2

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class ImageReadError(InputError):
    pass
