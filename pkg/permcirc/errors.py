"""Exception hierarchy shared by every permcirc module.

Each class carries the exit code the command line maps it to, so library
code only ever raises and ``cli.main`` decides how the process ends.
"""


class PermcircError(Exception):
    exit_code = 1


class CircuitParseError(PermcircError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingHeader(CircuitParseError):
    pass


class IndexOutOfRange(CircuitParseError):
    pass


class DuplicateToffoliIndex(CircuitParseError):
    pass


class UnknownGateName(CircuitParseError):
    pass


class MalformedLine(CircuitParseError):
    pass


class SizeCapError(PermcircError):
    exit_code = 3


class TooManyVariables(SizeCapError):
    pass


class TooLarge(SizeCapError):
    pass


class TooManyQubits(SizeCapError):
    pass


class DisagreementError(PermcircError):
    exit_code = 4


class NotNormalized(PermcircError):
    pass


class UnboundVariable(PermcircError):
    pass


class BadBetaProduct(PermcircError):
    pass


class ConflictingBoundary(PermcircError):
    pass


class NonIntegerResult(PermcircError):
    pass


class NoConvergence(PermcircError):
    pass


class UnsupportedPolynomial(PermcircError):
    pass
