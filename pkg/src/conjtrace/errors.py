"""Exception hierarchy shared by all modules."""


class ConjTraceError(Exception):
    """Base class for every error raised by conjtrace."""


class ParseError(ConjTraceError, ValueError):
    pass


class InvalidLetter(ParseError):
    pass


class RankMismatch(ConjTraceError, ValueError):
    pass


class TrivialElement(ConjTraceError, ValueError):
    pass


class NotACover(ConjTraceError, ValueError):
    pass


class MissingAssignment(ConjTraceError, KeyError):
    pass


class ZeroInverse(ConjTraceError, ZeroDivisionError):
    pass


class ArithmeticDomainError(ConjTraceError, ArithmeticError):
    pass


class BadPrime(ConjTraceError, ValueError):
    pass


class NotSeparated(ConjTraceError, ValueError):
    pass


class ConjugatePair(ConjTraceError, ValueError):
    pass


class UnluckySpecialization(ConjTraceError):
    pass


class BadDimension(ConjTraceError, ValueError):
    pass


class TooLarge(ConjTraceError):
    pass


class BadGroup(ConjTraceError, ValueError):
    pass


class LiftNotFound(ConjTraceError):
    pass


class BadCertificate(ConjTraceError, ValueError):
    pass
