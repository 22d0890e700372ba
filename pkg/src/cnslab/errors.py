"""Exception hierarchy for cnslab.

Every domain failure raised by the library derives from ``CnsLabError`` so the CLI can
map it to exit code 2 in one place.
"""


class CnsLabError(Exception):
    """Base class for all domain errors."""


class ParseError(CnsLabError, ValueError):
    pass


# ring
class NotSquarefree(CnsLabError, ValueError):
    pass


class NotPositive(CnsLabError, ValueError):
    pass


class FieldMismatch(CnsLabError, ValueError):
    pass


class NotDivisible(CnsLabError, ArithmeticError):
    pass


# cns
class NotQuadratic(CnsLabError, ValueError):
    pass


class NotCns(CnsLabError, ValueError):
    pass


class RingMismatch(CnsLabError, ValueError):
    pass


class NoDigit(CnsLabError, AssertionError):
    pass


class AmbiguousDigit(CnsLabError, AssertionError):
    pass


class NonTerminating(CnsLabError, RuntimeError):
    def __init__(self, message: str, gamma=None, steps: int = 0):
        super().__init__(message)
        self.gamma = gamma
        self.steps = steps

    def __reduce__(self):
        return (self.__class__, (self.args[0], self.gamma, self.steps))


class DigitOutOfRange(CnsLabError, ValueError):
    pass


# digitstat / bounds
class ZeroInput(CnsLabError, ValueError):
    pass


class ZeroPolynomial(CnsLabError, ValueError):
    pass


class DomainError(CnsLabError, ValueError):
    pass


# multdep
class FactorizationIncomplete(CnsLabError, ArithmeticError):
    def __init__(self, message: str, cofactor: int = 0):
        super().__init__(message)
        self.cofactor = cofactor

    def __reduce__(self):
        return (self.__class__, (self.args[0], self.cofactor))


class UnitInput(CnsLabError, ValueError):
    pass


# theorem_lab
class IndexOutOfRange(CnsLabError, IndexError):
    pass


class NotGapCase(CnsLabError, ValueError):
    pass


class DependentBases(CnsLabError, ValueError):
    pass


class EmptyInput(CnsLabError, ValueError):
    pass


class NotDependent(CnsLabError, ValueError):
    pass


# persistence
class FixtureMismatch(CnsLabError):
    def __init__(self, name: str, stored, observed):
        super().__init__(f"Fixture '{name}' drifted: stored {stored!r}, observed {observed!r}")
        self.name = name
        self.stored = stored
        self.observed = observed

    def __reduce__(self):
        return (self.__class__, (self.name, self.stored, self.observed))
