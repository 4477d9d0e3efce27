"""Exception hierarchy shared by all corat modules."""


class CoratError(Exception):
    """Base class for every error raised by corat."""


class TypeMismatch(CoratError, TypeError):
    """Objects, rings or morphism endpoints do not line up."""


class NonInvertible(CoratError, ArithmeticError):
    pass


class InvalidMorphism(CoratError, ValueError):
    """A matrix violates the well-definedness congruence."""


class TooLarge(CoratError):
    """An enumeration would exceed the configured bound."""


class InfiniteRing(CoratError):
    pass


class InvalidStructure(CoratError, ValueError):
    """A structure fails its axioms where validity is a precondition."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidModule(InvalidStructure):
    pass


class InvalidComodule(InvalidStructure):
    pass


class InvalidEntwinedModule(InvalidStructure):
    pass


class NotAMorphism(CoratError, ValueError):
    pass


class CoactionNotUnique(CoratError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FactorizationFailed(CoratError):
    pass


class NotApplicable(CoratError):
    pass
