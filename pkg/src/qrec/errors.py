"""Exception types. Every ``*Inconclusive`` means a configured threshold was hit, never a wrong answer."""


class QrecError(Exception):
    pass


class Inconclusive(QrecError):
    """A finite search was cut off by a threshold."""


class IsoTestInconclusive(Inconclusive):
    pass


class DecomposeInconclusive(Inconclusive):
    pass


class ClosureInconclusive(Inconclusive):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class BoundExceeded(QrecError):
    """A dimension or enumeration cap was exceeded."""


class HypothesisFailed(QrecError):
    """A hypothesis of a transfer statement does not hold; ``witness`` names the offending object."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UniverseIncomplete(QrecError):
    """An object did not match any member of the target universe."""

    def __init__(self, message: str, obj=None):
        super().__init__(message)
        self.obj = obj
