class BellscopeError(Exception):
    pass


class InvalidBehavior(BellscopeError, ValueError):
    """A probability table violates normalisation, positivity or no-signalling."""


class OutOfSimplex(BellscopeError, ValueError):
    """Free coordinates whose reconstruction leaves [0, 1]."""


class DomainError(BellscopeError, ValueError):
    pass


class PredicateInconsistent(BellscopeError):
    """A membership predicate rejects the local end of a segment."""


class Inconclusive(BellscopeError):
    """The SDP engine hit its iteration cap without a verdict."""


class WitnessNotFound(BellscopeError):
    def __init__(self, masks):
        self.masks = sorted(masks)
        super().__init__(f"no quantum witness found for face masks {self.masks}")


class ConditionsViolated(BellscopeError, ValueError):
    """A behavior fails one of the zero conditions of a Hardy argument."""
