"""Quantum voids in the CHSH no-signaling polytope.

Behaviors, the nonlocal simplex and its faces, principle checks, a small
SDP engine with NPA levels 1 and 1+ab, explicit qubit/qutrit models and
Hardy's argument.
"""

from ._jit import JIT_ENABLED
from .correlations import Behavior, chsh_value, from_free, index_of, local_box, pr_box
from .errors import (
    BellscopeError,
    ConditionsViolated,
    DomainError,
    Inconclusive,
    InvalidBehavior,
    OutOfSimplex,
    PredicateInconsistent,
    WitnessNotFound,
)
from .geometry import Face, Segment, center_segment

__version__ = "0.1.0"

__all__ = [
    "JIT_ENABLED",
    "Behavior",
    "chsh_value",
    "from_free",
    "index_of",
    "local_box",
    "pr_box",
    "Face",
    "Segment",
    "center_segment",
    "BellscopeError",
    "ConditionsViolated",
    "DomainError",
    "Inconclusive",
    "InvalidBehavior",
    "OutOfSimplex",
    "PredicateInconsistent",
    "WitnessNotFound",
]
