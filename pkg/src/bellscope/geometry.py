"""The nonlocal simplex ch{PR, L1..L8} and its faces.

A face is named by the set of free coordinates forced to zero; the face
zeroing S is the convex hull of the PR box and the local vertices L_i with
i not in S, and has dimension 8 - |S|.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .correlations import Behavior, index_of, local_box, pr_box

__all__ = [
    "LOCAL_VERTEX_PARAMS",
    "S1",
    "S2",
    "Face",
    "Segment",
    "nl_vertices",
    "local_vertex",
    "void_edges",
    "void_rule",
    "center_segment",
    "all_faces",
]

# (alpha1, alpha2, beta1, beta2) of L1..L8
LOCAL_VERTEX_PARAMS = {
    1: (1, 0, 1, 1),
    2: (1, 1, 1, 0),
    3: (0, 0, 1, 0),
    4: (0, 1, 1, 1),
    5: (1, 1, 0, 1),
    6: (1, 0, 0, 0),
    7: (0, 0, 0, 0),
    8: (0, 1, 0, 1),
}

S1 = frozenset({1, 2, 7, 8})
S2 = frozenset({3, 4, 5, 6})

_PR = pr_box()
_LOCAL = {i: local_box(*t) for i, t in LOCAL_VERTEX_PARAMS.items()}


def local_vertex(i: int) -> Behavior:
    return _LOCAL[i]


def nl_vertices() -> list[Behavior]:
    """L1..L8 followed by the canonical PR box."""
    return [_LOCAL[i] for i in range(1, 9)] + [_PR]


@dataclass(frozen=True)
class Face:
    zeroed: frozenset

    def __post_init__(self):
        z = frozenset(int(i) for i in self.zeroed)
        if not z or not z <= set(range(1, 9)):
            raise ValueError(f"zeroed set must be a nonempty subset of 1..8, got {sorted(z)}")
        object.__setattr__(self, "zeroed", z)

    @classmethod
    def from_mask(cls, mask: int) -> "Face":
        return cls(frozenset(i + 1 for i in range(8) if mask >> i & 1))

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.zeroed)

    @property
    def dim(self) -> int:
        return 8 - len(self.zeroed)

    @property
    def local_vertices(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, 9) if i not in self.zeroed)

    def contains(self, beh: Behavior, tol: float = 1e-8) -> bool:
        f = beh.free()
        return all(f[i - 1] <= tol for i in self.zeroed)

    def __str__(self):
        return "{" + ",".join(map(str, sorted(self.zeroed))) + "}"


@dataclass(frozen=True, eq=False)
class Segment:
    """mu * PR + (1 - mu) * sum_i w_i L_i, mu in [0, 1]."""

    local_weights: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        w = np.array(self.local_weights, dtype=float)
        if w.shape != (8,) or w.min() < 0 or abs(w.sum() - 1) > 1e-12:
            raise ValueError("local weights must be 8 nonnegative reals summing to 1")
        w.setflags(write=False)
        object.__setattr__(self, "local_weights", w)

    @classmethod
    def through(cls, local: Behavior, label: str = "") -> "Segment":
        """Segment whose local end is ``local`` (a point on the local facet)."""
        return cls(local.free(), label)

    def local_point(self) -> Behavior:
        return self.point(0.0)

    def point(self, mu: float) -> Behavior:
        p = mu * _PR.p
        for i, wi in enumerate(self.local_weights, start=1):
            if wi:
                p = p + (1.0 - mu) * wi * _LOCAL[i].p
        return Behavior(p)


def _void_pairs():
    for a, x, y in itertools.product((0, 1), repeat=3):
        first = index_of(a ^ 1, a ^ (x & y), x, y)
        second = index_of(a ^ 1, a ^ (x & y) ^ x, x, y ^ 1)
        alternate = index_of(a ^ 1 ^ y, a ^ (x & y), x ^ 1, y)
        yield (a, x, y), first, second, alternate


def void_edges() -> set[frozenset]:
    """Pairs of free coordinates whose joint vanishing leaves no quantum nonlocality."""
    edges = set()
    for _, first, second, alternate in _void_pairs():
        edges.add(frozenset((first, second)))
        edges.add(frozenset((first, alternate)))
    return edges


_EDGES = sorted(tuple(sorted(e)) for e in void_edges())


def void_rule(face: Face):
    """Rule-based void evidence: ``("edge", (i, j))``, ``("S1", ...)``,
    ``("S2", ...)`` or ``None`` when neither rule applies."""
    for i, j in _EDGES:
        if i in face.zeroed and j in face.zeroed:
            return ("edge", (i, j))
    if S1 <= face.zeroed:
        return ("S1", tuple(sorted(S1)))
    if S2 <= face.zeroed:
        return ("S2", tuple(sorted(S2)))
    return None


def center_segment(face: Face) -> Segment:
    verts = face.local_vertices
    if not verts:
        raise ValueError("the 0-dimensional face has no local vertices")
    w = np.zeros(8)
    w[[i - 1 for i in verts]] = 1.0 / len(verts)
    return Segment(w, label=f"center{face}")


def all_faces() -> list[Face]:
    return [Face.from_mask(m) for m in range(1, 256)]
