"""Probability-vector algebra for two-outcome bipartite Bell scenarios.

A :class:`Behavior` stores ``p[x, y, a, b] = p(a, b | x, y)``. For the CHSH
scenario (two inputs per party) the 16 entries are also addressed by a single
index 1..16; indices 1..8 are the free coordinates of the nonlocal simplex
spanned by the canonical PR box and the eight local vertices on its CHSH
facet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidBehavior, OutOfSimplex

TOL = 1e-12

__all__ = [
    "TOL",
    "Behavior",
    "Correlators",
    "index_of",
    "entry_of",
    "from_free",
    "to_free",
    "pr_box",
    "local_box",
    "white_noise",
    "mixture",
    "chsh_value",
    "chsh_ch_form",
    "correlators",
    "random_ns_behavior",
    "ns_vertices",
]


def index_of(a: int, b: int, x: int, y: int) -> int:
    """Position 1..16 of p(a,b|x,y); 1..8 are the free coordinates."""
    for bit in (a, b, x, y):
        if bit not in (0, 1):
            raise ValueError(f"expected bits, got {(a, b, x, y)}")
    c = a ^ b ^ (x & y) ^ 1
    return 8 * c + 4 * x + 2 * y + a + 1


_ENTRIES = {index_of(a, b, x, y): (a, b, x, y) for a, b, x, y in itertools.product((0, 1), repeat=4)}


def entry_of(i: int) -> tuple[int, int, int, int]:
    """Inverse of :func:`index_of`: ``(a, b, x, y)`` for index ``i``."""
    return _ENTRIES[i]


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional distribution p(a,b|x,y) with binary outcomes.

    ``p`` has shape ``(n_inputs_a, n_inputs_b, 2, 2)`` indexed ``[x, y, a, b]``.
    Construction validates normalisation, positivity and no-signalling.
    """

    p: np.ndarray

    def __post_init__(self):
        arr = np.array(self.p, dtype=float)
        if arr.ndim != 4 or arr.shape[2:] != (2, 2):
            raise InvalidBehavior(f"expected shape (nx, ny, 2, 2), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)
        problems = self.violations()
        if problems:
            raise InvalidBehavior("; ".join(problems))

    @property
    def scenario(self) -> tuple[int, int, int, int]:
        nx, ny = self.p.shape[:2]
        return (nx, ny, 2, 2)

    @property
    def is_chsh(self) -> bool:
        return self.p.shape[:2] == (2, 2)

    def prob(self, a: int, b: int, x: int, y: int) -> float:
        return float(self.p[x, y, a, b])

    def marginal_a(self, a: int, x: int, y: int = 0) -> float:
        return float(self.p[x, y, a, :].sum())

    def marginal_b(self, b: int, y: int, x: int = 0) -> float:
        return float(self.p[x, y, :, b].sum())

    def violations(self, tol: float = TOL) -> list[str]:
        """Human-readable list of broken invariants (empty when valid)."""
        p = self.p
        out = []
        if p.min() < -tol or p.max() > 1 + tol:
            out.append(f"entries outside [0,1] (min {p.min():.3g}, max {p.max():.3g})")
        norm = p.sum(axis=(2, 3))
        if np.abs(norm - 1).max() > tol:
            out.append(f"normalisation off by {np.abs(norm - 1).max():.3g}")
        pa = p.sum(axis=3)  # [x, y, a]
        pb = p.sum(axis=2)  # [x, y, b]
        if np.abs(pa - pa[:, :1, :]).max() > tol:
            out.append("Alice's marginals depend on y")
        if np.abs(pb - pb[:1, :, :]).max() > tol:
            out.append("Bob's marginals depend on x")
        return out

    def vector(self) -> np.ndarray:
        """The 16 CHSH entries in :func:`index_of` order."""
        self._require_chsh()
        return np.array([self.p[x, y, a, b] for a, b, x, y in (_ENTRIES[i] for i in range(1, 17))])

    def free(self) -> np.ndarray:
        """Free coordinates p_1..p_8."""
        return self.vector()[:8]

    @classmethod
    def from_vector(cls, vec) -> "Behavior":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (16,):
            raise InvalidBehavior(f"expected 16 entries, got shape {vec.shape}")
        p = np.empty((2, 2, 2, 2))
        for i in range(1, 17):
            a, b, x, y = _ENTRIES[i]
            p[x, y, a, b] = vec[i - 1]
        return cls(p)

    def _require_chsh(self):
        if not self.is_chsh:
            raise ValueError(f"operation defined for the 2x2 scenario only, got {self.scenario}")

    def __repr__(self):
        return f"Behavior(scenario={self.scenario})"


@dataclass(frozen=True)
class Correlators:
    cxy: np.ndarray  # cxy[x, y]
    cx: np.ndarray
    cy: np.ndarray


def _dependent_sources(j: int) -> tuple[int, int, int]:
    # j in 9..16 encodes (x, y, a) through j - 9 = 4x + 2y + a
    r = j - 9
    x, y, a = r >> 2, (r >> 1) & 1, r & 1
    l = 4 * x + 2 * (y ^ 1) + a + 1
    m = 4 * (x ^ 1) + 2 * y + (a ^ y ^ 1) + 1
    n = 4 * (x ^ 1) + 2 * (y ^ 1) + (a ^ y) + 1
    return l, m, n


_SOURCES = {j: _dependent_sources(j) for j in range(9, 17)}


def from_free(f) -> Behavior:
    """Unique no-signalling behavior with free coordinates ``f`` (p_1..p_8)."""
    f = np.asarray(f, dtype=float)
    if f.shape != (8,):
        raise ValueError(f"expected 8 free variables, got shape {f.shape}")
    vec = np.empty(16)
    vec[:8] = f
    rest = 0.5 * (1.0 - f.sum())
    for j, (l, m, n) in _SOURCES.items():
        vec[j - 1] = f[l - 1] + f[m - 1] + f[n - 1] + rest
    if vec.min() < -TOL or vec.max() > 1 + TOL:
        raise OutOfSimplex(f"reconstructed entries leave [0,1]: min {vec.min():.3g}, max {vec.max():.3g}")
    return Behavior.from_vector(vec)


def to_free(beh: Behavior) -> np.ndarray:
    return beh.free()


def pr_box(alpha: int = 0, beta: int = 0, gamma: int = 0) -> Behavior:
    p = np.zeros((2, 2, 2, 2))
    for x, y, a, b in itertools.product((0, 1), repeat=4):
        if a ^ b == (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma:
            p[x, y, a, b] = 0.5
    return Behavior(p)


def local_box(alpha1: int, alpha2: int, beta1: int, beta2: int, n_inputs: int = 2) -> Behavior:
    """Deterministic box a = alpha1*x XOR alpha2, b = beta1*y XOR beta2."""
    p = np.zeros((n_inputs, n_inputs, 2, 2))
    for x, y in itertools.product(range(n_inputs), repeat=2):
        p[x, y, (alpha1 * x & 1) ^ alpha2, (beta1 * y & 1) ^ beta2] = 1.0
    return Behavior(p)


def white_noise(nx: int = 2, ny: int = 2) -> Behavior:
    return Behavior(np.full((nx, ny, 2, 2), 0.25))


def mixture(behaviors, weights) -> Behavior:
    weights = np.asarray(weights, dtype=float)
    p = sum(w * beh.p for w, beh in zip(weights, behaviors))
    return Behavior(p)


def chsh_value(beh: Behavior) -> float:
    """1 - sum of the free coordinates; positive exactly on nonlocal points
    of the canonical region."""
    return float(1.0 - beh.free().sum())


def chsh_ch_form(beh: Behavior) -> float:
    """CH form: p(00|00)+p(00|01)+p(00|10)-p(00|11)-p_A(0|0)-p_B(0|0)."""
    beh._require_chsh()
    p = beh.p
    return float(p[0, 0, 0, 0] + p[0, 1, 0, 0] + p[1, 0, 0, 0] - p[1, 1, 0, 0]
                 - beh.marginal_a(0, 0) - beh.marginal_b(0, 0))


def correlators(beh: Behavior) -> Correlators:
    beh._require_chsh()
    p = beh.p
    cxy = p[:, :, 0, 0] + p[:, :, 1, 1] - p[:, :, 0, 1] - p[:, :, 1, 0]
    cx = np.array([p[x, 0, 0, :].sum() - p[x, 0, 1, :].sum() for x in (0, 1)])
    cy = np.array([p[0, y, :, 0].sum() - p[0, y, :, 1].sum() for y in (0, 1)])
    return Correlators(cxy, cx, cy)


def ns_vertices() -> list[Behavior]:
    """All 24 vertices of the CHSH no-signalling polytope (16 local, 8 PR)."""
    out = [local_box(*t) for t in itertools.product((0, 1), repeat=4)]
    out += [pr_box(*t) for t in itertools.product((0, 1), repeat=3)]
    return out


def random_ns_behavior(rng: np.random.Generator, concentration: float = 1.0) -> Behavior:
    """Random point of the CHSH no-signalling polytope (Dirichlet mixture of vertices)."""
    verts = ns_vertices()
    w = rng.dirichlet(np.full(len(verts), concentration))
    return Behavior(np.clip(sum(wi * v.p for wi, v in zip(w, verts)), 0.0, 1.0))
