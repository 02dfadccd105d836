"""Hardy's nonlocality argument inside the nonlocal simplex.

An argument is labelled by bits (a, x, y). It asks for one positive entry
(the success probability) and three vanishing free coordinates, which
places it on a 5-dimensional face. The canonical argument (0, 0, 0) has
closed-form optimal two-qubit realisation; the others are reached from it
by local relabelings that fix the PR box.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .correlations import Behavior, index_of, pr_box
from .errors import ConditionsViolated
from .geometry import Face, Segment, local_vertex
from .quantum import QubitConfig, behavior_from_qubit

__all__ = [
    "HardyArgument",
    "CANONICAL",
    "HARDY_SUCCESS",
    "enumerate_arguments",
    "hardy_config",
    "hardy_max_point",
    "table1",
    "l_h_weights",
    "l_h_point",
    "hardy_segment",
    "hardy_success",
    "Relabeling",
    "pr_symmetries",
    "config_for",
    "hardy_point",
]

SQRT5 = math.sqrt(5.0)
HARDY_SUCCESS = (5.0 * SQRT5 - 11.0) / 2.0
CONDITION_TOL = 1e-9


@dataclass(frozen=True)
class HardyArgument:
    a: int
    x: int
    y: int

    @property
    def i(self) -> int:
        return self.a ^ self.y ^ 1

    @property
    def j(self) -> int:
        return (self.x & self.y) ^ self.x ^ self.a ^ 1

    @property
    def success_entry(self) -> tuple[int, int, int, int]:
        """(a, b, x, y) of the positive entry."""
        return (self.a, self.a ^ (self.x & self.y), self.x, self.y)

    @property
    def zero_entries(self) -> tuple[tuple[int, int, int, int], ...]:
        a, x, y, i, j = self.a, self.x, self.y, self.i, self.j
        return (
            (i, a ^ (x & y), x ^ 1, y),
            (a, j, x, y ^ 1),
            (i ^ 1, j ^ 1, x ^ 1, y ^ 1),
        )

    @property
    def zero_indices(self) -> frozenset:
        return frozenset(index_of(*e) for e in self.zero_entries)

    @property
    def face(self) -> Face:
        return Face(self.zero_indices)

    def __str__(self):
        return f"hardy(a={self.a},x={self.x},y={self.y})"


CANONICAL = HardyArgument(0, 0, 0)


def enumerate_arguments() -> list[HardyArgument]:
    return [HardyArgument(a, x, y) for a, x, y in itertools.product((0, 1), repeat=3)]


# ---------------------------------------------------------------------------
# the optimal two-qubit point for the canonical argument


def _hardy_state() -> np.ndarray:
    c00 = -math.sqrt((5.0 * SQRT5 - 11.0) / 2.0)
    c01 = c10 = (-3.0 + SQRT5) / 2.0
    c11 = math.sqrt((SQRT5 - 1.0) / 2.0)
    return np.array([c00, c01, c10, c11], dtype=complex)


def hardy_config() -> QubitConfig:
    """A0 = B0 computational basis; A1 = B1 outcome 0 is cos(alpha)|0> + sin(alpha)|1>."""
    alpha = 2.0 * math.atan(math.sqrt(-2.0 + SQRT5))
    # Bloch polar angle is twice the Hilbert-space angle
    axes = np.array([[0.0, 0.0], [2.0 * alpha, 0.0], [0.0, 0.0], [2.0 * alpha, 0.0]])
    return QubitConfig(_hardy_state(), axes)


def hardy_max_point() -> Behavior:
    return behavior_from_qubit(hardy_config())


def table1() -> dict:
    """Closed forms of the optimal distribution, keyed by (x, y) then (a, b)."""
    s, t, h = HARDY_SUCCESS, (7.0 - 3.0 * SQRT5) / 2.0, (-1.0 + SQRT5) / 2.0
    g, q = -2.0 + SQRT5, (3.0 - SQRT5) / 2.0
    rows = {
        (0, 0): (s, t, t, h),
        (0, 1): (g, 0.0, t, h),
        (1, 0): (g, t, 0.0, h),
        (1, 1): (0.0, q, q, g),
    }
    return {xy: dict(zip(((0, 0), (0, 1), (1, 0), (1, 1)), vals)) for xy, vals in rows.items()}


TABLE1_FORMS = {
    (0, 0): ("(5*sqrt5-11)/2", "(7-3*sqrt5)/2", "(7-3*sqrt5)/2", "(sqrt5-1)/2"),
    (0, 1): ("sqrt5-2", "0", "(7-3*sqrt5)/2", "(sqrt5-1)/2"),
    (1, 0): ("sqrt5-2", "(7-3*sqrt5)/2", "0", "(sqrt5-1)/2"),
    (1, 1): ("0", "(3-sqrt5)/2", "(3-sqrt5)/2", "sqrt5-2"),
}


def l_h_weights() -> np.ndarray:
    w = np.zeros(8)
    w[[0, 1, 3, 4]] = (9.0 - SQRT5) / 38.0
    w[7] = (1.0 + 2.0 * SQRT5) / 19.0
    return w


def l_h_point() -> Behavior:
    p = sum(wi * local_vertex(i).p for i, wi in enumerate(l_h_weights(), start=1) if wi)
    return Behavior(p)


def hardy_segment() -> Segment:
    return Segment(l_h_weights(), label="PR->L_H")


def hardy_success(beh: Behavior, arg: HardyArgument = CANONICAL, tol: float = CONDITION_TOL) -> float:
    """Success probability, after checking the three zero conditions."""
    for a, b, x, y in arg.zero_entries:
        if beh.prob(a, b, x, y) > tol:
            raise ConditionsViolated(f"{arg}: p({a},{b}|{x},{y}) = {beh.prob(a, b, x, y):.3g} > {tol}")
    return float(beh.prob(*arg.success_entry))


# ---------------------------------------------------------------------------
# local relabelings


@dataclass(frozen=True)
class Relabeling:
    """q(a,b|x,y) = p~(a^oa[x], b^ob[y] | x^fx, y^fy), p~ = p with parties swapped if ``swap``."""

    swap: int
    fx: int
    fy: int
    oa: tuple[int, int]
    ob: tuple[int, int]

    def apply(self, beh: Behavior) -> Behavior:
        p = beh.p
        if self.swap:
            p = p.transpose(1, 0, 3, 2)
        q = np.empty_like(p)
        for x, y, a, b in itertools.product((0, 1), repeat=4):
            q[x, y, a, b] = p[x ^ self.fx, y ^ self.fy, a ^ self.oa[x], b ^ self.ob[y]]
        return Behavior(q)

    def apply_config(self, cfg: QubitConfig) -> QubitConfig:
        """Same relabeling realised on the measurement settings and state."""
        state = cfg.state.reshape(2, 2)
        axes = cfg.axes.copy()
        if self.swap:
            state = state.T
            axes = np.concatenate([axes[2:], axes[:2]])
        new = np.empty_like(axes)
        for x in (0, 1):
            new[x] = axes[x ^ self.fx]
            new[2 + x] = axes[2 + (x ^ self.fy)]
        for k, flip in ((0, self.oa[0]), (1, self.oa[1]), (2, self.ob[0]), (3, self.ob[1])):
            if flip:
                theta, phi = new[k]
                new[k] = (math.pi - theta, phi + math.pi)
        return QubitConfig(state.reshape(4), new)


@lru_cache(maxsize=None)
def pr_symmetries() -> tuple[Relabeling, ...]:
    """Relabelings that leave the canonical PR box unchanged."""
    pr = pr_box()
    out = []
    for s, fx, fy, oa0, oa1, ob0, ob1 in itertools.product((0, 1), repeat=7):
        r = Relabeling(s, fx, fy, (oa0, oa1), (ob0, ob1))
        if np.array_equal(r.apply(pr).p, pr.p):
            out.append(r)
    return tuple(out)


def _image(r: Relabeling, arg: HardyArgument) -> HardyArgument | None:
    """The argument whose conditions ``r`` maps the canonical conditions onto."""
    # an entry (a,b,x,y) of p becomes the entry of q solving the relabeling equations
    def move(e):
        a, b, x, y = e
        if r.swap:
            a, b, x, y = b, a, y, x
        x2, y2 = x ^ r.fx, y ^ r.fy
        return (a ^ r.oa[x2], b ^ r.ob[y2], x2, y2)

    zeros = frozenset(index_of(*move(e)) for e in arg.zero_entries)
    succ = move(arg.success_entry)
    for cand in enumerate_arguments():
        if cand.zero_indices == zeros and cand.success_entry == succ:
            return cand
    return None


@lru_cache(maxsize=None)
def _relabeling_to(target: HardyArgument) -> Relabeling:
    for r in pr_symmetries():
        if _image(r, CANONICAL) == target:
            return r
    raise LookupError(f"no PR-preserving relabeling reaches {target}")


def config_for(arg: HardyArgument) -> QubitConfig:
    """Optimal two-qubit realisation of ``arg``."""
    return _relabeling_to(arg).apply_config(hardy_config())


def hardy_point(arg: HardyArgument) -> Behavior:
    return behavior_from_qubit(config_for(arg))
