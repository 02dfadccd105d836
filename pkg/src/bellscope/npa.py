"""NPA moment matrices for the 2x2x2x2 scenario (levels 1 and 1+ab).

Operators are the outcome-0 projectors A0, A1, B0, B1. Each matrix cell
holds the moment of ``u^dagger v`` for two words u, v. It is reduced with
projector idempotence and Alice/Bob commutation, and identified with its
adjoint because the relaxation is taken real-symmetric. Cells reducing to
1, a single projector, or one A times one B projector are fixed by the
behavior. All other cells are free unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .correlations import Behavior, pr_box
from .errors import Inconclusive, PredicateInconsistent
from .geometry import LOCAL_VERTEX_PARAMS, Segment
from .sdp import FEAS_TOL, SdpProblem, SdpResult, Status, maximize, solve_feasibility

__all__ = [
    "LEVELS",
    "MomentStructure",
    "build",
    "moment_vector",
    "instantiate",
    "contains",
    "membership",
    "max_mu",
    "boundary",
    "hardy_almost_quantum",
    "max_chsh",
    "TOL_MU",
]

LEVELS = ("1", "1+ab")
TOL_MU = 1e-5

# behavior-determined moments, in this order
MOMENT_LABELS = ("1", "A0", "A1", "B0", "B1", "A0B0", "A0B1", "A1B0", "A1B1")


def _reduce(word):
    """Canonical (A-part, B-part) key of a word, modulo adjoint."""
    def collapse(ops):
        out = []
        for op in ops:
            if not out or out[-1] != op:
                out.append(op)
        return tuple(out)

    a = collapse(op for op in word if op[0] == "A")
    b = collapse(op for op in word if op[0] == "B")
    return min((a, b), (a[::-1], b[::-1]))


def _fixed_label(key):
    a, b = key
    if len(a) > 1 or len(b) > 1:
        return None
    return "".join(a) + "".join(b) or "1"


@dataclass(frozen=True, eq=False)
class MomentStructure:
    level: str
    words: tuple
    cells: tuple  # cells[i][j] = ("fixed", label) | ("free", k)
    free_words: tuple
    fixed_basis: np.ndarray  # (9, n, n) 0/1 pattern per behavior moment
    free_basis: np.ndarray  # (n_free, n, n)

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def n_free(self) -> int:
        return len(self.free_words)

    def word_labels(self):
        return ["".join(w) or "1" for w in self.words]


@lru_cache(maxsize=None)
def build(level: str) -> MomentStructure:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    words = [(), ("A0",), ("A1",), ("B0",), ("B1",)]
    if level == "1+ab":
        words += [(f"A{x}", f"B{y}") for x in (0, 1) for y in (0, 1)]
    n = len(words)
    free_index = {}
    cells = [[None] * n for _ in range(n)]
    fixed_basis = np.zeros((len(MOMENT_LABELS), n, n))
    for i in range(n):
        for j in range(i, n):
            key = _reduce(tuple(reversed(words[i])) + words[j])
            label = _fixed_label(key)
            if label is not None:
                q = MOMENT_LABELS.index(label)
                cell = ("fixed", label)
                fixed_basis[q, i, j] = fixed_basis[q, j, i] = 1.0
            else:
                k = free_index.setdefault(key, len(free_index))
                cell = ("free", k)
            cells[i][j] = cells[j][i] = cell
    free_words = tuple(sorted(free_index, key=free_index.get))
    free_basis = np.zeros((len(free_words), n, n))
    for i in range(n):
        for j in range(n):
            kind, k = cells[i][j]
            if kind == "free":
                free_basis[k, i, j] = 1.0
    return MomentStructure(level, tuple(words), tuple(tuple(r) for r in cells), free_words,
                           fixed_basis, free_basis)


def moment_vector(beh: Behavior) -> np.ndarray:
    """Behavior moments in ``MOMENT_LABELS`` order (outcome-0 convention)."""
    p = beh.p
    return np.array([
        1.0,
        p[0, 0, 0, :].sum(), p[1, 0, 0, :].sum(),
        p[0, 0, :, 0].sum(), p[0, 1, :, 0].sum(),
        p[0, 0, 0, 0], p[0, 1, 0, 0], p[1, 0, 0, 0], p[1, 1, 0, 0],
    ])


def instantiate(structure: MomentStructure, beh: Behavior) -> SdpProblem:
    base = np.tensordot(moment_vector(beh), structure.fixed_basis, axes=1)
    return SdpProblem.from_arrays(base, structure.free_basis)


def _word_value(key, outputs_a, outputs_b):
    # deterministic strategy: projector A_x evaluates to [a_x == 0]
    a, b = key
    val = 1.0
    for op in a + b:
        out = outputs_a if op[0] == "A" else outputs_b
        val *= 1.0 if out[int(op[1])] == 0 else 0.0
    return val


def local_completion(structure: MomentStructure, local_weights) -> np.ndarray:
    """Free-unknown values of the moment matrix of a mixture of L1..L8."""
    y = np.zeros(structure.n_free)
    for i, w in enumerate(local_weights, start=1):
        if not w:
            continue
        a1, a2, b1, b2 = LOCAL_VERTEX_PARAMS[i]
        outs_a = [(a1 * x) ^ a2 for x in (0, 1)]
        outs_b = [(b1 * yy) ^ b2 for yy in (0, 1)]
        y += w * np.array([_word_value(k, outs_a, outs_b) for k in structure.free_words])
    return y


def membership(beh: Behavior, level: str = "1+ab", feas_tol: float = FEAS_TOL, y0=None) -> SdpResult:
    return solve_feasibility(instantiate(build(level), beh), feas_tol=feas_tol, y0=y0)


def contains(beh: Behavior, level: str = "1+ab", feas_tol: float = FEAS_TOL, y0=None) -> bool:
    """Whether ``beh`` admits a PSD moment matrix at the given level."""
    res = membership(beh, level, feas_tol, y0)
    if res.status is Status.MAX_ITERATIONS:
        raise Inconclusive(f"SDP undecided after {res.iterations} iterations")
    return res.feasible


@dataclass(frozen=True)
class Boundary:
    mu_star: float
    level: str
    certificate: SdpResult  # feasible solve at mu_star
    matrix: np.ndarray
    inconclusive: int  # bisection steps treated as outside


def boundary(seg: Segment, level: str = "1+ab", tol_mu: float = TOL_MU,
             feas_tol: float = FEAS_TOL) -> Boundary:
    """Bisection for the largest mu with ``seg.point(mu)`` inside the level.

    Undecided solves count as outside, so the estimate errs toward the
    local end; their number is reported in ``inconclusive``.
    """
    structure = build(level)
    y0 = local_completion(structure, seg.local_weights)
    m_pr = moment_vector(pr_box())
    m_loc = moment_vector(seg.local_point())
    inconclusive = 0

    def solve(mu):
        base = np.tensordot(mu * m_pr + (1 - mu) * m_loc, structure.fixed_basis, axes=1)
        return solve_feasibility(SdpProblem.from_arrays(base, structure.free_basis), feas_tol=feas_tol, y0=y0)

    res_lo = solve(0.0)
    if res_lo.status is Status.MAX_ITERATIONS:
        raise Inconclusive("SDP undecided at the local end of the segment")
    if not res_lo.feasible:
        raise PredicateInconsistent("local end of segment is outside the NPA set")
    res_hi = solve(1.0)
    if res_hi.feasible:
        lo, res_lo = 1.0, res_hi
    else:
        lo, hi = 0.0, 1.0
        while hi - lo > tol_mu:
            mid = 0.5 * (lo + hi)
            res = solve(mid)
            if res.feasible:
                lo, res_lo = mid, res
            else:
                inconclusive += res.status is Status.MAX_ITERATIONS
                hi = mid
    problem = SdpProblem.from_arrays(
        np.tensordot(lo * m_pr + (1 - lo) * m_loc, structure.fixed_basis, axes=1), structure.free_basis)
    return Boundary(lo, level, res_lo, problem.assemble(res_lo.assignment), inconclusive)


def max_mu(seg: Segment, level: str = "1+ab", tol_mu: float = TOL_MU, feas_tol: float = FEAS_TOL) -> float:
    return boundary(seg, level, tol_mu, feas_tol).mu_star


def hardy_almost_quantum(level: str = "1+ab", tol_mu: float = TOL_MU, feas_tol: float = FEAS_TOL) -> float:
    """Largest Hardy success probability on the segment PR -> L_H."""
    from .hardy import hardy_segment

    return max_mu(hardy_segment(), level, tol_mu, feas_tol) / 2.0


def max_chsh(level: str = "1") -> float:
    """Largest ``chsh_value`` over the NPA level, all behaviors free.

    The behavior moments become extra unknowns; chsh_value is twice the CH
    form in the outcome-0 moments.
    """
    s = build(level)
    # unknowns: 8 behavior moments (all but "1") followed by the structure's free cells
    basis = np.concatenate([s.fixed_basis[1:], s.free_basis], axis=0)
    c = np.zeros(basis.shape[0])
    # CH = p00|00 + p00|01 + p00|10 - p00|11 - pA(0|0) - pB(0|0)
    for label, coef in (("A0B0", 1), ("A0B1", 1), ("A1B0", 1), ("A1B1", -1), ("A0", -1), ("B0", -1)):
        c[MOMENT_LABELS.index(label) - 1] = 2.0 * coef
    prob = SdpProblem.from_arrays(s.fixed_basis[0], basis, objective=c)
    # start from white noise, strictly inside
    value, _ = maximize(prob)
    return value
