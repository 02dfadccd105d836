"""Small dense semidefinite feasibility engine.

Problems have the form ``M(y) = M0 + sum_k y_k F_k`` (real symmetric,
dimension <= 64). Feasibility is decided by maximising the smallest
eigenvalue over the affine family,

    max t  s.t.  M(y) - t I >= 0,

with a log-det barrier interior-point method (damped Newton on
``eta * t + log det(M(y) - t I)`` for an increasing sequence of ``eta``).
``t* >= -feas_tol`` means feasible. On the central path ``t + n / eta`` bounds
``t*`` from above, which provides the infeasibility verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .kernels import jacobi_eigh

__all__ = [
    "Status",
    "SdpProblem",
    "SdpResult",
    "solve_feasibility",
    "maximize",
    "min_eigenvalue",
    "format_matrix",
]

FEAS_TOL = 1e-7
MAX_ITER = 500


class Status(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """Affine symmetric matrix family.

    ``fixed`` holds ``(row, col, value)`` triples and ``free`` one list of
    positions per scalar unknown. Each position implies its mirror image.
    ``objective`` (optional) weights the unknowns for :func:`maximize`.
    """

    dim: int
    fixed: tuple = ()
    free: tuple = ()
    objective: np.ndarray | None = None
    base: np.ndarray = field(init=False, repr=False)
    basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.dim
        if n > 64:
            raise ValueError("engine is sized for matrices up to 64x64")
        seen = {}
        base = np.zeros((n, n))
        for r, c, v in self.fixed:
            for pos in ((r, c), (c, r)):
                if pos in seen and seen[pos] != ("fixed", v):
                    raise ValueError(f"position {pos} assigned twice")
                seen[pos] = ("fixed", v)
            base[r, c] = base[c, r] = v
        basis = np.zeros((len(self.free), n, n))
        for k, group in enumerate(self.free):
            for r, c in group:
                for pos in ((r, c), (c, r)):
                    if pos in seen and seen[pos] != ("free", k):
                        raise ValueError(f"position {pos} assigned twice")
                    seen[pos] = ("free", k)
                basis[k, r, c] = basis[k, c, r] = 1.0
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_arrays(cls, base: np.ndarray, basis: np.ndarray, objective=None) -> "SdpProblem":
        """Wrap precomputed arrays (used by the NPA layer in inner loops)."""
        prob = cls.__new__(cls)
        object.__setattr__(prob, "dim", base.shape[0])
        object.__setattr__(prob, "fixed", ())
        object.__setattr__(prob, "free", ())
        object.__setattr__(prob, "objective", objective)
        object.__setattr__(prob, "base", np.asarray(base, dtype=float))
        object.__setattr__(prob, "basis", np.asarray(basis, dtype=float).reshape(-1, *base.shape))
        return prob

    @property
    def n_free(self) -> int:
        return self.basis.shape[0]

    def assemble(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self.n_free == 0:
            return self.base.copy()
        return self.base + np.tensordot(y, self.basis, axes=1)


@dataclass(frozen=True)
class SdpResult:
    status: Status
    assignment: np.ndarray
    min_eigenvalue: float
    iterations: int
    upper_bound: float = np.inf

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue via cyclic Jacobi."""
    w, _, _ = jacobi_eigh(np.ascontiguousarray(m, dtype=float))
    return float(w[0])


def _chol_ok(s):
    try:
        np.linalg.cholesky(s)
        return True
    except np.linalg.LinAlgError:
        return False


def _logdet(s):
    sign, val = np.linalg.slogdet(s)
    return val if sign > 0 else -np.inf


def solve_feasibility(problem: SdpProblem, feas_tol: float = FEAS_TOL, max_iter: int = MAX_ITER,
                      y0=None) -> SdpResult:
    """Decide whether some assignment makes ``M(y)`` PSD up to ``feas_tol``.

    Feasible results carry an assignment whose completed matrix has
    smallest eigenvalue >= -feas_tol (checked with cyclic Jacobi).
    """
    n, m = problem.dim, problem.n_free
    y = np.zeros(m) if y0 is None else np.array(y0, dtype=float)
    mat = problem.assemble(y)
    lam = min_eigenvalue(mat)
    if lam >= -feas_tol or m == 0:
        status = Status.FEASIBLE if lam >= -feas_tol else Status.INFEASIBLE
        return SdpResult(status, y, lam, 0, lam)

    eye = np.eye(n)
    # unknowns z = (y, t); the t column of the family is -I
    mats = np.concatenate([problem.basis, -eye[None]], axis=0)
    t = lam - 1.0
    eta = n / max(1.0, abs(t))
    iters = 0

    def barrier(y, t):
        return eta * t + _logdet(problem.assemble(y) - t * eye)

    while iters < max_iter:
        # centering
        centered = False
        while iters < max_iter:
            iters += 1
            s = problem.assemble(y) - t * eye
            sinv = np.linalg.inv(s)
            sinv = 0.5 * (sinv + sinv.T)
            g = np.einsum("ij,kji->k", sinv, mats)
            g[-1] += eta
            prod = np.einsum("ij,kjl->kil", sinv, mats)
            h = np.einsum("kij,lji->kl", prod, prod)
            try:
                step = np.linalg.solve(h, g)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(h, g, rcond=None)[0]
            dec = float(g @ step)
            if dec < 1e-10:
                centered = True
                break
            f0 = barrier(y, t)
            alpha = 1.0
            while alpha > 1e-12:
                yn, tn = y + alpha * step[:-1], t + alpha * step[-1]
                sn = problem.assemble(yn) - tn * eye
                if _chol_ok(sn) and barrier(yn, tn) >= f0 + 0.25 * alpha * dec:
                    break
                alpha *= 0.5
            else:
                centered = True  # no further progress possible at this eta
                break
            y, t = yn, tn
            if t >= -feas_tol:
                lam = min_eigenvalue(problem.assemble(y))
                if lam >= -feas_tol:
                    return SdpResult(Status.FEASIBLE, y, lam, iters)
        if not centered:
            break
        gap = n / eta
        upper = t + gap
        if upper < -feas_tol:
            lam = min_eigenvalue(problem.assemble(y))
            return SdpResult(Status.INFEASIBLE, y, lam, iters, upper)
        if gap < 1e-13:
            lam = min_eigenvalue(problem.assemble(y))
            status = Status.FEASIBLE if lam >= -feas_tol else Status.INFEASIBLE
            return SdpResult(status, y, lam, iters, upper)
        eta *= 10.0
    lam = min_eigenvalue(problem.assemble(y))
    return SdpResult(Status.MAX_ITERATIONS, y, lam, iters)


def maximize(problem: SdpProblem, tol: float = 1e-9, max_iter: int = MAX_ITER):
    """Maximise ``objective . y`` subject to ``M(y) >= 0``.

    Needs a strictly feasible family (phase one pushes the smallest
    eigenvalue above zero first). Returns ``(value, y)``; ``value`` is within
    ``n / eta < tol`` of the optimum.
    """
    c = np.asarray(problem.objective, dtype=float)
    n, m = problem.dim, problem.n_free
    y = np.zeros(m)
    # phase one: get strictly inside
    if min_eigenvalue(problem.assemble(y)) <= 1e-9:
        shifted = SdpProblem.from_arrays(problem.base - 1e-6 * np.eye(n), problem.basis)
        res = solve_feasibility(shifted, feas_tol=0.0, max_iter=max_iter)
        if not res.feasible:
            raise ValueError("no strictly feasible point found")
        y = res.assignment
    eta = 1.0
    iters = 0

    def barrier(y):
        return eta * float(c @ y) + _logdet(problem.assemble(y))

    while iters < max_iter:
        while iters < max_iter:
            iters += 1
            s = problem.assemble(y)
            sinv = np.linalg.inv(s)
            g = eta * c + np.einsum("ij,kji->k", sinv, problem.basis)
            prod = np.einsum("ij,kjl->kil", sinv, problem.basis)
            h = np.einsum("kij,lji->kl", prod, prod)
            step = np.linalg.solve(h, g)
            dec = float(g @ step)
            if dec < 1e-12:
                break
            f0 = barrier(y)
            alpha = 1.0
            while alpha > 1e-14:
                yn = y + alpha * step
                if _chol_ok(problem.assemble(yn)) and barrier(yn) >= f0 + 0.25 * alpha * dec:
                    break
                alpha *= 0.5
            else:
                break
            y = yn
        if n / eta < tol:
            return float(c @ y), y
        eta *= 10.0
    raise RuntimeError("iteration cap reached")


def format_matrix(m: np.ndarray, labels=None, digits: int = 6) -> str:
    """Plain-text grid for debugging dumps."""
    n = m.shape[0]
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    width = max(digits + 7, *(len(s) for s in labels)) + 1
    lines = [" " * width + "".join(s.rjust(width) for s in labels)]
    for i in range(n):
        row = "".join(f"{m[i, j]:{width}.{digits}f}" for j in range(n))
        lines.append(labels[i].rjust(width) + row)
    return "\n".join(lines)
