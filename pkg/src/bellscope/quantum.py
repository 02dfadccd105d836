"""Explicit quantum models and variational search over them.

Models are bipartite pure states in C^d (x) C^d with rank-1 projective
measurements: outcome 0 of each measurement is the projector onto one unit
vector and outcome 1 is its complement. For qubits this is the same as a
measurement along a Bloch axis (theta, phi).

Zero-probability constraints are imposed *exactly*: after unpacking the
parameters, the state is projected onto the orthogonal complement of the
ranges of the projectors that must have zero probability. The search then
maximises a linear Bell functional from many random starts with BFGS on
central-difference gradients. Reported optima are best-found lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from . import kernels
from .correlations import Behavior, entry_of

__all__ = [
    "QubitConfig",
    "QutritConfig",
    "SearchResult",
    "ZERO_TOL",
    "behavior_from_model",
    "behavior_from_qubit",
    "behavior_from_qutrit",
    "chsh_functional",
    "i3322_functional",
    "i3322_value",
    "search",
    "max_chsh_qubits",
    "max_i3322",
    "max_i3322_qutrits",
    "DIMWITNESS_ZEROS",
]

ZERO_TOL = 1e-8
GRAD_STEP = 1e-6

# p(0,0|1,1) = 0 and p(0,1|1,0) = 0, rows (x, y, a, b)
DIMWITNESS_ZEROS = ((1, 1, 0, 0), (1, 0, 0, 1))


def axis_vector(theta: float, phi: float) -> np.ndarray:
    """Outcome-0 eigenvector of the measurement along Bloch axis (theta, phi)."""
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def vector_axis(v) -> tuple[float, float]:
    v = np.asarray(v, dtype=complex)
    v = v * np.exp(-1j * np.angle(v[0])) if abs(v[0]) > 1e-15 else v
    theta = 2.0 * np.arctan2(abs(v[1]), v[0].real)
    phi = float(np.angle(v[1])) if abs(v[1]) > 1e-15 else 0.0
    return float(theta), phi


@dataclass(frozen=True, eq=False)
class QubitConfig:
    """Two-qubit pure state and four measurement axes (A0, A1, B0, B1).

    ``state[2*i + j]`` is the amplitude of |i j>; ``axes[k] = (theta, phi)``.
    """

    state: np.ndarray
    axes: np.ndarray

    def __post_init__(self):
        st = np.asarray(self.state, dtype=complex).reshape(4)
        ax = np.asarray(self.axes, dtype=float).reshape(4, 2)
        if abs(np.linalg.norm(st) - 1) > 1e-12:
            raise ValueError("state must be normalised")
        object.__setattr__(self, "state", st)
        object.__setattr__(self, "axes", ax)

    def vectors(self):
        psi = self.state.reshape(2, 2)
        vecs = np.array([axis_vector(*a) for a in self.axes])
        return psi, vecs[:2], vecs[2:]

    @classmethod
    def from_vectors(cls, psi, u, w) -> "QubitConfig":
        axes = [vector_axis(v) for v in (*u, *w)]
        return cls(np.asarray(psi).reshape(4), np.array(axes))

    def to_json(self) -> dict:
        return {
            "kind": "qubit",
            "state": [[float(z.real), float(z.imag)] for z in self.state],
            "axes": [[float(t), float(p)] for t, p in self.axes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QubitConfig":
        st = np.array([complex(r, i) for r, i in data["state"]])
        return cls(st, np.array(data["axes"], dtype=float))


@dataclass(frozen=True, eq=False)
class QutritConfig:
    """Two-qutrit pure state with three rank-1 measurements per party.

    ``directions`` has shape (6, 3): rows A0, A1, A2, B0, B1, B2.
    """

    state: np.ndarray
    directions: np.ndarray
    dim: int = 3

    def __post_init__(self):
        d = self.dim
        st = np.asarray(self.state, dtype=complex).reshape(d * d)
        dirs = np.asarray(self.directions, dtype=complex).reshape(-1, d)
        if abs(np.linalg.norm(st) - 1) > 1e-12:
            raise ValueError("state must be normalised")
        if np.abs(np.linalg.norm(dirs, axis=1) - 1).max() > 1e-12:
            raise ValueError("measurement directions must be unit vectors")
        object.__setattr__(self, "state", st)
        object.__setattr__(self, "directions", dirs)

    def vectors(self):
        d = self.dim
        half = self.directions.shape[0] // 2
        return self.state.reshape(d, d), self.directions[:half], self.directions[half:]

    def to_json(self) -> dict:
        return {
            "kind": "qudit",
            "dim": self.dim,
            "state": [[float(z.real), float(z.imag)] for z in self.state],
            "directions": [[[float(z.real), float(z.imag)] for z in row] for row in self.directions],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QutritConfig":
        st = np.array([complex(r, i) for r, i in data["state"]])
        dirs = np.array([[complex(r, i) for r, i in row] for row in data["directions"]])
        return cls(st, dirs, int(data.get("dim", 3)))


def behavior_from_model(psi, u, w) -> Behavior:
    p = kernels.born_probs(np.ascontiguousarray(psi, dtype=complex),
                           np.ascontiguousarray(u, dtype=complex),
                           np.ascontiguousarray(w, dtype=complex))
    return Behavior(p)


def behavior_from_qubit(cfg: QubitConfig) -> Behavior:
    return behavior_from_model(*cfg.vectors())


def behavior_from_qutrit(cfg: QutritConfig) -> Behavior:
    return behavior_from_model(*cfg.vectors())


# ---------------------------------------------------------------------------
# linear Bell functionals as (coefficients[x, y, a, b], constant)


def chsh_functional():
    """chsh_value = 1 - sum of the eight free coordinates."""
    coeff = np.zeros((2, 2, 2, 2))
    for i in range(1, 9):
        a, b, x, y = entry_of(i)
        coeff[x, y, a, b] = -1.0
    return coeff, 1.0


def i3322_functional():
    coeff = np.zeros((3, 3, 2, 2))
    for (x, y), s in {(0, 0): 1, (0, 1): 1, (0, 2): 1, (1, 0): 1, (1, 1): 1, (1, 2): -1,
                      (2, 0): 1, (2, 1): -1}.items():
        coeff[x, y, 0, 0] += s
    coeff[0, 0, :, 0] -= 1.0  # p_B(0|0)
    coeff[0, 0, 0, :] -= 2.0  # 2 p_A(0|0)
    coeff[1, 0, 0, :] -= 1.0  # p_A(0|1)
    return coeff, 0.0


def i3322_value(beh: Behavior) -> float:
    if beh.p.shape[:2] != (3, 3):
        raise ValueError("I3322 needs three inputs per party")
    coeff, const = i3322_functional()
    return float(const + (coeff * beh.p).sum())


def zeros_from_indices(zeroed) -> np.ndarray:
    rows = []
    for i in sorted(zeroed):
        a, b, x, y = entry_of(i)
        rows.append((x, y, a, b))
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


# ---------------------------------------------------------------------------
# multistart search


@dataclass(frozen=True, eq=False)
class SearchResult:
    value: float
    psi: np.ndarray
    u: np.ndarray
    w: np.ndarray
    restarts: int  # restarts actually run

    def behavior(self) -> Behavior:
        return behavior_from_model(self.psi, self.u, self.w)


PENALTIES = tuple(10.0 ** k for k in range(1, 11))


def _run_local(x0, d, nx, ny, coeff, const, zeros, lam):
    def fun(x):
        f, g = kernels.value_and_gradient(x, d, nx, ny, coeff, const, zeros, lam, GRAD_STEP)
        return -f, -g

    res = minimize(fun, x0, jac=True, method="BFGS", options={"gtol": 1e-9, "maxiter": 2000})
    return res.x


def _zero_amplitudes(x, d, nx, ny, zeros):
    """Real and imaginary parts of (P_a (x) P_b) psi for every zeroed entry."""
    psi, u, w = kernels.unpack_model(x, d, nx, ny)
    flat = psi.reshape(d * d)
    eye = np.eye(d)
    parts = []
    for x_, y_, a, b in zeros:
        pa = np.outer(u[x_], u[x_].conj())
        pb = np.outer(w[y_], w[y_].conj())
        r = np.kron(pa if a == 0 else eye - pa, pb if b == 0 else eye - pb) @ flat
        parts += [r.real, r.imag]
    return np.concatenate(parts)


def _snap(x, d, nx, ny, zeros):
    """Nearby parameters at which every zeroed amplitude vanishes.

    The amplitudes are smooth where the probabilities (their squares) are
    flat, so a least-squares solve lands on the face to rounding level.
    """
    res = least_squares(_zero_amplitudes, x, args=(d, nx, ny, zeros), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return res.x


def zero_rank(d: int, zeros) -> int:
    """Total rank of the product projectors that must have zero probability."""
    return sum((1 if a == 0 else d - 1) * (1 if b == 0 else d - 1) for _, _, a, b in zeros)


def _finish(x, d, nx, ny, zeros):
    """Model at parameters ``x`` with the constraints enforced, or None."""
    psi, u, w = kernels.unpack_model(x, d, nx, ny)
    proj, ok = kernels.project_out(psi, u, w, zeros)
    if ok:
        psi = proj
    p = kernels.born_probs(psi, u, w)
    if any(p[x_, y_, a, b] > ZERO_TOL for x_, y_, a, b in zeros):
        return None
    return psi, u, w, p


def search(d: int, nx: int, ny: int, functional, zeros=(), restarts: int = 200, seed: int = 0,
           stop_above: float | None = None) -> SearchResult:
    """Best value of ``functional`` over (d x d)-dimensional rank-1 models.

    ``zeros`` lists (x, y, a, b) entries constrained to vanish. If their
    projectors cannot fill the whole space the state is projected off them
    (exact). Otherwise each restart runs an escalating exterior penalty,
    solves the zero amplitudes onto the face by least squares and then
    polishes with the projection. Restarts whose final
    zeroed probabilities exceed ``ZERO_TOL`` are rejected. With
    ``stop_above`` the search ends at the first restart beating it.
    Returns value ``-inf`` if every restart was rejected.
    """
    coeff, const = functional
    coeff = np.ascontiguousarray(coeff, dtype=float)
    zeros = np.array(zeros, dtype=np.int64).reshape(-1, 4)
    staged = zero_rank(d, zeros) >= d * d
    rng = np.random.default_rng(seed)
    n = kernels.n_params(d, nx, ny)
    best, used = None, 0
    x = np.zeros(n)
    for _ in range(restarts):
        used += 1
        x = rng.uniform(0.0, 2.0 * np.pi, n)
        if staged:
            for lam in PENALTIES:
                x = _run_local(x, d, nx, ny, coeff, const, zeros, lam)
            x = _snap(x, d, nx, ny, zeros)
            if kernels.model_value(x, d, nx, ny, coeff, const, zeros, 0.0) > const - 10.0:
                x = _run_local(x, d, nx, ny, coeff, const, zeros, 0.0)
        else:
            x = _run_local(x, d, nx, ny, coeff, const, zeros, 0.0)
        done = _finish(x, d, nx, ny, zeros)
        if done is None:
            continue
        val = float(const + (coeff * done[3]).sum())
        if best is None or val > best[0]:
            best = (val, *done[:3])
        if stop_above is not None and best[0] > stop_above:
            break
    if best is None:
        psi, u, w = kernels.unpack_model(x, d, nx, ny)
        return SearchResult(-np.inf, psi, u, w, used)
    return SearchResult(best[0], best[1], best[2], best[3], used)


def max_chsh_qubits(zeroed=(), restarts: int = 200, seed: int = 0, stop_above: float | None = None):
    """Best chsh_value over two-qubit models with the listed free coordinates zero.

    Returns ``(value, QubitConfig)``.
    """
    res = search(2, 2, 2, chsh_functional(), zeros_from_indices(zeroed), restarts, seed, stop_above)
    return res.value, QubitConfig.from_vectors(res.psi, res.u, res.w)


def max_i3322(dim: int = 3, zeros=DIMWITNESS_ZEROS, restarts: int = 200, seed: int = 0):
    """Best I3322 value for local dimension ``dim`` under zero constraints.

    Returns ``(value, QutritConfig)`` (``dim`` is recorded in the config).
    """
    res = search(dim, 3, 3, i3322_functional(), zeros, restarts, seed)
    return res.value, QutritConfig(res.psi.reshape(-1), np.vstack([res.u, res.w]), dim)


def max_i3322_qutrits(zeros=DIMWITNESS_ZEROS, restarts: int = 200, seed: int = 0):
    return max_i3322(3, zeros, restarts, seed)
