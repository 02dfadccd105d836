"""Hot numerical kernels.

Everything here is written in the subset of Python/numpy that numba's
nopython mode accepts, and is compiled through :func:`bellscope._jit.jit`.
With ``BELLSCOPE_DISABLE_JIT=1`` the very same functions run interpreted.

Conventions shared by the Born-rule kernels:

* a bipartite pure state is a ``(d, d)`` complex array ``psi[i, j]``;
* a party's measurements are rows of a ``(n_inputs, d)`` complex array, each
  row the unit vector spanning the rank-1 projector for outcome 0 (outcome 1
  is the complementary projector);
* probabilities are returned as ``p[x, y, a, b]``.
"""

from __future__ import annotations

import numpy as np

from ._jit import jit

__all__ = [
    "jacobi_eigh",
    "unit_vector",
    "complement_basis",
    "unpack_model",
    "born_probs",
    "project_out",
    "model_value",
    "value_and_gradient",
    "n_params",
]


# ---------------------------------------------------------------------------
# cyclic Jacobi


@jit
def jacobi_eigh(a, tol=1e-15, max_sweeps=100):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(w, v, sweeps)`` with ``a @ v[:, k] = w[k] * v[:, k]``.
    Eigenvalues are sorted ascending.
    """
    n = a.shape[0]
    m = a.copy()
    v = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += m[i, j] * m[i, j]
    scale = np.sqrt(scale)
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += m[p, q] * m[p, q]
        if np.sqrt(off) <= tol * scale or off == 0.0:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    mkp = m[k, p]
                    mkq = m[k, q]
                    m[k, p] = c * mkp - s * mkq
                    m[k, q] = s * mkp + c * mkq
                for k in range(n):
                    mpk = m[p, k]
                    mqk = m[q, k]
                    m[p, k] = c * mpk - s * mqk
                    m[q, k] = s * mpk + c * mqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = m[i, i]
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


# ---------------------------------------------------------------------------
# parameterisation of states and rank-1 measurements


@jit
def unit_vector(angles, phases):
    """Unit vector in C^n from n-1 hyperspherical angles and n-1 phases.

    The first amplitude is real and non-negative for angles in [0, pi/2].
    """
    n = angles.shape[0] + 1
    out = np.empty(n, dtype=np.complex128)
    r = 1.0
    for k in range(n - 1):
        mag = r * np.cos(angles[k])
        if k == 0:
            out[k] = mag
        else:
            out[k] = mag * np.exp(1j * phases[k - 1])
        r = r * np.sin(angles[k])
    if n == 1:
        out[0] = 1.0
    else:
        out[n - 1] = r * np.exp(1j * phases[n - 2])
    return out


@jit
def complement_basis(v):
    """Orthonormal basis (rows) of the orthogonal complement of unit vector v."""
    d = v.shape[0]
    out = np.zeros((d - 1, d), dtype=np.complex128)
    count = 0
    for k in range(d):
        if count == d - 1:
            break
        e = np.zeros(d, dtype=np.complex128)
        e[k] = 1.0
        for _ in range(2):
            c = np.vdot(v, e)
            e = e - c * v
            for r in range(count):
                c = np.vdot(out[r], e)
                e = e - c * out[r]
        nrm = np.sqrt(np.real(np.vdot(e, e)))
        if nrm > 0.1:
            out[count] = e / nrm
            count += 1
    return out


@jit
def n_params(d, nx, ny):
    """Length of the flat parameter vector for a (d, nx, ny) model."""
    return 2 * (d * d - 1) + (nx + ny) * 2 * (d - 1)


@jit
def unpack_model(params, d, nx, ny):
    """Flat real parameters -> (psi, U, V)."""
    ns = d * d - 1
    psi = unit_vector(params[0:ns], params[ns : 2 * ns]).reshape((d, d))
    pos = 2 * ns
    m = d - 1
    u = np.empty((nx, d), dtype=np.complex128)
    for x in range(nx):
        u[x] = unit_vector(params[pos : pos + m], params[pos + m : pos + 2 * m])
        pos += 2 * m
    w = np.empty((ny, d), dtype=np.complex128)
    for y in range(ny):
        w[y] = unit_vector(params[pos : pos + m], params[pos + m : pos + 2 * m])
        pos += 2 * m
    return psi, u, w


# ---------------------------------------------------------------------------
# Born rule


@jit
def born_probs(psi, u, w):
    """p[x, y, a, b] for pure state psi and rank-1 outcome-0 projectors."""
    d = psi.shape[0]
    nx = u.shape[0]
    ny = w.shape[0]
    # contractions with Alice's / Bob's outcome-0 vectors
    left = np.zeros((nx, d), dtype=np.complex128)  # (v_x^dagger (x) 1) psi
    right = np.zeros((ny, d), dtype=np.complex128)  # (1 (x) w_y^dagger) psi
    for x in range(nx):
        for i in range(d):
            vi = np.conj(u[x, i])
            for j in range(d):
                left[x, j] += vi * psi[i, j]
    for y in range(ny):
        for j in range(d):
            wj = np.conj(w[y, j])
            for i in range(d):
                right[y, i] += wj * psi[i, j]
    pa = np.empty(nx)
    pb = np.empty(ny)
    for x in range(nx):
        pa[x] = np.real(np.vdot(left[x], left[x]))
    for y in range(ny):
        pb[y] = np.real(np.vdot(right[y], right[y]))
    out = np.empty((nx, ny, 2, 2))
    for x in range(nx):
        for y in range(ny):
            amp = 0.0j
            for j in range(d):
                amp += np.conj(w[y, j]) * left[x, j]
            p00 = amp.real * amp.real + amp.imag * amp.imag
            out[x, y, 0, 0] = p00
            out[x, y, 0, 1] = pa[x] - p00
            out[x, y, 1, 0] = pb[y] - p00
            out[x, y, 1, 1] = 1.0 - pa[x] - pb[y] + p00
    return out


@jit
def _outcome_vectors(vec, outcome):
    if outcome == 0:
        return vec.reshape((1, vec.shape[0])).copy()
    return complement_basis(vec)


@jit
def project_out(psi, u, w, zeros):
    """Project psi onto the orthogonal complement of the ranges of the
    projectors Pi_a^x (x) Pi_b^y listed in ``zeros`` (rows x, y, a, b).

    Returns ``(psi_projected_normalised, ok)``; ``ok`` is False when nothing
    of psi survives the projection.
    """
    d = psi.shape[0]
    dd = d * d
    flat = psi.reshape(dd).copy()
    nz = zeros.shape[0]
    if nz == 0:
        return psi.copy(), True
    basis = np.zeros((nz * dd, dd), dtype=np.complex128)
    count = 0
    for k in range(nz):
        av = _outcome_vectors(u[zeros[k, 0]], zeros[k, 2])
        bv = _outcome_vectors(w[zeros[k, 1]], zeros[k, 3])
        for ia in range(av.shape[0]):
            for ib in range(bv.shape[0]):
                vec = np.empty(dd, dtype=np.complex128)
                for i in range(d):
                    for j in range(d):
                        vec[i * d + j] = av[ia, i] * bv[ib, j]
                for _ in range(2):
                    for r in range(count):
                        c = np.vdot(basis[r], vec)
                        vec = vec - c * basis[r]
                nrm = np.sqrt(np.real(np.vdot(vec, vec)))
                if nrm > 1e-9:
                    basis[count] = vec / nrm
                    count += 1
    for _ in range(2):
        for r in range(count):
            c = np.vdot(basis[r], flat)
            flat = flat - c * basis[r]
    nrm = np.sqrt(np.real(np.vdot(flat, flat)))
    if nrm < 1e-10:
        return psi.copy(), False
    return (flat / nrm).reshape((d, d)), True


@jit
def model_value(params, d, nx, ny, coeff, const, zeros, lam):
    """Linear Bell functional ``const + sum(coeff * p)`` of the constrained model.

    With ``lam <= 0`` the state is projected so that every probability named
    in ``zeros`` vanishes exactly; degenerate projections score ``const - 10``.
    With ``lam > 0`` the raw state is used and ``lam * sum(p[zeros])`` is
    subtracted instead (exterior penalty).
    """
    psi, u, w = unpack_model(params, d, nx, ny)
    penalty = 0.0
    if lam <= 0.0:
        psi, ok = project_out(psi, u, w, zeros)
        if not ok:
            return const - 10.0
    p = born_probs(psi, u, w)
    if lam > 0.0:
        for k in range(zeros.shape[0]):
            penalty += p[zeros[k, 0], zeros[k, 1], zeros[k, 2], zeros[k, 3]]
    total = const - lam * penalty if lam > 0.0 else const
    for x in range(nx):
        for y in range(ny):
            for a in range(2):
                for b in range(2):
                    total += coeff[x, y, a, b] * p[x, y, a, b]
    return total


@jit
def value_and_gradient(params, d, nx, ny, coeff, const, zeros, lam, step):
    """Value and central-difference gradient of :func:`model_value`."""
    n = params.shape[0]
    f0 = model_value(params, d, nx, ny, coeff, const, zeros, lam)
    g = np.empty(n)
    x = params.copy()
    for k in range(n):
        old = x[k]
        x[k] = old + step
        fp = model_value(x, d, nx, ny, coeff, const, zeros, lam)
        x[k] = old - step
        fm = model_value(x, d, nx, ny, coeff, const, zeros, lam)
        x[k] = old
        g[k] = (fp - fm) / (2.0 * step)
    return f0, g
