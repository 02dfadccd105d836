"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code paths: indices, boxes,
Born probabilities and NPA matrices are rebuilt directly from definitions.
"""

from __future__ import annotations

import itertools

import numpy as np

BITS4 = list(itertools.product((0, 1), repeat=4))


def index(a, b, x, y):
    c = a ^ b ^ (x * y) ^ 1
    return 8 * c + 4 * x + 2 * y + a + 1


def pr_array():
    p = np.zeros((2, 2, 2, 2))
    for x, y, a, b in BITS4:
        if a ^ b == x * y:
            p[x, y, a, b] = 0.5
    return p


def local_array(a1, a2, b1, b2, n=2):
    p = np.zeros((n, n, 2, 2))
    for x in range(n):
        for y in range(n):
            p[x, y, (a1 * x) % 2 ^ a2, (b1 * y) % 2 ^ b2] = 1.0
    return p


def born(state, a_vecs, b_vecs):
    """p[x, y, a, b] from explicit Kronecker-product projectors."""
    d = a_vecs.shape[1]
    rho = np.outer(state, state.conj())
    eye = np.eye(d)
    proj = lambda v: np.outer(v, v.conj())
    pa = [[proj(v), eye - proj(v)] for v in a_vecs]
    pb = [[proj(v), eye - proj(v)] for v in b_vecs]
    out = np.zeros((len(a_vecs), len(b_vecs), 2, 2))
    for x, y, a, b in itertools.product(range(len(a_vecs)), range(len(b_vecs)), (0, 1), (0, 1)):
        out[x, y, a, b] = np.real(np.trace(rho @ np.kron(pa[x][a], pb[y][b])))
    return out


def i3322_direct(p):
    """I3322 read term by term from its printed form."""
    j = lambda x, y: p[x, y, 0, 0]
    pa = lambda x: p[x, 0, 0, :].sum()
    pb = lambda y: p[0, y, :, 0].sum()
    return (j(0, 0) + j(0, 1) + j(0, 2) + j(1, 0) + j(1, 1) - j(1, 2) + j(2, 0) - j(2, 1)
            - pb(0) - 2 * pa(0) - pa(1))


def deterministic_boxes_3():
    for fa in itertools.product((0, 1), repeat=3):
        for fb in itertools.product((0, 1), repeat=3):
            p = np.zeros((3, 3, 2, 2))
            for x in range(3):
                for y in range(3):
                    p[x, y, fa[x], fb[y]] = 1.0
            yield p


# ---------------------------------------------------------------------------
# NPA via cvxpy (complex-free, real symmetric), maximising mu directly


def _reduce(word):
    def collapse(ops):
        out = []
        for o in ops:
            if not out or out[-1] != o:
                out.append(o)
        return tuple(out)

    a = collapse([o for o in word if o[0] == "A"])
    b = collapse([o for o in word if o[0] == "B"])
    return min((a, b), (a[::-1], b[::-1]))


def npa_max_mu(local_p, level="1+ab"):
    """max mu with mu*PR + (1-mu)*local_p inside the NPA level, via Clarabel."""
    import cvxpy as cp

    pr = pr_array()
    words = [(), ("A0",), ("A1",), ("B0",), ("B1",)]
    if level == "1+ab":
        words += [(f"A{x}", f"B{y}") for x in (0, 1) for y in (0, 1)]
    n = len(words)
    mu = cp.Variable()
    unknowns = {}

    def moment(key):
        a, b = key
        if len(a) <= 1 and len(b) <= 1:
            if not a and not b:
                return 1.0
            mix = lambda f: mu * f(pr) + (1 - mu) * f(local_p)
            if a and not b:
                x = int(a[0][1])
                return mix(lambda q: q[x, 0, 0, :].sum())
            if b and not a:
                y = int(b[0][1])
                return mix(lambda q: q[0, y, :, 0].sum())
            x, y = int(a[0][1]), int(b[0][1])
            return mix(lambda q: q[x, y, 0, 0])
        if key not in unknowns:
            unknowns[key] = cp.Variable()
        return unknowns[key]

    m = cp.Variable((n, n), symmetric=True)
    cons = [m >> 0, mu >= 0, mu <= 1]
    for i in range(n):
        for j in range(i, n):
            cons.append(m[i, j] == moment(_reduce(tuple(reversed(words[i])) + words[j])))
    cp.Problem(cp.Maximize(mu), cons).solve(solver="CLARABEL")
    return float(mu.value)
