"""Independent reference computations used to freeze expected values.

Nothing here goes through the lattice tables of the package: Boolean
algebras are modelled with Python frozensets and MO2 with explicit real
2x2 projection matrices.
"""

import itertools

import numpy as np

SQ = np.sqrt(0.5)


def mo2_matrices():
    """The six projections of MO2 realized in R^2, keyed by label."""
    def p(v):
        v = np.asarray(v, dtype=float)
        return np.outer(v, v) / v.dot(v)
    I = np.eye(2)
    a, b = p([1, 0]), p([1, 1])
    return {"0": np.zeros((2, 2)), "a": a, "a'": I - a, "b": b, "b'": I - b, "1": I}


def _range_proj(M):
    u, s, _ = np.linalg.svd(M)
    k = int((s > 1e-9).sum())
    U = u[:, :k]
    return U @ U.T


def mat_meet(P, Q):
    I = np.eye(len(P))
    # kernel of (I-P) stacked with (I-Q)
    A = np.vstack([I - P, I - Q])
    _, s, vt = np.linalg.svd(A)
    null = vt[int((s > 1e-9).sum()):]
    return null.T @ null if len(null) else np.zeros_like(P)


def mat_join(P, Q):
    return _range_proj(np.hstack([P, Q]))


def mat_label(M, table):
    for k, v in table.items():
        if np.allclose(M, v, atol=1e-9):
            return k
    raise KeyError("not in MO2")


def mo2_kotas(alpha, beta, gamma, delta, eps, P, Q):
    """Kotas form evaluated with projection matrices on labels of MO2."""
    T = mo2_matrices()
    I = np.eye(2)
    p, q = T[P], T[Q]
    pp, qp = I - p, I - q
    terms = [mat_meet(p, q), mat_meet(p, qp), mat_meet(pp, q), mat_meet(pp, qp)]
    com = mat_join(mat_join(terms[0], terms[1]), mat_join(terms[2], terms[3]))
    e = {"0": np.zeros((2, 2)), "P": p, "Q": q, "P'": pp, "Q'": qp, "1": I}[eps]
    acc = np.zeros((2, 2))
    for bit, t in zip((alpha, beta, gamma, delta), terms):
        if bit:
            acc = mat_join(acc, t)
    acc = mat_join(acc, mat_meet(e, I - com))
    return mat_label(acc, T)


def boolean_sets(k):
    atoms = range(k)
    return [frozenset(c) for r in range(k + 1) for c in itertools.combinations(atoms, r)]


def hf_member(x, y):
    return x in y
