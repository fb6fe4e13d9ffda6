"""Comparing observables: the spectral order against the truth value of A <= B.

For two Hermitian matrices the projection-valued truth value of the
quantized-real inequality is the identity exactly when A precedes B in
the spectral order, whichever quantized conjunction *_j (j < 5) is used.
"""

import numpy as np

from qsetlab import hilbert as hb

rng = np.random.default_rng(3)
for title, ordered in (("ordered pair", True), ("unordered pair", False)):
    A, B = hb.random_noncommuting_hermitian_pair(3, rng, ordered=ordered, positive=True)
    print(title)
    print("  eigenvalues A:", np.round(np.linalg.eigvalsh(A.to_float().a), 3))
    print("  eigenvalues B:", np.round(np.linalg.eigvalsh(B.to_float().a), 3))
    print("  spectral order A <= B:", hb.spectral_order_leq(A, B))
    for j in range(5):
        V = hb.q_value_order(A, B, j)
        rank = int(round(np.trace(V.to_float().a).real))
        print(f"  *{j}: truth value has rank {rank} of {V.d}")
    print("  usual order A <= B:", hb.psd_leq(A, B))
    print()

P = hb.exact_matrix([[1, 0], [0, 0]])
Q = hb.exact_matrix([[hb.GaussianRational(1, 0) / 2] * 2] * 2)
c = hb.closure_generate([P, Q])
print("Closure of two exact rank-one projections:", c.lattice.n, "elements")
print("  labels:", ", ".join(c.lattice.labels))
