"""Projections on small complex spaces, Takeuti's conjugation family and
spectral families of Hermitian matrices.

Two arithmetic modes: exact (Gaussian rationals held in numpy object
arrays) and floating (complex128 with tolerance TAU).
"""

import cmath
import json
import math
from fractions import Fraction

import numpy as np

from . import logical_ops as lops
from .oml_core import LatticeError, OrthoLattice

TAU = 1e-9
RANK_TOL = 1e-7
MAX_DIM = 8


class NumericalIntegrityError(ArithmeticError):
    pass


class DivergenceError(RuntimeError):
    pass


class GaussianRational:
    """a + b i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def of(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
        return GaussianRational(Fraction(x))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        n = self * o.conjugate()
        return GaussianRational(n.re / d, n.im / d)

    def __rtruediv__(self, o):
        return GaussianRational.of(o) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __eq__(self, o):
        try:
            o = GaussianRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


GR = GaussianRational


def _exact_array(rows):
    a = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            a[i, j] = GR.of(x)
    return a


class ComplexMatrix:
    """Immutable square matrix in exact or floating mode."""

    def __init__(self, entries, exact=None):
        if isinstance(entries, ComplexMatrix):
            entries = entries.a
        a = np.asarray(entries)
        if exact is None:
            exact = a.dtype == object
        if exact:
            if a.dtype != object or not all(isinstance(x, GR) for x in a.flat):
                a = _exact_array(a.tolist())
        else:
            a = np.array(a.tolist() if a.dtype == object else a, dtype=complex)
            if not np.isfinite(a).all():
                raise ValueError("matrix entries must be finite")
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if a.shape[0] > MAX_DIM:
            raise ValueError(f"dimension {a.shape[0]} exceeds the cap {MAX_DIM}")
        a.setflags(write=False)
        self.a = a
        self.exact = bool(exact)
        self.d = a.shape[0]

    def _wrap(self, a):
        return ComplexMatrix(a, self.exact)

    def _coerce(self, other):
        if not isinstance(other, ComplexMatrix):
            raise TypeError("expected a ComplexMatrix")
        if other.d != self.d:
            raise ValueError(f"dimension mismatch {self.d} vs {other.d}")
        if other.exact != self.exact:
            raise ValueError("cannot mix exact and floating matrices")
        return other.a

    def __matmul__(self, o):
        return self._wrap(self.a @ self._coerce(o))

    def __add__(self, o):
        return self._wrap(self.a + self._coerce(o))

    def __sub__(self, o):
        return self._wrap(self.a - self._coerce(o))

    def scale(self, c):
        if self.exact:
            c = GR.of(c)
            return self._wrap(np.vectorize(lambda x: x * c, otypes=[object])(self.a))
        return self._wrap(self.a * complex(c))

    def adjoint(self):
        if self.exact:
            return self._wrap(np.vectorize(lambda x: x.conjugate(), otypes=[object])(self.a.T))
        return self._wrap(self.a.conj().T)

    def to_float(self):
        if not self.exact:
            return self
        return ComplexMatrix(np.vectorize(complex, otypes=[complex])(self.a), exact=False)

    def identity(self):
        return identity(self.d, self.exact)

    def zero(self):
        return zeros(self.d, self.exact)

    def close_to(self, o, tol=TAU):
        b = self._coerce(o)
        if self.exact:
            return bool((self.a == b).all())
        return bool(np.abs(self.a - b).max(initial=0.0) <= tol)

    def is_hermitian(self, tol=TAU):
        return self.close_to(self.adjoint(), tol)

    def is_projection(self, tol=TAU):
        return self.is_hermitian(tol) and self.close_to(self @ self, tol)

    def commutes_with(self, o, tol=TAU):
        return (self @ o).close_to(o @ self, tol)

    def key(self, digits=6):
        """Hashable key; floating mode rounds to ``digits`` decimals."""
        if self.exact:
            return tuple((x.re, x.im) for x in self.a.flat)
        r = np.round(self.a, digits) + 0.0  # normalise -0.0
        return r.real.tobytes() + r.imag.tobytes()

    def __eq__(self, o):
        return isinstance(o, ComplexMatrix) and o.d == self.d and o.exact == self.exact \
            and self.close_to(o)

    def __hash__(self):
        return hash(self.key(4))

    def __repr__(self):
        return f"ComplexMatrix(d={self.d}, exact={self.exact})"


def identity(d, exact=False):
    if exact:
        return ComplexMatrix(_exact_array(np.eye(d, dtype=int).tolist()), True)
    return ComplexMatrix(np.eye(d, dtype=complex), False)


def zeros(d, exact=False):
    if exact:
        return ComplexMatrix(_exact_array(np.zeros((d, d), dtype=int).tolist()), True)
    return ComplexMatrix(np.zeros((d, d), dtype=complex), False)


def as_projection(M, tol=TAU):
    M = M if isinstance(M, ComplexMatrix) else ComplexMatrix(M)
    if not M.is_projection(tol):
        raise ValueError("matrix is not an orthogonal projection")
    return M


# exact linear algebra


def _rref(rows):
    """Row reduce a list of lists of GR in place; return pivot columns."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = GR(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _exact_range_basis(a):
    _, piv = _rref(a.tolist())
    return a[:, piv]


def _exact_null_basis(a):
    m, piv = _rref(a.tolist())
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [GR(0)] * ncols
        v[f] = GR(1)
        for row, pc in zip(m, piv):
            v[pc] = -row[f]
        basis.append(v)
    out = np.empty((ncols, len(basis)), dtype=object)
    for k, v in enumerate(basis):
        for i in range(ncols):
            out[i, k] = v[i]
    return out


def _exact_inverse(a):
    k = a.shape[0]
    eye = np.eye(k, dtype=int).tolist()
    aug = [list(a[i]) + [GR(x) for x in eye[i]] for i in range(k)]
    m, piv = _rref(aug)
    if piv[:k] != list(range(k)):
        raise ZeroDivisionError("singular matrix")
    return _exact_array([row[k:] for row in m])


def _adj(a):
    return np.vectorize(lambda x: x.conjugate(), otypes=[object])(a.T)


def projection_onto(V, exact):
    """Orthogonal projection onto the column span of V (d x k)."""
    d = V.shape[0]
    if V.shape[1] == 0:
        return zeros(d, exact)
    if exact:
        Vs = _adj(V)
        return ComplexMatrix(V @ _exact_inverse(Vs @ V) @ Vs, True)
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    U = U[:, s > RANK_TOL * max(1.0, s.max(initial=0.0))]
    return ComplexMatrix(U @ U.conj().T, False)


def range_projection(a, exact):
    """Projection onto the column space of the (possibly wide) array a."""
    if exact:
        return projection_onto(_exact_range_basis(a), True)
    return projection_onto(a, False)


def _null_projection(a, exact, d):
    if exact:
        return projection_onto(_exact_null_basis(a), True)
    _, s, Vh = np.linalg.svd(a)
    rank = int((s > RANK_TOL * max(1.0, s.max(initial=0.0))).sum())
    N = Vh[rank:].conj().T
    return projection_onto(N, False) if N.shape[1] else zeros(d, False)


def proj_ortho(P):
    return P.identity() - P


def proj_meet(P, Q):
    """Projection onto ran P n ran Q: the kernel of the stacked I-P, I-Q."""
    P._coerce(Q)
    I = P.identity()
    stacked = np.vstack([(I - P).a, (I - Q).a])
    return _null_projection(stacked, P.exact, P.d)


def proj_join(P, Q):
    P._coerce(Q)
    return range_projection(np.hstack([P.a, Q.a]), P.exact)


def proj_leq(P, Q, tol=TAU):
    return (Q @ P).close_to(P, tol)


def commutator(P, Q):
    o = proj_ortho
    terms = [proj_meet(P, Q), proj_meet(P, o(Q)), proj_meet(o(P), Q), proj_meet(o(P), o(Q))]
    acc = terms[0]
    for t in terms[1:]:
        acc = proj_join(acc, t)
    return acc


def kotas_matrix(spec, P, Q):
    """A Kotas canonical form evaluated on projections."""
    spec = lops.KotasSpec(*spec)
    o = proj_ortho
    acc = P.zero()
    for bit, (x, y) in zip(spec[:4], ((P, Q), (P, o(Q)), (o(P), Q), (o(P), o(Q)))):
        if bit:
            acc = proj_join(acc, proj_meet(x, y))
    eps = {"0": P.zero(), "1": P.identity(), "P": P, "P'": o(P), "Q": Q, "Q'": o(Q)}[spec.eps]
    return proj_join(acc, proj_meet(eps, o(commutator(P, Q))))


def star_j(j, P, Q):
    return kotas_matrix(lops.conjunction_spec(j), P, Q)


def imp_j(j, P, Q):
    return kotas_matrix(lops.implication_spec(j), P, Q)


# Takeuti's conjugation


def _phase(theta, exact):
    if isinstance(theta, GR):
        if theta.abs2() != 1:
            raise ValueError("exact phase must have modulus one")
        return theta
    if exact:
        raise ValueError("exact mode needs the phase e^{i theta} as a GaussianRational")
    return cmath.exp(1j * theta)


def takeuti_theta(P, Q, theta):
    """P o_theta Q = U Q U* with U = I + (e^{i theta} - 1) P = e^{i theta P}.

    In exact mode ``theta`` must be the unit phase itself.
    """
    P._coerce(Q)
    z = _phase(theta, P.exact)
    U = P.identity() + P.scale(z - 1)
    return U @ Q @ U.adjoint()


def takeuti_expansion(P, Q, theta):
    """Q + (e^{it}-1)PQ + (e^{-it}-1)QP + 2(1 - cos t)PQP."""
    z = _phase(theta, P.exact)
    if P.exact:
        zc = z.conjugate()
        c2 = 2 - (z + zc)  # 2(1 - cos t) = 2 - z - z*
    else:
        zc = z.conjugate()
        c2 = 2 * (1 - math.cos(theta))
    return Q + (P @ Q).scale(z - 1) + (Q @ P).scale(zc - 1) + (P @ Q @ P).scale(c2)


def star_j_theta_i_raw(j, theta, i, P, Q):
    """The defining composition of *_{j,theta,i}."""
    if i == 0:
        return star_j(j, P, takeuti_theta(P, Q, theta))
    if i == 1:
        return star_j(j, takeuti_theta(proj_ortho(Q), P, theta), Q)
    raise ValueError("i must be 0 or 1")


def closed_form(j, theta, i, P, Q):
    """Closed form of *_{j,theta,i} in terms of P, Q and o_theta.

    Eight of the twelve reduce to *_j; the other four add a rotated
    piece below com(P,Q)'.
    """
    o = proj_ortho
    rotated = {
        (2, 0): lambda: takeuti_theta(P, Q, theta),
        (4, 0): lambda: takeuti_theta(P, o(Q), theta),
        (1, 1): lambda: takeuti_theta(o(Q), o(P), theta),
        (3, 1): lambda: takeuti_theta(o(Q), P, theta),
    }
    if (j, i) not in rotated:
        return star_j(j, P, Q)
    noncom = o(commutator(P, Q))
    return proj_join(proj_meet(P, Q), proj_meet(rotated[j, i](), noncom))


def printed_closed_form(j, theta, i, P, Q):
    """The four rotated identities with P *_0 Q as the leading term, as
    they are sometimes stated; they fail already at theta = 0."""
    o = proj_ortho
    base = closed_form(j, theta, i, P, Q)
    if (j, i) not in ((2, 0), (4, 0), (1, 1), (3, 1)):
        return base
    noncom = o(commutator(P, Q))
    rot = {(2, 0): lambda: takeuti_theta(P, Q, theta),
           (4, 0): lambda: takeuti_theta(P, o(Q), theta),
           (1, 1): lambda: takeuti_theta(o(Q), o(P), theta),
           (3, 1): lambda: takeuti_theta(o(Q), P, theta)}[j, i]()
    return proj_join(star_j(0, P, Q), proj_meet(rot, noncom))


def star_j_theta_i(j, theta, i, P, Q, tol=TAU, strict=True):
    """Returns (projection, identity_ok). Raises NumericalIntegrityError on
    a closed-form mismatch when ``strict``."""
    if j not in range(6):
        raise ValueError("j must be in 0..5")
    raw = star_j_theta_i_raw(j, theta, i, P, Q)
    ok = raw.close_to(closed_form(j, theta, i, P, Q), tol)
    if strict and not ok:
        raise NumericalIntegrityError(f"closed form for *_({j},theta,{i}) off by more than {tol}")
    return raw, ok


# spectral families


class SpectralFamily:
    """Step family: cuts are (lambda, E(lambda)) with ascending projections."""

    def __init__(self, cuts):
        self.cuts = tuple(cuts)
        if not self.cuts:
            raise ValueError("empty spectral family")
        self.d = self.cuts[0][1].d

    def at(self, lam):
        E = zeros(self.d, self.cuts[0][1].exact)
        for lv, F in self.cuts:
            if lv <= lam:
                E = F
            else:
                break
        return E

    def eigenvalues(self):
        return [lv for lv, _ in self.cuts]

    def reconstruct(self):
        prev = zeros(self.d, self.cuts[0][1].exact)
        acc = zeros(self.d, self.cuts[0][1].exact)
        for lv, E in self.cuts:
            acc = acc + (E - prev).scale(lv)
            prev = E
        return acc

    def __repr__(self):
        return "SpectralFamily(" + ", ".join(f"{lv:g}" for lv, _ in self.cuts) + ")"


def spectral_family(A, group_tol=1e-8):
    A = A if isinstance(A, ComplexMatrix) else ComplexMatrix(A)
    if not A.is_hermitian():
        raise ValueError("spectral family needs a Hermitian matrix")
    Af = A.to_float().a
    w, V = np.linalg.eigh(Af)
    groups = []
    for k, lam in enumerate(w):
        if groups and abs(lam - groups[-1][0]) <= group_tol * max(1.0, abs(lam)):
            groups[-1][1].append(k)
        else:
            groups.append([lam, [k]])
    cuts = []
    cols = []
    for lam, ks in groups:
        cols.extend(ks)
        Vk = V[:, cols]
        lv = float(np.mean(w[ks]))
        cuts.append((lv, ComplexMatrix(Vk @ Vk.conj().T, False)))
    return SpectralFamily(cuts)


def merged_cuts(FA, FB):
    return sorted(set(FA.eigenvalues()) | set(FB.eigenvalues()))


def spectral_order_leq(A, B, tol=TAU):
    """A <= B in the spectral order: E^B(l) <= E^A(l) at every cut."""
    FA, FB = spectral_family(A), spectral_family(B)
    return all(proj_leq(FB.at(r), FA.at(r), tol) for r in merged_cuts(FA, FB))


# closure


class Closure:
    """A finite sub-ortholattice of projections together with its matrices."""

    def __init__(self, lattice, matrices):
        self.lattice = lattice
        self.matrices = matrices

    def index_of(self, M, tol=1e-6):
        for k, X in enumerate(self.matrices):
            if X.close_to(M, tol if not M.exact else 0):
                return k
        raise KeyError("matrix is not in the closure")


def closure_generate(gens, cap=256, names=None):
    """Close a set of projections under meet, join and ortho.

    Raises DivergenceError once more than ``cap`` elements appear.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    d, exact = gens[0].d, gens[0].exact
    tol = 0 if exact else 1e-6
    names = list(names) if names else [f"g{k}" for k in range(len(gens))]
    mats, labels, keys = [], [], {}

    def add(M, label):
        k = M.key()
        if k in keys:
            return keys[k], False
        if not exact:
            for idx, X in enumerate(mats):
                if X.close_to(M, tol):
                    keys[k] = idx
                    return idx, False
        if len(mats) >= cap:
            raise DivergenceError(f"closure exceeded {cap} elements")
        mats.append(M)
        labels.append(label)
        keys[k] = len(mats) - 1
        return len(mats) - 1, True

    add(zeros(d, exact), "0")
    add(identity(d, exact), "1")
    for g, nm in zip(gens, names):
        add(as_projection(g), nm)
    meet_cache, join_cache = {}, {}
    while True:
        n0 = len(mats)
        for a in range(n0):
            add(proj_ortho(mats[a]), _neg(labels[a]))
        n1 = len(mats)
        for a in range(n1):
            for b in range(a + 1, n1):
                if (a, b) not in meet_cache:
                    meet_cache[a, b], _ = add(proj_meet(mats[a], mats[b]),
                                              f"({labels[a]}^{labels[b]})")
                    join_cache[a, b], _ = add(proj_join(mats[a], mats[b]),
                                              f"({labels[a]}v{labels[b]})")
        if len(mats) == n0:
            break
    n = len(mats)
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        meet[a, a] = join[a, a] = a
        for b in range(a + 1, n):
            meet[a, b] = meet[b, a] = meet_cache[a, b]
            join[a, b] = join[b, a] = join_cache[a, b]
    ortho = [add(proj_ortho(M), "")[0] for M in mats]
    leq = meet == np.arange(n)[:, None]
    L = OrthoLattice(leq, ortho, labels, meet, join)
    return Closure(L, mats)


def _neg(label):
    if label == "0":
        return "1"
    if label == "1":
        return "0"
    if label.endswith("'"):
        return label[:-1]
    return label + "'" if label.isalnum() else f"{label}'"


def binary_op_matrix(op, P, Q, closure=None):
    """Evaluate a lattice operation factory (L -> BinaryOperation) on two
    projections through the closure they generate."""
    cl = closure or closure_generate([P, Q])
    table = op(cl.lattice)
    i, j = cl.index_of(P), cl.index_of(Q)
    return cl.matrices[int(table.table[i, j])]


def q_value_order(A, B, conj, method="closure"):
    """(join over cuts r of E^B(r) * E^A(r)')' for a conjunction *.

    ``conj`` is an index j (for *_j) or a function L -> BinaryOperation.
    ``method="direct"`` evaluates *_j with matrix Kotas forms instead.
    """
    FA, FB = spectral_family(A), spectral_family(B)
    if isinstance(conj, int):
        j = conj
        factory = lambda L: lops.conjunction_j(L, j)  # noqa: E731
    else:
        j, factory = None, conj
    acc = zeros(FA.d, False)
    for r in merged_cuts(FA, FB):
        X, Y = FB.at(r), proj_ortho(FA.at(r))
        if method == "direct":
            if j is None:
                raise ValueError("direct method needs an index j")
            val = star_j(j, X, Y)
        else:
            val = binary_op_matrix(factory, X, Y)
        acc = proj_join(acc, val)
    return proj_ortho(acc)


def psd_leq(A, B, tol=TAU):
    """A <= B as operators: B - A positive semidefinite within tol."""
    D = (B - A).to_float().a
    return bool(np.linalg.eigvalsh((D + D.conj().T) / 2).min() >= -tol)


def matrix_power(A, k):
    out = A.identity()
    for _ in range(k):
        out = out @ A
    return out


# random samples


def random_unitary(d, rng):
    from scipy.stats import unitary_group
    return unitary_group.rvs(d, random_state=rng)


def random_projection(d, rank, rng):
    U = random_unitary(d, rng)
    V = U[:, :rank]
    return ComplexMatrix(V @ V.conj().T, False)


def random_structured_pair(d, rng):
    """Two projections with a random commuting block and a generic
    noncommuting block, conjugated by a random unitary."""
    from scipy.linalg import block_diag
    c = int(rng.integers(0, d - 1))
    nc = d - c
    Pc = np.diag(rng.integers(0, 2, c)).astype(complex)
    Qc = np.diag(rng.integers(0, 2, c)).astype(complex)
    r = int(rng.integers(1, nc)) if nc > 1 else 0
    Pn = random_projection(nc, r, rng).a if nc > 1 else np.zeros((nc, nc), complex)
    r2 = int(rng.integers(1, nc)) if nc > 1 else 0
    Qn = random_projection(nc, r2, rng).a if nc > 1 else np.zeros((nc, nc), complex)
    U = random_unitary(d, rng)
    P = U @ block_diag(Pc, Pn) @ U.conj().T
    Q = U @ block_diag(Qc, Qn) @ U.conj().T
    return ComplexMatrix((P + P.conj().T) / 2, False), ComplexMatrix((Q + Q.conj().T) / 2, False)


def random_rank1_pair(rng):
    """Two distinct non-complementary rank-one projections in C^2."""
    while True:
        P = random_projection(2, 1, rng)
        Q = random_projection(2, 1, rng)
        if not P.commutes_with(Q, 1e-3):
            return P, Q


def _herm(U, diag):
    H = U @ np.diag(np.asarray(diag, dtype=complex)) @ U.conj().T
    return ComplexMatrix((H + H.conj().T) / 2, False)


def random_commuting_hermitian_pair(d, rng, ordered=None):
    """Diagonal in a shared random basis with small integer spectra."""
    U = random_unitary(d, rng)
    a = rng.integers(-2, 3, d)
    if ordered is None:
        ordered = bool(rng.integers(0, 2))
    b = a + rng.integers(0, 3, d) if ordered else rng.integers(-2, 3, d)
    return _herm(U, a), _herm(U, b)


def random_noncommuting_hermitian_pair(d, rng, ordered=None, positive=False):
    """Noncommuting pair; when ``ordered`` the spectra are separated blockwise
    so that A precedes B in the spectral order."""
    from scipy.linalg import block_diag
    if ordered is None:
        ordered = bool(rng.integers(0, 2))
    base = 1 if positive else -3
    while True:
        if ordered:
            split = int(rng.integers(1, d)) if d > 2 and rng.integers(0, 2) else d
            sizes = [split, d - split] if split < d else [d]
            As, Bs = [], []
            offset = base
            for s in sizes:
                if s == 0:
                    continue
                ea = offset + rng.integers(0, 2, s)
                eb = offset + 2 + rng.integers(0, 2, s)
                As.append(_herm(random_unitary(s, rng) if s > 1 else np.eye(1), ea).a)
                Bs.append(_herm(random_unitary(s, rng) if s > 1 else np.eye(1), eb).a)
                offset += 5
            U = random_unitary(d, rng)
            A = ComplexMatrix(U @ block_diag(*As) @ U.conj().T, False)
            B = ComplexMatrix(U @ block_diag(*Bs) @ U.conj().T, False)
            A = ComplexMatrix((A.a + A.a.conj().T) / 2, False)
            B = ComplexMatrix((B.a + B.a.conj().T) / 2, False)
        else:
            A = _herm(random_unitary(d, rng), base + rng.integers(0, 4, d))
            B = _herm(random_unitary(d, rng), base + rng.integers(0, 4, d))
        if not A.commutes_with(B, 1e-6):
            return A, B


# file format


def _parse_entry(x, exact):
    if isinstance(x, list):
        re, im = x
    else:
        re, im = x, 0
    if exact:
        return GR(Fraction(str(re)), Fraction(str(im)))
    return complex(float(Fraction(str(re))), float(Fraction(str(im))))


def matrix_from_dict(d):
    exact = d.get("mode", "exact") == "exact"
    dim = int(d["dim"])
    rows = d["entries"]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValueError("entries do not match the declared dimension")
    vals = [[_parse_entry(x, exact) for x in r] for r in rows]
    if exact:
        return ComplexMatrix(_exact_array(vals), True)
    return ComplexMatrix(np.array(vals, dtype=complex), False)


def matrix_to_dict(M):
    def fmt(x):
        if M.exact:
            return [str(x.re), str(x.im)] if x.im else str(x.re)
        x = complex(x)
        return [repr(x.real), repr(x.imag)] if x.imag else repr(x.real)
    return {"mode": "exact" if M.exact else "float", "dim": M.d,
            "entries": [[fmt(x) for x in row] for row in M.a]}


def load_matrix(path):
    with open(path) as fh:
        return matrix_from_dict(json.load(fh))


def save_matrix(M, path):
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(M), fh, indent=1)
        fh.write("\n")


def exact_matrix(rows):
    return ComplexMatrix(_exact_array(rows), True)


def lattice_of(closure):
    if not isinstance(closure, Closure):
        raise LatticeError("expected a Closure")
    return closure.lattice
