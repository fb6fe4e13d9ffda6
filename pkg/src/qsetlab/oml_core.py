"""Finite orthomodular lattices.

A lattice is stored as dense tables over element indices: the order
relation, the orthocomplement permutation, and the meet/join tables.
Everything downstream (operations, V^(Q), the evaluator) works on indices.
"""

import hashlib
import itertools
import json
import string

import numpy as np

MAX_ELEMENTS = 4096


class LatticeError(ValueError):
    pass


class CapacityError(LatticeError):
    pass


class LatticeMismatchError(LatticeError):
    pass


class AxiomReport:
    """Outcome of verify_axioms: ok flag plus the first violation found."""

    def __init__(self, ok, law=None, witness=None, detail=""):
        self.ok = ok
        self.law = law
        self.witness = witness
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "AxiomReport(ok)"
        return f"AxiomReport({self.law}, witness={self.witness}, {self.detail})"


def _index_dtype(n):
    return np.int16 if n < 2**15 else np.int32


def _tables_from_leq(leq):
    """Meet and join tables of a finite poset, or None if it is not a lattice."""
    n = leq.shape[0]
    dt = _index_dtype(n)
    down = leq.sum(axis=0)  # number of elements below each y
    up = leq.sum(axis=1)
    meet = np.empty((n, n), dtype=dt)
    join = np.empty((n, n), dtype=dt)
    for a in range(n):
        lower = leq[:, a][:, None] & leq  # [x, b]: x <= a and x <= b
        cand = np.where(lower, down[:, None], -1).argmax(axis=0)
        # the candidate must sit above every common lower bound
        if not (~lower | leq[:, cand]).all():
            return None
        meet[a] = cand
        upper = leq[a, :][:, None] & leq.T  # [x, b]: a <= x and b <= x
        cand = np.where(upper, up[:, None], -1).argmax(axis=0)
        if not (~upper | leq.T[:, cand]).all():
            return None
        join[a] = cand
    return meet, join


class OrthoLattice:
    """Immutable finite ortholattice given by its order and orthocomplement.

    By default the constructor insists on the orthomodular axioms; pass
    ``allow_non_oml=True`` to build ortholattices such as the hexagon for
    negative tests.
    """

    def __init__(self, leq, ortho, labels=None, meet=None, join=None,
                 allow_non_oml=False, cap=None):
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        cap = MAX_ELEMENTS if cap is None else cap
        if n > cap:
            raise CapacityError(f"{n} elements exceeds capacity {cap}")
        if n == 0 or leq.shape != (n, n):
            raise LatticeError("order relation must be a non-empty square table")
        self.n = n
        self.leq = leq
        self.ortho = np.asarray(ortho, dtype=_index_dtype(n))
        if self.ortho.shape != (n,):
            raise LatticeError("ortho must have one entry per element")
        if labels is None:
            labels = [str(i) for i in range(n)]
        self.labels = tuple(labels)
        if len(set(self.labels)) != n:
            raise LatticeError("labels must be distinct")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if meet is None or join is None:
            tables = _tables_from_leq(leq)
            if tables is None:
                raise LatticeError("order relation is not a lattice")
            meet, join = tables
        self.meet_table = np.asarray(meet, dtype=_index_dtype(n))
        self.join_table = np.asarray(join, dtype=_index_dtype(n))
        down = leq.sum(axis=0)
        self.bottom = int(np.argmin(down))
        self.top = int(np.argmax(down))
        for t in (self.leq, self.ortho, self.meet_table, self.join_table):
            t.setflags(write=False)
        h = hashlib.blake2b(digest_size=12)
        h.update(str(n).encode())
        h.update(np.packbits(leq).tobytes())
        h.update(self.ortho.astype(np.int32).tobytes())
        self.fingerprint = h.hexdigest()
        self._commute = None
        self.report = verify_axioms(self)
        if not self.report.ok and not allow_non_oml:
            raise LatticeError(f"not an orthomodular lattice: {self.report}")

    def __repr__(self):
        return f"OrthoLattice(n={self.n}, fp={self.fingerprint[:8]})"

    def __eq__(self, other):
        return isinstance(other, OrthoLattice) and other.fingerprint == self.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def __len__(self):
        return self.n

    # element helpers

    def index(self, x):
        """Resolve a label (or pass through an index) to an element index."""
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.n:
                raise LatticeError(f"element index {x} out of range")
            return int(x)
        key = str(x).strip().replace("⊥", "'").replace(" ", "")
        if key in self._label_index:
            return self._label_index[key]
        raise LatticeError(f"unknown element label {x!r}")

    def label(self, i):
        return self.labels[int(i)]

    def meet(self, a, b):
        return int(self.meet_table[a, b])

    def join(self, a, b):
        return int(self.join_table[a, b])

    def perp(self, a):
        return int(self.ortho[a])

    def le(self, a, b):
        return bool(self.leq[a, b])

    def meet_all(self, items):
        acc = self.top
        for x in items:
            acc = int(self.meet_table[acc, x])
        return acc

    def join_all(self, items):
        acc = self.bottom
        for x in items:
            acc = int(self.join_table[acc, x])
        return acc

    @property
    def commute_matrix(self):
        """C[p, q] is True iff p = (p and q) or (p and q')."""
        if self._commute is None:
            m = self.meet_table.astype(np.intp)
            m2 = m[:, self.ortho]
            c = self.join_table[m, m2] == np.arange(self.n)[:, None]
            c.setflags(write=False)
            self._commute = c
        return self._commute

    def elements(self):
        return range(self.n)

    def to_dict(self):
        pairs = np.argwhere(self.leq)
        return {
            "n": self.n,
            "ortho": [int(x) for x in self.ortho],
            "leq": [[int(a), int(b)] for a, b in pairs if a != b],
            "labels": list(self.labels),
        }


class ElementSet:
    """A deduplicated, sorted set of element indices of one lattice."""

    __slots__ = ("lattice", "members", "_set")

    def __init__(self, lattice, members):
        self.lattice = lattice
        ms = sorted({int(m) for m in members})
        if ms and (ms[0] < 0 or ms[-1] >= lattice.n):
            raise LatticeError("element index out of range")
        self.members = tuple(ms)
        self._set = frozenset(ms)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self._set

    def __eq__(self, other):
        if isinstance(other, ElementSet):
            return self.lattice == other.lattice and self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash((self.lattice.fingerprint, self.members))

    def __le__(self, other):
        return self._set <= other._set

    def labels(self):
        return [self.lattice.label(m) for m in self.members]

    def __repr__(self):
        return "{" + ", ".join(self.labels()) + "}"


def _members(L, A):
    if isinstance(A, ElementSet):
        if A.lattice != L:
            raise LatticeMismatchError("element set belongs to another lattice")
        return list(A.members)
    return [L.index(a) for a in A]


# axioms


def verify_axioms(L):
    """Check order, lattice tables, ortho laws and orthomodularity.

    Returns the first violation with a witness tuple of indices.
    """
    n, leq, o = L.n, L.leq, L.ortho.astype(np.intp)
    idx = np.arange(n)
    if not leq[idx, idx].all():
        return AxiomReport(False, "reflexivity", (int(np.argmin(leq[idx, idx])),))
    anti = leq & leq.T & ~np.eye(n, dtype=bool)
    if anti.any():
        a, b = np.argwhere(anti)[0]
        return AxiomReport(False, "antisymmetry", (int(a), int(b)))
    li = leq.astype(np.int32)
    trans = (li @ li > 0) & ~leq
    if trans.any():
        a, b = np.argwhere(trans)[0]
        return AxiomReport(False, "transitivity", (int(a), int(b)))
    if not leq[L.bottom].all() or not leq[:, L.top].all():
        return AxiomReport(False, "bounds", ())
    m, j = L.meet_table.astype(np.intp), L.join_table.astype(np.intp)
    # meet is a lower bound and join an upper bound
    if not (leq[m, idx[:, None]] & leq[m, idx[None, :]]).all():
        return AxiomReport(False, "meet-table", ())
    if not (leq[idx[:, None], j] & leq[idx[None, :], j]).all():
        return AxiomReport(False, "join-table", ())
    if sorted(o.tolist()) != list(range(n)) or not (o[o] == idx).all():
        return AxiomReport(False, "involution", ())
    rev = leq & ~leq[o[None, :], o[:, None]]
    if rev.any():
        a, b = np.argwhere(rev)[0]
        return AxiomReport(False, "order-reversing", (int(a), int(b)))
    bad = np.nonzero(m[idx, o] != L.bottom)[0]
    if bad.size:
        return AxiomReport(False, "contradiction", (int(bad[0]),))
    bad = np.nonzero(j[idx, o] != L.top)[0]
    if bad.size:
        return AxiomReport(False, "excluded-middle", (int(bad[0]),))
    dm = o[m] != j[o[:, None], o[None, :]]
    if dm.any():
        a, b = np.argwhere(dm)[0]
        return AxiomReport(False, "de-morgan", (int(a), int(b)))
    # orthomodular law: a <= b implies a or (a' and b) = b
    om = j[idx[:, None], m[o[:, None], idx[None, :]]]
    viol = leq & (om != idx[None, :])
    if viol.any():
        a, b = np.argwhere(viol)[0]
        return AxiomReport(False, "orthomodular", (int(a), int(b)),
                           f"{L.label(a)} <= {L.label(b)} but "
                           f"{L.label(a)} v ({L.label(a)}' ^ {L.label(b)}) = {L.label(om[a, b])}")
    return AxiomReport(True)


# constructors


def build_boolean(k, cap=None):
    """The power set lattice 2^k with set complement, k >= 1."""
    if k < 1:
        raise LatticeError("need at least one atom")
    if k > 16:
        raise CapacityError("at most 16 atoms")
    n = 1 << k
    cap = MAX_ELEMENTS if cap is None else cap
    if n > cap:
        raise CapacityError(f"2^{k} exceeds capacity {cap}")
    x = np.arange(n)
    leq = (x[:, None] & x[None, :]) == x[:, None]
    meet = x[:, None] & x[None, :]
    join = x[:, None] | x[None, :]
    ortho = (n - 1) ^ x
    labels = []
    for s in range(n):
        if s == 0:
            labels.append("0")
        elif s == n - 1:
            labels.append("1")
        else:
            labels.append("".join(string.ascii_lowercase[i] for i in range(k) if s >> i & 1))
    return OrthoLattice(leq, ortho, labels, meet, join, cap=cap)


def horizontal_sum(lattices, labels=None, cap=None):
    """Paste nontrivial lattices together at their bottom and top."""
    lattices = list(lattices)
    if not lattices:
        raise LatticeError("need at least one summand")
    for M in lattices:
        if M.n < 2:
            raise LatticeError("summands must have 0 != 1")
    n = 2 + sum(M.n - 2 for M in lattices)
    cap = MAX_ELEMENTS if cap is None else cap
    if n > cap:
        raise CapacityError(f"{n} elements exceeds capacity {cap}")
    leq = np.zeros((n, n), dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    ortho = np.zeros(n, dtype=np.int64)
    ortho[0], ortho[n - 1] = n - 1, 0
    auto = ["0"]
    pos = 1
    for s, M in enumerate(lattices):
        inner = [i for i in range(M.n) if i not in (M.bottom, M.top)]
        where = {M.bottom: 0, M.top: n - 1}
        for k, i in enumerate(inner):
            where[i] = pos + k
        for i in inner:
            for j in inner:
                leq[where[i], where[j]] = M.leq[i, j]
            ortho[where[i]] = where[int(M.ortho[i])]
            auto.append(f"{M.label(i)}.{s}")
        pos += len(inner)
    auto.append("1")
    return OrthoLattice(leq, ortho, labels or auto, cap=cap)


def build_mo(m, cap=None):
    """MO_m: m complementary atom pairs pasted at 0 and 1 (the Chinese lantern for m=2)."""
    if m < 1:
        raise LatticeError("need at least one atom pair")
    n = 2 * m + 2
    cap = MAX_ELEMENTS if cap is None else cap
    if n > cap:
        raise CapacityError(f"{n} elements exceeds capacity {cap}")
    names = []
    for i in range(m):
        base = string.ascii_lowercase[i] if i < 26 else f"a{i}"
        names += [base, base + "'"]
    labels = ["0"] + names + ["1"]
    leq = np.zeros((n, n), dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    np.fill_diagonal(leq, True)
    ortho = np.empty(n, dtype=np.int64)
    ortho[0], ortho[n - 1] = n - 1, 0
    for i in range(m):
        ortho[1 + 2 * i], ortho[2 + 2 * i] = 2 + 2 * i, 1 + 2 * i
    x = np.arange(n)
    eq = x[:, None] == x[None, :]
    meet = np.where(eq, x[:, None], 0)
    meet[n - 1, :], meet[:, n - 1] = x, x
    join = np.where(eq, x[:, None], n - 1)
    join[0, :], join[:, 0] = x, x
    return OrthoLattice(leq, ortho, labels, meet, join, cap=cap)


def direct_product(L1, L2, cap=None):
    """Componentwise order and ortho; element (i, j) has index i*|L2| + j."""
    n1, n2 = L1.n, L2.n
    n = n1 * n2
    cap = MAX_ELEMENTS if cap is None else cap
    if n > cap:
        raise CapacityError(f"{n1}x{n2} = {n} elements exceeds capacity {cap}")
    x = np.arange(n)
    I, J = x // n2, x % n2
    leq = L1.leq[I[:, None], I[None, :]] & L2.leq[J[:, None], J[None, :]]
    m1, m2 = L1.meet_table.astype(np.intp), L2.meet_table.astype(np.intp)
    j1, j2 = L1.join_table.astype(np.intp), L2.join_table.astype(np.intp)
    meet = m1[I[:, None], I[None, :]] * n2 + m2[J[:, None], J[None, :]]
    join = j1[I[:, None], I[None, :]] * n2 + j2[J[:, None], J[None, :]]
    ortho = L1.ortho.astype(np.intp)[I] * n2 + L2.ortho.astype(np.intp)[J]
    labels = [f"({L1.label(i)},{L2.label(j)})" for i, j in zip(I, J)]
    return OrthoLattice(leq, ortho, labels, meet, join, cap=cap)


def hexagon():
    """The six-element ortholattice O6, which is not orthomodular."""
    labels = ["0", "a", "b", "b'", "a'", "1"]
    # chains 0 < a < b < 1 and 0 < b' < a' < 1
    rel = [(0, 1), (1, 2), (0, 3), (3, 4), (2, 5), (4, 5)]
    leq = np.eye(6, dtype=bool)
    for a, b in rel:
        leq[a, b] = True
    for _ in range(3):
        leq = leq | ((leq.astype(int) @ leq.astype(int)) > 0)
    ortho = [5, 4, 3, 2, 1, 0]
    return OrthoLattice(leq, ortho, labels, allow_non_oml=True)


def subset_lattice(L, members, top=None, labels=None):
    """The subposet on ``members`` as an ortholattice.

    ``members`` must be closed under L's meet and join. With ``top`` given the
    induced ortho is x -> x' ^ top (an interval [0, top]); otherwise L's own.
    """
    ms = sorted(set(int(m) for m in members))
    pos = {m: k for k, m in enumerate(ms)}
    arr = np.array(ms, dtype=np.intp)
    leq = L.leq[np.ix_(arr, arr)]
    try:
        meet = np.vectorize(pos.__getitem__)(L.meet_table[np.ix_(arr, arr)])
        join = np.vectorize(pos.__getitem__)(L.join_table[np.ix_(arr, arr)])
        if top is None:
            ortho = [pos[int(L.ortho[m])] for m in ms]
        else:
            ortho = [pos[int(L.meet_table[L.ortho[m], top])] for m in ms]
    except KeyError:
        raise LatticeError("member set is not closed under the lattice operations")
    if labels is None:
        labels = [L.label(m) for m in ms]
    return OrthoLattice(leq, ortho, labels, meet, join)


# commutation


def commutes(L, P, Q):
    return bool(L.commute_matrix[L.index(P), L.index(Q)])


def commutant(L, A):
    """A^! : all elements commuting with every member of A."""
    ms = _members(L, A)
    if not ms:
        return ElementSet(L, range(L.n))
    mask = L.commute_matrix[ms].all(axis=0)
    return ElementSet(L, np.nonzero(mask)[0])


def generated_sublogic(L, A):
    """A^!! , the sublogic generated by A."""
    return commutant(L, commutant(L, A))


def center(L):
    return commutant(L, range(L.n))


def commutator_pair(L, P, Q):
    """Marsden commutator (P^Q) v (P^Q') v (P'^Q) v (P'^Q')."""
    P, Q = L.index(P), L.index(Q)
    o, m = L.ortho, L.meet_table
    return L.join_all([m[P, Q], m[P, o[Q]], m[o[P], Q], m[o[P], o[Q]]])


def _commutator_bk(L, ms):
    o, m = L.ortho, L.meet_table
    acc = L.bottom
    for signs in itertools.product((False, True), repeat=len(ms)):
        t = L.top
        for x, s in zip(ms, signs):
            t = m[t, o[x] if s else x]
        acc = L.join_table[acc, t]
    return int(acc)


def _commutator_o(L, ms):
    cand = sorted(set(commutant(L, ms)) & set(generated_sublogic(L, ms)))
    C, m = L.commute_matrix, L.meet_table
    good = []
    for E in cand:
        cut = [int(m[x, E]) for x in ms]
        if all(C[p, q] for p in cut for q in cut):
            good.append(E)
    best = L.join_all(good)
    if best not in good:
        raise LatticeError("no maximum commutator candidate; lattice tables inconsistent")
    return best


def commutator_set(L, A, method="O"):
    """Commutator of a finite set: the largest E in A^! n A^!! cutting A into
    pairwise commuting pieces ("O"), or the sign-pattern join ("BK").

    The empty family has commutator 1 by convention.
    """
    ms = sorted(set(_members(L, A)))
    if not ms:
        return L.top
    if method == "BK":
        if len(ms) > 16:
            raise CapacityError("sign-pattern join limited to 16 generators")
        return _commutator_bk(L, ms)
    if method == "O":
        return _commutator_o(L, ms)
    raise ValueError(f"unknown commutator method {method!r}")


def is_boolean(L):
    return bool(L.commute_matrix.all())


def is_extremely_noncommutative(L):
    """P ^ Q = 0 for all distinct P, Q below 1."""
    idx = [i for i in range(L.n) if i != L.top]
    sub = L.meet_table[np.ix_(idx, idx)]
    off = ~np.eye(len(idx), dtype=bool)
    return bool((sub[off] == L.bottom).all())


class Decomposition:
    def __init__(self, lattice, sublogic, E, boolean_part, nonboolean_part,
                 boolean_members, nonboolean_members):
        self.lattice = lattice
        self.sublogic = sublogic
        self.E = E
        self.boolean_part = boolean_part
        self.nonboolean_part = nonboolean_part
        self.boolean_members = boolean_members
        self.nonboolean_members = nonboolean_members

    def split(self, X):
        L = self.lattice
        return L.meet(X, self.E), L.meet(X, L.perp(self.E))

    def reconstruction_ok(self):
        """X -> (X ^ E, X ^ E') is an order and ortho isomorphism onto the product."""
        L, E = self.lattice, self.E
        Ep = L.perp(E)
        R = list(self.sublogic)
        images = {X: self.split(X) for X in R}
        if len(set(images.values())) != len(R):
            return False
        b, nb = set(self.boolean_members), set(self.nonboolean_members)
        if {x for x, _ in images.values()} != b or {y for _, y in images.values()} != nb:
            return False
        if len(R) != len(b) * len(nb):
            return False
        for X in R:
            x, y = images[X]
            px, py = images[L.perp(X)]
            if px != L.meet(L.perp(x), E) or py != L.meet(L.perp(y), Ep):
                return False
            for Y in R:
                u, v = images[Y]
                if L.le(X, Y) != (L.le(x, u) and L.le(y, v)):
                    return False
        return True


def decompose(L, A):
    """Split A^!! into the interval below the commutator of A (Boolean) and
    the interval below its complement."""
    ms = _members(L, A)
    if not ms:
        raise LatticeError("decompose needs a nonempty generating set")
    R = generated_sublogic(L, ms)
    E = commutator_set(L, ms)
    Ep = L.perp(E)
    below_e = [x for x in R if L.le(x, E)]
    below_ep = [x for x in R if L.le(x, Ep)]
    F1 = subset_lattice(L, below_e, top=E)
    F2 = subset_lattice(L, below_ep, top=Ep)
    if not is_boolean(F1):
        raise LatticeError("Boolean factor is not Boolean")
    return Decomposition(L, R, E, F1, F2, below_e, below_ep)


def is_isomorphic(L1, L2):
    """Backtracking search for an order and ortho preserving bijection."""
    return find_isomorphism(L1, L2) is not None


def find_isomorphism(L1, L2):
    """Map from L1 indices to L2 indices, or None."""
    if L1.n != L2.n:
        return None
    n = L1.n
    sig1 = [(int(L1.leq[:, i].sum()), int(L1.leq[i].sum())) for i in range(n)]
    sig2 = [(int(L2.leq[:, i].sum()), int(L2.leq[i].sum())) for i in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    order = sorted(range(n), key=lambda i: sig1[i])
    f = {}
    used = set()

    def consistent(i, j):
        if sig1[i] != sig2[j]:
            return False
        oi, oj = int(L1.ortho[i]), int(L2.ortho[j])
        if (oi == i) != (oj == j):
            return False
        if oi in f and f[oi] != oj:
            return False
        for a, b in f.items():
            if L1.leq[a, i] != L2.leq[b, j] or L1.leq[i, a] != L2.leq[j, b]:
                return False
        return True

    def search(k):
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if j in used or not consistent(i, j):
                continue
            f[i] = j
            used.add(j)
            if search(k + 1):
                return True
            del f[i]
            used.discard(j)
        return False

    return dict(f) if search(0) else None


# named lattices and files


def parse_lattice_name(name, cap=None):
    """bool<k>, mo<m>, prod(<a>,<b>) or file:<path>."""
    s = name.strip()
    if s.startswith("file:"):
        return load_lattice(s[5:], cap=cap)
    if s.startswith("prod(") and s.endswith(")"):
        inner = s[5:-1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return direct_product(parse_lattice_name(inner[:i], cap),
                                      parse_lattice_name(inner[i + 1:], cap), cap=cap)
        raise LatticeError(f"bad product name {name!r}")
    for prefix, ctor in (("bool", build_boolean), ("mo", build_mo)):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            return ctor(int(s[len(prefix):]), cap=cap)
    raise LatticeError(f"unknown lattice name {name!r}")


def lattice_from_dict(d, allow_non_oml=False, cap=None):
    n = int(d["n"])
    leq = np.eye(n, dtype=bool)
    for a, b in d.get("leq", []):
        leq[int(a), int(b)] = True
    # accept either the full relation or a generating set of covers
    while True:
        nxt = leq | ((leq.astype(np.int32) @ leq.astype(np.int32)) > 0)
        if (nxt == leq).all():
            break
        leq = nxt
    return OrthoLattice(leq, d["ortho"], d.get("labels"), allow_non_oml=allow_non_oml, cap=cap)


def load_lattice(path, allow_non_oml=False, cap=None):
    with open(path) as fh:
        return lattice_from_dict(json.load(fh), allow_non_oml=allow_non_oml, cap=cap)


def save_lattice(L, path):
    with open(path, "w") as fh:
        json.dump(L.to_dict(), fh, indent=1)
        fh.write("\n")
