"""Binary operations on a finite logic.

Every operation is materialized as an n x n index table. Kotas polynomials

    (P^Q^a) v (P^Q'^b) v (P'^Q^c) v (P'^Q'^d) v (e ^ com(P,Q)')

are built from a ``KotasSpec``; the six quantized implications and their
dual conjunctions are particular specs.
"""

import itertools
from typing import NamedTuple

import numpy as np

from .oml_core import LatticeError, LatticeMismatchError, generated_sublogic

EPSILONS = ("0", "P", "P'", "Q", "Q'", "1")
IMPLICATION_EPS = ("0", "P", "Q", "P'", "Q'", "1")
CONJUNCTION_EPS = ("1", "P'", "Q", "P", "Q'", "0")


class KotasSpec(NamedTuple):
    alpha: bool
    beta: bool
    gamma: bool
    delta: bool
    eps: str

    def __str__(self):
        bits = "".join("1" if b else "0" for b in self[:4])
        return f"kotas({bits},{self.eps})"


ALL_SPECS = tuple(KotasSpec(*bits, e) for bits in itertools.product((False, True), repeat=4)
                  for e in EPSILONS)


def implication_spec(j):
    _check_j(j)
    return KotasSpec(True, False, True, True, IMPLICATION_EPS[j])


def conjunction_spec(j):
    _check_j(j)
    return KotasSpec(True, False, False, False, CONJUNCTION_EPS[j])


def _check_j(j):
    if j not in range(6):
        raise ValueError(f"index j must be in 0..5, got {j!r}")


class BinaryOperation:
    """A total operation f: L x L -> L stored as a table of indices."""

    def __init__(self, lattice, table, name="tabulated", spec=None):
        table = np.asarray(table)
        if table.shape != (lattice.n, lattice.n):
            raise LatticeError("operation table has the wrong shape")
        if table.min() < 0 or table.max() >= lattice.n:
            raise LatticeError("operation table has out-of-range entries")
        self.lattice = lattice
        self.table = table.astype(np.intp)
        self.table.setflags(write=False)
        self.name = name
        self.spec = spec

    def __call__(self, P, Q):
        L = self.lattice
        return int(self.table[L.index(P), L.index(Q)])

    def __eq__(self, other):
        if not isinstance(other, BinaryOperation):
            return NotImplemented
        return self.lattice == other.lattice and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.lattice.fingerprint, self.table.tobytes()))

    def __repr__(self):
        return f"BinaryOperation({self.name})"

    def key(self):
        return self.table.tobytes()


def tabulated(L, fn, name="tabulated"):
    """Tabulate a python function on element indices."""
    t = np.array([[fn(p, q) for q in range(L.n)] for p in range(L.n)], dtype=np.intp)
    return BinaryOperation(L, t, name)


def constant(L, value, name=None):
    v = L.index(value)
    return BinaryOperation(L, np.full((L.n, L.n), v), name or f"const({L.label(v)})")


def _grids(L):
    idx = np.arange(L.n)
    P = np.broadcast_to(idx[:, None], (L.n, L.n))
    Q = np.broadcast_to(idx[None, :], (L.n, L.n))
    return P, Q


def commutator_table(L):
    """Marsden commutator of every pair."""
    P, Q = _grids(L)
    m, j, o = L.meet_table.astype(np.intp), L.join_table.astype(np.intp), L.ortho.astype(np.intp)
    a = j[m[P, Q], m[P, o[Q]]]
    b = j[m[o[P], Q], m[o[P], o[Q]]]
    return j[a, b]


def kotas_table(L, spec):
    P, Q = _grids(L)
    m, j, o = L.meet_table.astype(np.intp), L.join_table.astype(np.intp), L.ortho.astype(np.intp)
    acc = np.full((L.n, L.n), L.bottom, dtype=np.intp)
    for bit, (x, y) in zip(spec[:4], ((P, Q), (P, o[Q]), (o[P], Q), (o[P], o[Q]))):
        if bit:
            acc = j[acc, m[x, y]]
    eps = {"0": np.full_like(P, L.bottom), "1": np.full_like(P, L.top),
           "P": P, "P'": o[P], "Q": Q, "Q'": o[Q]}[spec.eps]
    noncom = o[commutator_table(L)]
    return j[acc, m[eps, noncom]]


def kotas_operation(L, spec, name=None):
    spec = KotasSpec(*spec)
    if spec.eps not in EPSILONS:
        raise ValueError(f"epsilon must be one of {EPSILONS}")
    return BinaryOperation(L, kotas_table(L, spec), name or str(spec), spec)


def eval_kotas(L, spec, P, Q):
    """Value of a Kotas canonical form at one pair."""
    P, Q = L.index(P), L.index(Q)
    spec = KotasSpec(*spec)
    m, o = L.meet, L.perp
    terms = [m(x, y) for bit, (x, y) in zip(
        spec[:4], ((P, Q), (P, o(Q)), (o(P), Q), (o(P), o(Q)))) if bit]
    eps = {"0": L.bottom, "1": L.top, "P": P, "P'": o(P), "Q": Q, "Q'": o(Q)}[spec.eps]
    com = L.join_all([m(P, Q), m(P, o(Q)), m(o(P), Q), m(o(P), o(Q))])
    return L.join_all(terms + [m(eps, o(com))])


def implication_j(L, j):
    return kotas_operation(L, implication_spec(j), f"->{j}")


def conjunction_j(L, j):
    return kotas_operation(L, conjunction_spec(j), f"*{j}")


def explicit_implication(L, j):
    """The six implications written as plain ortholattice terms."""
    _check_j(j)
    m, v, o = L.meet, L.join, L.perp

    def f(P, Q):
        if j == 0:
            return v(v(m(o(P), o(Q)), m(o(P), Q)), m(P, Q))
        if j == 1:
            return v(v(m(o(P), o(Q)), m(o(P), Q)), m(P, v(o(P), Q)))
        if j == 2:
            return v(m(o(P), o(Q)), Q)
        if j == 3:
            return v(o(P), m(P, Q))
        if j == 4:
            return v(v(m(v(o(P), Q), o(Q)), m(o(P), Q)), m(P, Q))
        return v(o(P), Q)

    return tabulated(L, f, f"->{j}")


def sasaki_projection(L):
    return tabulated(L, lambda P, Q: L.meet(P, L.join(L.perp(P), Q)), "sasaki")


def dual_conjunction(op, name=None):
    """P * Q = (P -> Q')'. Applying it twice gives back the original table."""
    o = op.lattice.ortho.astype(np.intp)
    t = o[op.table[:, o]]
    if name is None:
        name = f"dual({op.name})"
        if op.name.startswith("dual(") and op.name.endswith(")"):
            name = op.name[5:-1]
        elif op.name.startswith("->"):
            name = "*" + op.name[2:]
        elif op.name.startswith("*"):
            name = "->" + op.name[1:]
    return BinaryOperation(op.lattice, t, name)


def zero_indicator(L):
    """f(P,Q) = 1 if P = 0 else 0: stays in {P,Q}^!! but does not respect cuts."""
    return tabulated(L, lambda P, Q: L.top if P == L.bottom else L.bottom, "zero-indicator")


# checks


class CheckResult:
    def __init__(self, name, holds, witness=None, lattice=None, detail=""):
        self.name = name
        self.holds = holds
        self.witness = witness
        self.lattice = lattice
        self.detail = detail

    def __bool__(self):
        return bool(self.holds)

    def witness_labels(self):
        if self.witness is None or self.lattice is None:
            return None
        return tuple(self.lattice.label(w) for w in self.witness)

    def __repr__(self):
        if self.holds:
            return f"{self.name}: pass"
        return f"{self.name}: fail at {self.witness_labels()} {self.detail}".rstrip()


def _first(mask):
    hit = np.argwhere(mask)
    return tuple(int(x) for x in hit[0]) if len(hit) else None


def check_local(op):
    """(L1) f(P,Q) in {P,Q}^!! for all pairs; (L2) f(P,Q)^E = f(P^E,Q^E)^E
    for every E commuting with both P and Q."""
    L = op.lattice
    T = op.table
    l1 = CheckResult("L1", True, lattice=L)
    for P in range(L.n):
        for Q in range(L.n):
            if int(T[P, Q]) not in generated_sublogic(L, [P, Q]):
                l1 = CheckResult("L1", False, (P, Q), L, f"value {L.label(T[P, Q])}")
                break
        if not l1:
            break
    l2 = CheckResult("L2", True, lattice=L)
    C = L.commute_matrix
    m = L.meet_table.astype(np.intp)
    for E in range(L.n):
        ok = C[:, E][:, None] & C[:, E][None, :]
        PE, QE = m[:, E], m[:, E]
        lhs = m[T, E]
        rhs = m[T[PE[:, None], QE[None, :]], E]
        bad = ok & (lhs != rhs)
        w = _first(bad)
        if w is not None:
            l2 = CheckResult("L2", False, (w[0], w[1], E), L,
                             f"{L.label(lhs[w])} != {L.label(rhs[w])}")
            break
    return {"L1": l1, "L2": l2}


def check_conditions(op):
    """Exhaustive check of (LB), (E), (MP), (MT), (NG) and (GC)."""
    L = op.lattice
    T = op.table
    P, Q = _grids(L)
    m, j, o = L.meet_table.astype(np.intp), L.join_table.astype(np.intp), L.ortho.astype(np.intp)
    leq = L.leq
    C = L.commute_matrix
    out = {}

    def record(name, bad):
        w = _first(bad)
        out[name] = CheckResult(name, w is None, w, L)

    record("LB", C & (T != j[o[P], Q]))
    record("E", (T == L.top) != leq)
    record("MP", ~leq[m[P, T], Q])
    record("MT", ~leq[m[o[Q], T], o[P]])
    record("NG", ~leq[m[P, o[Q]], o[T]])
    record("GC", C & (T != m[P, Q]))
    return out


def is_material(op):
    c = check_conditions(op)
    return all(c[k].holds for k in ("E", "MP", "MT", "NG"))


def b_part(L, P, Q, X):
    """X ^ com(P,Q), for X in the sublogic generated by P and Q."""
    return _part(L, P, Q, X, boolean=True)


def n_part(L, P, Q, X):
    """X ^ com(P,Q)'."""
    return _part(L, P, Q, X, boolean=False)


def _part(L, P, Q, X, boolean):
    from .oml_core import commutator_pair
    P, Q, X = L.index(P), L.index(Q), L.index(X)
    if X not in generated_sublogic(L, [P, Q]):
        raise LatticeError(f"{L.label(X)} is not in the sublogic generated by "
                           f"{L.label(P)}, {L.label(Q)}")
    E = commutator_pair(L, P, Q)
    return L.meet(X, E if boolean else L.perp(E))


def census_polynomials(L, mode="auto"):
    """Number of distinct operations among the 96 Kotas forms.

    ``mode="tables"`` compares whole tables. ``mode="auto"`` does the same
    except on extremely noncommutative non-Boolean logics, where it compares
    values on noncommuting pairs only (there the forms reduce to the six
    monomials e).
    """
    from .oml_core import is_boolean, is_extremely_noncommutative
    if mode not in ("auto", "tables"):
        raise ValueError(f"unknown census mode {mode!r}")
    tables = [kotas_table(L, s) for s in ALL_SPECS]
    if mode == "auto" and not is_boolean(L) and is_extremely_noncommutative(L):
        mask = ~L.commute_matrix
        keys = {t[mask].tobytes() for t in tables}
    else:
        keys = {t.tobytes() for t in tables}
    return len(keys)


# Boolean polynomials for check_quantization


class BoolPoly:
    """A two-variable term over &, |, ' (postfix) and 0, 1, P, Q.

    >>> BoolPoly("P' | Q").truth(True, False)
    False
    """

    def __init__(self, text):
        self.text = text
        self._toks = [c for c in text if not c.isspace()]
        self._pos = 0
        self.ast = self._or()
        if self._pos != len(self._toks):
            raise ValueError(f"trailing input in Boolean polynomial {text!r}")

    def _peek(self):
        return self._toks[self._pos] if self._pos < len(self._toks) else None

    def _take(self):
        t = self._peek()
        self._pos += 1
        return t

    def _or(self):
        node = self._and()
        while self._peek() == "|":
            self._take()
            node = ("or", node, self._and())
        return node

    def _and(self):
        node = self._post()
        while self._peek() == "&":
            self._take()
            node = ("and", node, self._post())
        return node

    def _post(self):
        t = self._take()
        if t == "(":
            node = self._or()
            if self._take() != ")":
                raise ValueError(f"unbalanced parentheses in {self.text!r}")
        elif t in ("P", "Q", "0", "1"):
            node = t
        else:
            raise ValueError(f"unexpected {t!r} in Boolean polynomial {self.text!r}")
        while self._peek() in ("'", "⊥"):
            self._take()
            node = ("not", node)
        return node

    def _eval(self, node, env, ops):
        if isinstance(node, str):
            return env[node]
        tag = node[0]
        if tag == "not":
            return ops["not"](self._eval(node[1], env, ops))
        return ops[tag](self._eval(node[1], env, ops), self._eval(node[2], env, ops))

    def truth(self, p, q):
        ops = {"not": lambda a: not a, "and": lambda a, b: a and b, "or": lambda a, b: a or b}
        return self._eval(self.ast, {"P": p, "Q": q, "0": False, "1": True}, ops)

    def on_lattice(self, L, P, Q):
        ops = {"not": L.perp, "and": L.meet, "or": L.join}
        return self._eval(self.ast, {"P": P, "Q": Q, "0": L.bottom, "1": L.top}, ops)

    def dnf_bits(self):
        """Truth values at (1,1), (1,0), (0,1), (0,0): the disjunctive normal form."""
        return tuple(self.truth(p, q) for p, q in ((1, 1), (1, 0), (0, 1), (0, 0)))

    def dnf_on_lattice(self, L, P, Q):
        o = L.perp
        terms = [L.meet(x, y) for bit, (x, y) in zip(
            self.dnf_bits(), ((P, Q), (P, o(Q)), (o(P), Q), (o(P), o(Q)))) if bit]
        return L.join_all(terms)


def check_quantization(op, b):
    """True iff op agrees with the Boolean polynomial b on commuting pairs.

    Also checks the equivalent form f(P,Q)_B = b_n(P,Q) on all pairs and
    raises if the two criteria ever disagree.
    """
    if isinstance(b, str):
        b = BoolPoly(b)
    L = op.lattice
    C = L.commute_matrix
    com = commutator_table(L)
    witness = None
    b_crit = True
    for P in range(L.n):
        for Q in range(L.n):
            if C[P, Q] and int(op.table[P, Q]) != b.on_lattice(L, P, Q) and witness is None:
                witness = (P, Q)
            if L.meet(int(op.table[P, Q]), int(com[P, Q])) != b.dnf_on_lattice(L, P, Q):
                b_crit = False
    holds = witness is None
    if holds != b_crit:
        raise LatticeError("commuting-pair and Boolean-part criteria disagree")
    return CheckResult(f"quantizes {b.text}", holds, witness, L)


def require_same_lattice(*ops):
    fps = {op.lattice.fingerprint for op in ops}
    if len(fps) > 1:
        raise LatticeMismatchError("operations live on different lattices")
