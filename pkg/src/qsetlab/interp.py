"""Truth values in V^(Q) under an interpretation I(->, *).

The evaluator runs a whole bank of interpretations on one lattice at once:
every truth value is a numpy vector with one lattice element per
interpretation, and operation tables are stacked so a single fancy-index
applies all of them.
"""

import numpy as np

from . import formula as fm
from . import logical_ops as lops
from .oml_core import LatticeError, LatticeMismatchError, commutant, commutes, \
    is_boolean, subset_lattice
from .quniverse import QSetError, joint_support, p_tilde, qset, restrict, zero_check


class Interpretation:
    """A pair (->, *) on one lattice; normality and self-duality are
    computed from the tables."""

    def __init__(self, imp, conj, name=None):
        lops.require_same_lattice(imp, conj)
        self.lattice = imp.lattice
        self.imp = imp
        self.conj = conj
        self.name = name or f"I({imp.name},{conj.name})"
        ci, cc = lops.check_conditions(imp), lops.check_conditions(conj)
        self.normal = bool(ci["LB"].holds and cc["GC"].holds)
        self.self_dual = lops.dual_conjunction(imp) == conj

    def __repr__(self):
        return self.name

    @property
    def ident(self):
        return self.name

    def fingerprint(self):
        return (self.imp.key(), self.conj.key())


def standard(L, j, k):
    return Interpretation(lops.implication_j(L, j), lops.conjunction_j(L, k), f"{j},{k}")


def all_standard(L):
    return [standard(L, j, k) for j in range(6) for k in range(6)]


def parse_interp_id(L, text):
    """`j,k`, `sasaki` (3,3) or `takeuti` (3,5)."""
    aliases = {"sasaki": "3,3", "takeuti": "3,5"}
    t = aliases.get(text.strip().lower(), text.strip())
    try:
        j, k = (int(x) for x in t.split(","))
    except ValueError:
        raise ValueError(f"bad interpretation id {text!r}; expected j,k") from None
    if j not in range(6) or k not in range(6):
        raise ValueError("interpretation indices must be in 0..5")
    return standard(L, j, k)


def star_join(L):
    """I(->3, v): the conjunction slot filled with plain join."""
    join = lops.BinaryOperation(L, L.join_table, "join")
    return Interpretation(lops.implication_j(L, 3), join, "3,join")


def const_imp(L):
    """I(1, *3): the implication slot filled with the constant 1."""
    return Interpretation(lops.constant(L, L.top, "const1"), lops.conjunction_j(L, 3), "const1,3")


class Evaluator:
    """Evaluates formulas for a bank of interpretations on one lattice."""

    def __init__(self, interps, memo=True):
        interps = list(interps)
        if not interps:
            raise ValueError("need at least one interpretation")
        L = interps[0].lattice
        for it in interps:
            if it.lattice != L:
                raise LatticeMismatchError("interpretations on different lattices")
        self.lattice = L
        self.interps = interps
        self.m = len(interps)
        self.r = np.arange(self.m)
        self.IMP = np.stack([it.imp.table for it in interps])
        self.CONJ = np.stack([it.conj.table for it in interps])
        self.MEET = L.meet_table.astype(np.intp)
        self.JOIN = L.join_table.astype(np.intp)
        self.ORTHO = L.ortho.astype(np.intp)
        self.TOP = np.full(self.m, L.top, dtype=np.intp)
        self.BOT = np.full(self.m, L.bottom, dtype=np.intp)
        self.memo = {} if memo else None

    # atomic relations, mutually recursive on rank(u) + rank(v)

    def eq(self, u, v):
        if u is v:
            # still computed: reflexivity is not assumed for arbitrary ops
            pass
        key = ("=", min(u.uid, v.uid), max(u.uid, v.uid))
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        acc = self.TOP
        for c, w in u.dom:
            acc = self.MEET[acc, self.IMP[self.r, w, self.mem(c, v)]]
        for c, w in v.dom:
            acc = self.MEET[acc, self.IMP[self.r, w, self.mem(c, u)]]
        if self.memo is not None:
            self.memo[key] = acc
        return acc

    def mem(self, u, v):
        key = ("in", u.uid, v.uid)
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        acc = self.BOT
        for c, w in v.dom:
            acc = self.JOIN[acc, self.CONJ[self.r, w, self.eq(c, u)]]
        if self.memo is not None:
            self.memo[key] = acc
        return acc

    def subseteq(self, u, v):
        acc = self.TOP
        for c, w in u.dom:
            acc = self.MEET[acc, self.IMP[self.r, w, self.mem(c, v)]]
        return acc

    # formulas

    def evaluate(self, f, env, desugared=False):
        """Vector of truth values, one per interpretation."""
        if not desugared:
            f = fm.desugar(f)
        for name in fm.constants_of(f):
            if name not in env:
                raise fm.UnboundVariableError(f"constant {name!r} is not bound")
            if env[name].lattice != self.lattice:
                raise LatticeMismatchError(f"constant {name!r} lives on another lattice")
        return self._go(f, env, {})

    def _term(self, t, env, local):
        if isinstance(t, fm.Var):
            return local[t.name]
        return env[t.name]

    def _go(self, f, env, local):
        if isinstance(f, fm.Eq):
            return self.eq(self._term(f.left, env, local), self._term(f.right, env, local))
        if isinstance(f, fm.In):
            return self.mem(self._term(f.left, env, local), self._term(f.right, env, local))
        if isinstance(f, fm.Not):
            return self.ORTHO[self._go(f.body, env, local)]
        if isinstance(f, fm.And):
            return self.MEET[self._go(f.left, env, local), self._go(f.right, env, local)]
        if isinstance(f, fm.Or):
            return self.JOIN[self._go(f.left, env, local), self._go(f.right, env, local)]
        if isinstance(f, fm.Imp):
            a = self._go(f.left, env, local)
            return self.IMP[self.r, a, self._go(f.right, env, local)]
        if isinstance(f, fm.ForallIn):
            u = self._term(f.bound, env, local)
            acc = self.TOP
            for c, w in u.dom:
                val = self._go(f.body, env, {**local, f.var: c})
                acc = self.MEET[acc, self.IMP[self.r, w, val]]
            return acc
        if isinstance(f, fm.ExistsIn):
            u = self._term(f.bound, env, local)
            acc = self.BOT
            for c, w in u.dom:
                val = self._go(f.body, env, {**local, f.var: c})
                acc = self.JOIN[acc, self.CONJ[self.r, w, val]]
            return acc
        if isinstance(f, fm.UNBOUNDED):
            raise fm.UnsupportedConstruct("unbounded quantifiers are not evaluated")
        if isinstance(f, (fm.Iff, fm.Subseteq)):
            return self._go(fm.desugar(f), env, local)
        raise TypeError(f"not a formula: {f!r}")


def _as_formula(f):
    return fm.parse(f) if isinstance(f, str) else f


def truth_value(interp, f, env):
    """The element [[f]] under one interpretation."""
    return int(Evaluator([interp]).evaluate(_as_formula(f), env)[0])


def _natural_key(name):
    import re
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def bind_args(f, args):
    """Map a sequence of QSets onto the formula's constants in natural order."""
    if isinstance(args, dict):
        return dict(args)
    names = sorted(fm.constants_of(f), key=_natural_key)
    args = list(args)
    if len(args) != len(names):
        raise ValueError(f"formula has constants {names} but {len(args)} arguments were given")
    return dict(zip(names, args))


def args_commutator(L, args):
    from .quniverse import set_commutator
    args = list(args)
    if not args:
        return L.top
    return set_commutator(args)


class TransferResult:
    def __init__(self, lattice, interp, lhs, bound):
        self.lattice = lattice
        self.interp = interp
        self.lhs = lhs
        self.bound = bound
        L = lattice
        self.passed = L.le(bound, lhs) and (bound != L.top or lhs == L.top)

    def __bool__(self):
        return self.passed

    def __repr__(self):
        L = self.lattice
        return (f"TransferResult({self.interp}: lhs={L.label(self.lhs)}, "
                f"bound={L.label(self.bound)}, {'pass' if self.passed else 'FAIL'})")


def transfer_check(interp, f, args):
    """[[f(args)]] >= com(args); and = 1 when the commutator is 1."""
    f = _as_formula(f)
    env = bind_args(f, args)
    L = interp.lattice
    lhs = truth_value(interp, f, env)
    bound = args_commutator(L, env.values())
    return TransferResult(L, interp, lhs, bound)


class DeMorganResult:
    def __init__(self, lattice, forall_side, exists_side, laws):
        self.lattice = lattice
        self.forall_side = forall_side
        self.exists_side = exists_side
        self.laws = laws
        self.passed = laws["M5"] and laws["M6"]

    def __bool__(self):
        return self.passed

    def __repr__(self):
        L = self.lattice
        flags = " ".join(f"{k}={'ok' if v else 'x'}" for k, v in sorted(self.laws.items()))
        return (f"DeMorganResult(not-forall={L.label(self.forall_side)}, "
                f"exists-not={L.label(self.exists_side)}, {flags})")


def de_morgan_vectors(ev, f, u, env=None, var="x"):
    """All De Morgan laws for the family phi(u'), u' in dom(u).

    Returns (not_forall, exists_not, laws) with vectors over ev's bank.
    M3/M4 are the lattice-level sup/inf dualities over that finite family.
    """
    env = dict(env or {})
    f = fm.desugar(_as_formula(f))
    vals, weights = [], []
    for c, w in u.dom:
        vals.append(ev.evaluate(f, {**env, var: c}, desugared=True))
        weights.append(w)
    M, J, O, r = ev.MEET, ev.JOIN, ev.ORTHO, ev.r
    forall = ev.TOP
    exists_not = ev.BOT
    exists = ev.BOT
    forall_not = ev.TOP
    for w, v in zip(weights, vals):
        forall = M[forall, ev.IMP[r, w, v]]
        exists_not = J[exists_not, ev.CONJ[r, w, O[v]]]
        exists = J[exists, ev.CONJ[r, w, v]]
        forall_not = M[forall_not, ev.IMP[r, w, O[v]]]
    laws = {"M5": O[forall] == exists_not, "M6": O[exists] == forall_not}
    fam = vals + [ev.evaluate(f, {**env, var: u}, desugared=True)]
    m1 = m2 = np.ones(ev.m, dtype=bool)
    for a in fam:
        for b in fam:
            m1 = m1 & (O[M[a, b]] == J[O[a], O[b]])
            m2 = m2 & (O[J[a, b]] == M[O[a], O[b]])
    inf, sup = ev.TOP, ev.BOT
    inf_neg, sup_neg = ev.TOP, ev.BOT
    for a in fam:
        inf, sup = M[inf, a], J[sup, a]
        inf_neg, sup_neg = M[inf_neg, O[a]], J[sup_neg, O[a]]
    laws.update({"M1": m1, "M2": m2, "M3": O[inf] == sup_neg, "M4": O[sup] == inf_neg})
    return O[forall], exists_not, laws


def de_morgan_check(interp, f, u, env=None, var="x"):
    """(M5) [[!(A x in u . f)]] = [[E x in u . !f]] and (M6) its dual;
    (M1)-(M4) are reported as well."""
    ev = Evaluator([interp])
    nf, en, laws = de_morgan_vectors(ev, f, u, env, var)
    return DeMorganResult(interp.lattice, int(nf[0]), int(en[0]),
                          {k: bool(v[0]) for k, v in laws.items()})


class NoCounterexample(LatticeError):
    pass


class TakeutiReport:
    def __init__(self, lattice, P0, Q0, E, P, Q, result):
        self.lattice, self.P0, self.Q0, self.E, self.P, self.Q = lattice, P0, Q0, E, P, Q
        self.result = result
        self.exists_side = result.exists_side
        self.forall_side = result.forall_side
        self.ok = result.exists_side == lattice.bottom and result.forall_side == P \
            and P != lattice.bottom

    def lines(self):
        L = self.lattice
        return [
            f"lattice: {L.fingerprint}",
            "interpretation: 3,5",
            f"P0: {L.label(self.P0)}",
            f"Q0: {L.label(self.Q0)}",
            f"E: {L.label(self.E)}",
            f"P: {L.label(self.P)}",
            f"Q: {L.label(self.Q)}",
            "formula: !(x in Q~) over u = P~",
            f"exists-side: {L.label(self.exists_side)}",
            f"forall-negation-side: {L.label(self.forall_side)}",
            f"pass: {str(self.ok).lower()}",
        ]


def takeuti_counterexample(L, P0=None, Q0=None):
    """De Morgan failure of I(->3, *5): with u = P~ and phi(x) = !(x in Q~),
    E x in u . !phi has value 0 while !(A x in u . phi) has value P."""
    if P0 is None or Q0 is None:
        if is_boolean(L):
            raise NoCounterexample("every pair commutes in a Boolean logic")
        C = L.commute_matrix
        hit = np.argwhere(~C)
        P0, Q0 = (int(x) for x in hit[0])
    P0, Q0 = L.index(P0), L.index(Q0)
    if commutes(L, P0, Q0):
        raise NoCounterexample("P0 and Q0 commute")
    from .oml_core import commutator_pair
    E = L.perp(commutator_pair(L, P0, Q0))
    P, Q = L.meet(P0, E), L.meet(Q0, E)
    interp = standard(L, 3, 5)
    res = de_morgan_check(interp, "!(x in q)", p_tilde(L, P), env={"q": p_tilde(L, Q)})
    return TakeutiReport(L, P0, Q0, E, P, Q, res)


def absoluteness_check(interp, f, args, R):
    """[[f]] computed inside the sublogic R equals [[f]] in the whole lattice."""
    f = _as_formula(f)
    env = bind_args(f, args)
    L = interp.lattice
    R = sorted(set(L.index(x) for x in R))
    Rs = set(R)
    for name, u in env.items():
        if not u.support_set() <= Rs:
            raise QSetError(f"support of {name} is not inside R")
    sub = subset_lattice(L, R)
    to_sub = {x: k for k, x in enumerate(R)}
    tables = []
    for op in (interp.imp, interp.conj):
        t = op.table[np.ix_(R, R)]
        if not set(np.unique(t).tolist()) <= Rs:
            raise LatticeError(f"{op.name} does not preserve R")
        tables.append(lops.BinaryOperation(sub, np.vectorize(to_sub.__getitem__)(t), op.name))
    sub_interp = Interpretation(tables[0], tables[1], interp.name + "|R")
    sub_env = {k: u.map_lattice(to_sub, sub) for k, u in env.items()}
    inner = R[truth_value(sub_interp, f, sub_env)]
    outer = truth_value(interp, f, env)
    return inner == outer, outer, inner


def restriction_check(interp, f, args, p):
    """[[f(args)]] ^ p = [[f(args|p)]] ^ p for p commuting with all supports."""
    f = _as_formula(f)
    env = bind_args(f, args)
    L = interp.lattice
    p = L.index(p)
    if not interp.normal:
        raise ValueError("restriction principle is stated for normal interpretations")
    if p not in commutant(L, joint_support(env.values()) if env else []):
        raise LatticeError(f"{L.label(p)} does not commute with the supports")
    lhs = L.meet(truth_value(interp, f, env), p)
    rhs = L.meet(truth_value(interp, f, {k: restrict(u, p) for k, u in env.items()}), p)
    return lhs == rhs, lhs, rhs


SUBSET_DISCRIMINATOR = "p sub q"
MEMBER_DISCRIMINATOR = "r in p"


class Census:
    def __init__(self, lattice, interps, keys, sub_vals, mem_vals):
        self.lattice = lattice
        self.interps = interps
        self.keys = keys
        self.sub_vals = sub_vals
        self.mem_vals = mem_vals
        self.distinct = len(set(keys))
        sd = [k for it, k in zip(interps, keys) if it.self_dual]
        self.self_dual = [it.name for it in interps if it.self_dual]
        self.self_dual_distinct = len(set(sd))
        self.table_distinct = len({it.fingerprint() for it in interps})

    @property
    def normal_count(self):
        return self.distinct

    @property
    def self_dual_count(self):
        return self.self_dual_distinct


def interpretation_census(L, interps=None):
    """Tell the 36 standard interpretations apart by [[P~ sub Q~]] and
    [[(Q')~ in P~]] over all pairs (P, Q)."""
    interps = interps or all_standard(L)
    ev = Evaluator(interps)
    fsub = fm.parse(SUBSET_DISCRIMINATOR)
    fmem = fm.parse(MEMBER_DISCRIMINATOR)
    tildes = [p_tilde(L, x) for x in range(L.n)]
    sub_vals = np.empty((L.n, L.n, len(interps)), dtype=np.intp)
    mem_vals = np.empty((L.n, L.n, len(interps)), dtype=np.intp)
    for P in range(L.n):
        for Q in range(L.n):
            sub_vals[P, Q] = ev.evaluate(fsub, {"p": tildes[P], "q": tildes[Q]})
            mem_vals[P, Q] = ev.evaluate(fmem, {"p": tildes[P], "r": tildes[L.perp(Q)]})
    keys = [sub_vals[:, :, i].tobytes() + mem_vals[:, :, i].tobytes() for i in range(len(interps))]
    return Census(L, interps, keys, sub_vals, mem_vals)


COLLAPSE_FORMULA = "z in x <-> ((z in x & z in y) | (z in x & !(z in y)))"


def boolean_collapse_check(L, interp):
    """For a non-Boolean L, find noncommuting P, Q with the ZFC-valid
    distribution instance below 1 at (0-check, P~, Q~). Returns
    (vacuous, witness) where witness is (P, Q, value) or None."""
    if is_boolean(L):
        return True, None
    if not interp.normal:
        raise ValueError("collapse argument assumes a normal interpretation")
    f = fm.parse(COLLAPSE_FORMULA)
    z = zero_check(L)
    for P, Q in np.argwhere(~L.commute_matrix):
        val = truth_value(interp, f, {"z": z, "x": p_tilde(L, int(P)), "y": p_tilde(L, int(Q))})
        if val != L.top:
            return False, (int(P), int(Q), val)
    return False, None


# Instances used to show that non-normal interpretations break transfer.
DUALITY_FORMULA = "x1 in x2 <-> !(A y in x2 . !(y = x1))"
NEGATION_FORMULA = "((x1 in x2) -> !(x3 = x3)) <-> !(x1 in x2)"


def non_normal_transfer_failure(L):
    """Evaluate the two shipped non-normal interpretations on the instances
    that expose them. Returns a list of (interp, formula, args, TransferResult)."""
    out = []
    zero = zero_check(L)
    one = qset(L, [(zero, L.top)])
    it = star_join(L)
    for P in range(L.n):
        for Q in range(L.n):
            r = transfer_check(it, DUALITY_FORMULA, [p_tilde(L, P), p_tilde(L, Q)])
            if not r:
                out.append((it, DUALITY_FORMULA, (p_tilde(L, P), p_tilde(L, Q)), r))
                break
        if out:
            break
    it = const_imp(L)
    args = (zero, one, zero)
    r = transfer_check(it, NEGATION_FORMULA, args)
    if not r:
        out.append((it, NEGATION_FORMULA, args, r))
    return out
