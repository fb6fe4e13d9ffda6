"""The bounded-rank fragment of V^(Q).

A QSet is a finite map from child QSets to lattice elements. Nodes are
hash-consed per lattice, so structural equality is object identity.
"""

import hashlib
import itertools
import re
import threading
import weakref

import numpy as np

from .oml_core import ElementSet, LatticeError, LatticeMismatchError, commutator_set, \
    generated_sublogic

MAX_HF_DEPTH = 6


class QSetError(ValueError):
    pass


_store = weakref.WeakValueDictionary()
_store_lock = threading.Lock()
_uids = itertools.count()


class QSet:
    """Use :func:`qset` (or the other constructors) rather than calling this."""

    __slots__ = ("lattice", "dom", "rank", "digest", "uid", "_support", "_weights",
                 "_restricted", "__weakref__")

    def __init__(self, lattice, dom, digest):
        self.lattice = lattice
        self.dom = dom
        self.digest = digest
        self.uid = next(_uids)
        self.rank = max((c.rank + 1 for c, _ in dom), default=0)
        self._support = None
        self._weights = {c.uid: w for c, w in dom}
        self._restricted = {}

    def __repr__(self):
        return to_literal(self)

    def __len__(self):
        return len(self.dom)

    def children(self):
        return [c for c, _ in self.dom]

    def weight(self, x):
        """u(x); raises KeyError for x outside dom(u)."""
        return self._weights[x.uid]

    def __contains__(self, x):
        return isinstance(x, QSet) and x.uid in self._weights

    @property
    def support(self):
        """L(u): child supports, the weights, and 0."""
        if self._support is None:
            s = {self.lattice.bottom}
            for c, w in self.dom:
                s.add(w)
                s |= c.support_set()
            self._support = frozenset(s)
        return ElementSet(self.lattice, self._support)

    def support_set(self):
        self.support
        return self._support

    def map_lattice(self, mapping, lattice):
        """Re-root into another lattice through an index map (e.g. into a sublogic)."""
        memo = {}

        def go(u):
            if u.uid not in memo:
                memo[u.uid] = qset(lattice, [(go(c), mapping[w]) for c, w in u.dom])
            return memo[u.uid]

        try:
            return go(self)
        except KeyError as e:
            raise QSetError(f"support element {e} has no image under the map") from None


def qset(L, pairs):
    """Build (or fetch) the node {<x, w>, ...}; children must be distinct."""
    items = {}
    for child, w in pairs:
        if not isinstance(child, QSet):
            raise QSetError("children must be QSets")
        if child.lattice != L:
            raise LatticeMismatchError("child lives on another lattice")
        w = L.index(w)
        if child.uid in items:
            raise QSetError("duplicate child in dom")
        items[child.uid] = (child, w)
    return _intern(L, list(items.values()))


def _intern(L, items):
    dom = tuple(sorted(items, key=lambda cw: cw[0].digest))
    key = (L.fingerprint, frozenset((c.uid, w) for c, w in dom))
    with _store_lock:
        node = _store.get(key)
        if node is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(L.fingerprint.encode())
            for c, w in dom:
                h.update(c.digest)
                h.update(w.to_bytes(4, "little"))
            node = QSet(L, dom, h.digest())
            _store[key] = node
    return node


def _merge_pairs(L, pairs):
    """Set union of pairs: identical pairs collapse, conflicting weights raise."""
    items = {}
    for c, w in pairs:
        if c.uid in items and items[c.uid][1] != w:
            raise QSetError("pair set is not a function: child has two weights")
        items[c.uid] = (c, w)
    return _intern(L, list(items.values()))


# hereditarily finite sets


def hf(x):
    """Normalise nested lists/tuples/sets and naturals (von Neumann) to frozensets."""
    if isinstance(x, bool):
        raise TypeError("booleans are not sets")
    if isinstance(x, int):
        if x < 0:
            raise ValueError("naturals only")
        out = frozenset()
        for _ in range(x):
            out = out | {out}
        return out
    if isinstance(x, (list, tuple, set, frozenset)):
        return frozenset(hf(y) for y in x)
    raise TypeError(f"not a hereditarily finite set literal: {x!r}")


def hf_rank(x):
    return max((hf_rank(y) + 1 for y in x), default=0)


def hf_depth(x):
    return hf_rank(x)


def hf_str(x):
    if not x:
        return "{}"
    return "{" + ", ".join(sorted(hf_str(y) for y in x)) + "}"


def parse_hf(text):
    """Parse '{ {}, {{}} }' or a natural number."""
    text = text.strip()
    if text.isdigit():
        return hf(int(text))
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def item():
        nonlocal pos
        skip()
        if pos < len(text) and text[pos].isdigit():
            m = re.match(r"\d+", text[pos:])
            pos += m.end()
            return hf(int(m.group()))
        if pos >= len(text) or text[pos] != "{":
            raise QSetError(f"expected '{{' at offset {pos} in {text!r}")
        pos += 1
        elems = []
        skip()
        if pos < len(text) and text[pos] == "}":
            pos += 1
            return frozenset()
        while True:
            elems.append(item())
            skip()
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == "}":
                pos += 1
                return frozenset(elems)
            raise QSetError(f"expected ',' or '}}' at offset {pos} in {text!r}")

    out = item()
    skip()
    if pos != len(text):
        raise QSetError(f"trailing input in set literal {text!r}")
    return out


def check_embed(L, v, _depth=0):
    """v-check: every element embedded with weight 1."""
    v = hf(v) if not isinstance(v, frozenset) else v
    if _depth == 0 and hf_rank(v) > MAX_HF_DEPTH:
        raise QSetError(f"set literal deeper than {MAX_HF_DEPTH}")
    return qset(L, [(check_embed(L, y, _depth + 1), L.top) for y in v])


def zero_check(L):
    return qset(L, [])


def p_tilde(L, P):
    """P-tilde = {<0-check, P>}."""
    return qset(L, [(zero_check(L), P)])


def support(u):
    return u.support


def joint_support(us):
    us = list(us)
    if not us:
        raise QSetError("need at least one QSet")
    L = us[0].lattice
    s = set()
    for u in us:
        if u.lattice != L:
            raise LatticeMismatchError("QSets live on different lattices")
        s |= u.support_set()
    return ElementSet(L, s)


def set_commutator(us):
    """com(L(u1) u ... u L(un))."""
    us = list(us)
    S = joint_support(us)
    return commutator_set(S.lattice, S)


def generated_logic(us):
    S = joint_support(us)
    return generated_sublogic(S.lattice, S)


def restrict(u, p):
    """u|p = {<x|p, u(x) ^ p>} u {<u, 0>}."""
    L = u.lattice
    p = L.index(p)
    hit = u._restricted.get(p)
    if hit is not None:
        return hit
    pairs = [(restrict(c, p), L.meet(w, p)) for c, w in u.dom]
    pairs.append((u, L.bottom))
    out = _merge_pairs(L, pairs)
    u._restricted[p] = out
    return out


def postorder(u):
    """Every node reachable from u, children before parents, each once."""
    seen, out = set(), []

    def go(x):
        if x.uid in seen:
            return
        seen.add(x.uid)
        for c in x.children():
            go(c)
        out.append(x)

    go(u)
    return out


def fold(u, fn):
    """Well-founded recursion: fn(node, {child uid: value}) evaluated bottom-up."""
    vals = {}
    for x in postorder(u):
        vals[x.uid] = fn(x, {c.uid: vals[c.uid] for c in x.children()})
    return vals[u.uid]


def in_sublogic(u, R):
    """u belongs to V^(R) iff its support lies in R."""
    return u.support_set() <= set(R)


# quantum subsets of a classical set


class QuantumSubset:
    """A map from the elements of a classical finite set X to the lattice."""

    def __init__(self, L, base, weights):
        base = tuple(sorted((hf(x) if not isinstance(x, frozenset) else x for x in base),
                            key=hf_str))
        self.lattice = L
        self.base = base
        if isinstance(weights, dict):
            weights = [weights[x] for x in base]
        weights = tuple(L.index(w) for w in weights)
        if len(weights) != len(base):
            raise QSetError("one weight per base element")
        self.weights = weights

    def __eq__(self, other):
        return isinstance(other, QuantumSubset) and other.lattice == self.lattice \
            and other.base == self.base and other.weights == self.weights

    def __hash__(self):
        return hash((self.lattice.fingerprint, self.base, self.weights))

    def __repr__(self):
        return "QuantumSubset(" + ", ".join(
            f"{hf_str(x)}:{self.lattice.label(w)}" for x, w in zip(self.base, self.weights)) + ")"

    def weight(self, x):
        return self.weights[self.base.index(hf(x) if not isinstance(x, frozenset) else x)]

    def _check(self, other):
        if other.lattice != self.lattice:
            raise LatticeMismatchError("quantum subsets on different lattices")
        if other.base != self.base:
            raise QSetError("quantum subsets over different base sets")

    def to_qset(self):
        L = self.lattice
        return qset(L, [(check_embed(L, x), w) for x, w in zip(self.base, self.weights)])

    def complement(self):
        return QuantumSubset(self.lattice, self.base, [self.lattice.perp(w) for w in self.weights])

    def meet(self, other):
        self._check(other)
        L = self.lattice
        return QuantumSubset(L, self.base, [L.meet(a, b) for a, b in zip(self.weights, other.weights)])

    def join(self, other):
        self._check(other)
        L = self.lattice
        return QuantumSubset(L, self.base, [L.join(a, b) for a, b in zip(self.weights, other.weights)])

    def quantized_meet(self, other, conj):
        self._check(other)
        if conj.lattice != self.lattice:
            raise LatticeMismatchError("operation on another lattice")
        return QuantumSubset(self.lattice, self.base,
                             [int(conj.table[a, b]) for a, b in zip(self.weights, other.weights)])


def empty_subset(L, base):
    return QuantumSubset(L, base, [L.bottom] * len(base))


def enumerate_power(base, L, budget=10000, seed=0):
    """All quantum subsets of base in lexicographic weight order, or a seeded
    uniform sample of ``budget`` of them when there are more."""
    base = [hf(x) if not isinstance(x, frozenset) else x for x in base]
    k = len(base)
    total = L.n ** k
    if total <= budget:
        for ws in itertools.product(range(L.n), repeat=k):
            yield QuantumSubset(L, base, ws)
        return
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        yield QuantumSubset(L, base, [int(x) for x in rng.integers(0, L.n, k)])


# random nodes


def random_qset(L, rng, max_rank=3, max_width=3, weights=None):
    """A random node of rank at most max_rank; weights drawn from ``weights``
    (default: all elements)."""
    pool = list(range(L.n)) if weights is None else [L.index(w) for w in weights]

    def go(r):
        if r == 0:
            return zero_check(L)
        width = int(rng.integers(0, max_width + 1))
        items = {}
        for _ in range(width):
            c = go(int(rng.integers(0, r)))
            items[c.uid] = (c, int(pool[int(rng.integers(0, len(pool)))]))
        return qset(L, list(items.values()))

    return go(int(rng.integers(0, max_rank + 1)))


# literal syntax


def to_literal(u, names=None):
    """Render as `qset { child : weight, ... }` with check/ptilde shorthands."""
    L = u.lattice
    names = names or {}

    def go(x):
        if x.uid in names:
            return names[x.uid]
        hv = _as_check(x)
        if hv is not None:
            return "check " + hf_str(hv)
        if len(x.dom) == 1 and x.dom[0][0].rank == 0:
            return "ptilde " + L.label(x.dom[0][1])
        return "qset { " + ", ".join(f"{go(c)} : {L.label(w)}" for c, w in x.dom) + " }"

    return go(u)


def _as_check(u):
    if any(w != u.lattice.top for _, w in u.dom):
        return None
    out = []
    for c, _ in u.dom:
        h = _as_check(c)
        if h is None:
            return None
        out.append(h)
    return frozenset(out)


class _LiteralParser:
    def __init__(self, text, L, names):
        self.text, self.L, self.names = text, L, names
        self.pos = 0

    def error(self, msg):
        raise QSetError(f"{msg} at offset {self.pos} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def word(self):
        self.skip()
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", self.text[self.pos:])
        if not m:
            self.error("expected a name")
        self.pos += m.end()
        return m.group()

    def label(self):
        self.skip()
        start = self.pos
        if self.peek() == "(":
            depth = 0
            while self.pos < len(self.text):
                ch = self.text[self.pos]
                depth += ch == "("
                depth -= ch == ")"
                self.pos += 1
                if depth == 0:
                    break
        else:
            while self.pos < len(self.text) and self.text[self.pos] not in ",} \t\n":
                self.pos += 1
        lab = self.text[start:self.pos]
        if not lab:
            self.error("expected an element label")
        return self.L.index(lab)

    def hf_literal(self):
        self.skip()
        start = self.pos
        if self.peek().isdigit():
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
        else:
            depth = 0
            while self.pos < len(self.text):
                ch = self.text[self.pos]
                depth += ch == "{"
                depth -= ch == "}"
                self.pos += 1
                if depth == 0:
                    break
        return parse_hf(self.text[start:self.pos])

    def literal(self):
        w = self.word()
        if w == "qset":
            if self.peek() != "{":
                self.error("expected '{'")
            self.pos += 1
            pairs = []
            if self.peek() == "}":
                self.pos += 1
                return qset(self.L, pairs)
            while True:
                child = self.literal()
                if self.peek() != ":":
                    self.error("expected ':'")
                self.pos += 1
                pairs.append((child, self.label()))
                ch = self.peek()
                self.pos += 1
                if ch == "}":
                    return qset(self.L, pairs)
                if ch != ",":
                    self.error("expected ',' or '}'")
        if w == "check":
            return check_embed(self.L, self.hf_literal())
        if w == "ptilde":
            return p_tilde(self.L, self.label())
        if w in self.names:
            return self.names[w]
        self.error(f"unknown name {w!r}")


def parse_qset_literal(text, L, names=None):
    p = _LiteralParser(text, L, names or {})
    u = p.literal()
    if p.peek():
        p.error("trailing input")
    return u


def parse_env(text, L):
    """Lines `name = <qset literal>`; '#' starts a comment."""
    env = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise QSetError(f"line {lineno}: expected 'name = literal'")
        name, lit = (s.strip() for s in line.split("=", 1))
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise QSetError(f"line {lineno}: bad name {name!r}")
        try:
            env[name] = parse_qset_literal(lit, L, env)
        except (QSetError, LatticeError) as e:
            raise QSetError(f"line {lineno}: {e}") from None
    return env


def load_env(path, L):
    with open(path) as fh:
        return parse_env(fh.read(), L)
