"""The language L(in, V^(Q)): parser, AST, printer, desugaring and the
classical two-valued satisfaction used as an oracle.

ASCII surface syntax::

    formula := iff ; iff := imp {"<->" imp} ; imp := or ["->" imp] ;
    or := and {"|" and} ; and := unary {"&" unary} ;
    unary := "!" unary | quant | atom | "(" formula ")" ;
    quant := ("A"|"E") ident ["in" ident] "." unary ;
    atom := ident ("=" | "in" | "sub") ident

Identifiers bound by a quantifier are variables; free identifiers are
constants naming QSets (or, classically, hereditarily finite sets).
"""

import re
from dataclasses import dataclass, field
from typing import Optional, Tuple

KEYWORDS = {"A", "E", "in", "sub"}


class FormulaSyntaxError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.col = col


class UnboundVariableError(FormulaSyntaxError):
    pass


class UnsupportedConstruct(ValueError):
    pass


Span = Optional[Tuple[int, int]]


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Const:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Eq:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class In:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class Subseteq:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class Not:
    body: object
    span: Span = _span()


@dataclass(frozen=True)
class And:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class Or:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class Imp:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class Iff:
    left: object
    right: object
    span: Span = _span()


@dataclass(frozen=True)
class ForallIn:
    var: str
    bound: object
    body: object
    span: Span = _span()


@dataclass(frozen=True)
class ExistsIn:
    var: str
    bound: object
    body: object
    span: Span = _span()


@dataclass(frozen=True)
class Forall:
    var: str
    body: object
    span: Span = _span()


@dataclass(frozen=True)
class Exists:
    var: str
    body: object
    span: Span = _span()


ATOMS = (Eq, In, Subseteq)
BINARY = (And, Or, Imp, Iff)
BOUNDED = (ForallIn, ExistsIn)
UNBOUNDED = (Forall, Exists)


# tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|[!&|().=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.X)


def _tokenize(text):
    toks = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for k, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            toks.append((kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text, constants):
        self.toks = _tokenize(text)
        self.i = 0
        self.constants = constants
        self.bound = []

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, tok[2], tok[3])

    def expect(self, value):
        t = self.next()
        if t[1] != value or t[0] == "eof":
            self.error(f"expected {value!r}, found {t[1] or 'end of input'!r}", t)
        return t

    def is_op(self, value):
        t = self.peek()
        return t[0] == "op" and t[1] == value

    def formula(self):
        node = self.imp()
        while self.is_op("<->"):
            t = self.next()
            node = Iff(node, self.imp(), span=(t[2], t[3]))
        return node

    def imp(self):
        node = self.disj()
        if self.is_op("->"):
            t = self.next()
            node = Imp(node, self.imp(), span=(t[2], t[3]))
        return node

    def disj(self):
        node = self.conj()
        while self.is_op("|"):
            t = self.next()
            node = Or(node, self.conj(), span=(t[2], t[3]))
        return node

    def conj(self):
        node = self.unary()
        while self.is_op("&"):
            t = self.next()
            node = And(node, self.unary(), span=(t[2], t[3]))
        return node

    def unary(self):
        t = self.peek()
        if self.is_op("!"):
            self.next()
            return Not(self.unary(), span=(t[2], t[3]))
        if self.is_op("("):
            self.next()
            node = self.formula()
            self.expect(")")
            return node
        if t[0] == "ident" and t[1] in ("A", "E"):
            return self.quant()
        if t[0] == "ident":
            return self.atom()
        self.error(f"unexpected {t[1] or 'end of input'!r}")

    def ident(self):
        t = self.next()
        if t[0] != "ident" or t[1] in KEYWORDS:
            self.error(f"expected an identifier, found {t[1] or 'end of input'!r}", t)
        return t

    def term(self):
        t = self.ident()
        name = t[1]
        if name in self.bound:
            return Var(name, span=(t[2], t[3]))
        if self.constants is not None and name not in self.constants:
            raise UnboundVariableError(f"unbound identifier {name!r}", t[2], t[3])
        return Const(name, span=(t[2], t[3]))

    def quant(self):
        q = self.next()
        v = self.ident()
        if v[1] in self.bound:
            raise FormulaSyntaxError(f"variable {v[1]!r} is already bound", v[2], v[3])
        bound = None
        if self.peek()[0] == "ident" and self.peek()[1] == "in":
            self.next()
            bound = self.term()
        self.expect(".")
        self.bound.append(v[1])
        body = self.unary()
        self.bound.pop()
        sp = (q[2], q[3])
        if bound is None:
            return (Forall if q[1] == "A" else Exists)(v[1], body, span=sp)
        return (ForallIn if q[1] == "A" else ExistsIn)(v[1], bound, body, span=sp)

    def atom(self):
        left = self.term()
        t = self.next()
        if t[0] == "op" and t[1] == "=":
            cls = Eq
        elif t[0] == "ident" and t[1] == "in":
            cls = In
        elif t[0] == "ident" and t[1] == "sub":
            cls = Subseteq
        else:
            self.error(f"expected '=', 'in' or 'sub', found {t[1] or 'end of input'!r}", t)
        return cls(left, self.term(), span=left.span)


def parse(text, constants=None):
    """Parse a formula. With ``constants`` given, every free identifier must
    be one of them."""
    p = _Parser(text, None if constants is None else set(constants))
    node = p.formula()
    if p.peek()[0] != "eof":
        p.error(f"unexpected {p.peek()[1]!r}")
    return node


# printing

_PREC = {Iff: 1, Imp: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Imp: "->", Or: "|", And: "&"}


def _prec(f):
    return _PREC.get(type(f), 5)


def to_text(f):
    """Print with the fewest parentheses the grammar allows."""
    if isinstance(f, (Var, Const)):
        return f.name
    if isinstance(f, Eq):
        return f"{to_text(f.left)} = {to_text(f.right)}"
    if isinstance(f, In):
        return f"{to_text(f.left)} in {to_text(f.right)}"
    if isinstance(f, Subseteq):
        return f"{to_text(f.left)} sub {to_text(f.right)}"
    if isinstance(f, Not):
        return "!" + _wrap(f.body, 5)
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        if isinstance(f, Imp):  # right associative
            lhs, rhs = _wrap(f.left, p + 1), _wrap(f.right, p)
        else:
            lhs, rhs = _wrap(f.left, p), _wrap(f.right, p + 1)
        return f"{lhs} {_SYM[type(f)]} {rhs}"
    if isinstance(f, BOUNDED):
        q = "A" if isinstance(f, ForallIn) else "E"
        return f"{q} {f.var} in {to_text(f.bound)} . {_wrap(f.body, 5)}"
    if isinstance(f, UNBOUNDED):
        q = "A" if isinstance(f, Forall) else "E"
        return f"{q} {f.var} . {_wrap(f.body, 5)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, need):
    s = to_text(f)
    return s if _prec(f) >= need else f"({s})"


# analysis


def children(f):
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, (BOUNDED + UNBOUNDED)):
        return (f.body,)
    return ()


def walk(f):
    yield f
    for c in children(f):
        yield from walk(c)


def constants_of(f):
    out = set()
    for g in walk(f):
        if isinstance(g, ATOMS):
            out |= {t.name for t in (g.left, g.right) if isinstance(t, Const)}
        if isinstance(g, BOUNDED) and isinstance(g.bound, Const):
            out.add(g.bound.name)
    return out


def names_of(f):
    out = set(constants_of(f))
    for g in walk(f):
        if isinstance(g, ATOMS):
            out |= {t.name for t in (g.left, g.right)}
        if isinstance(g, BOUNDED + UNBOUNDED):
            out.add(g.var)
    return out


def is_delta0(f):
    """No unbounded quantifier once the sugar is expanded."""
    return not any(isinstance(g, UNBOUNDED) for g in walk(desugar(f)))


def desugar(f, primitive_basis=False):
    """Expand <-> and sub. With ``primitive_basis`` also rewrite |, E-in and E
    through !, &, A (the self-dual basis)."""
    used = names_of(f)
    counter = [0]

    def fresh():
        while True:
            name = f"_z{counter[0]}"
            counter[0] += 1
            if name not in used:
                used.add(name)
                return name

    def go(g):
        if isinstance(g, Iff):
            a, b = go(g.left), go(g.right)
            return go_basis(Or(And(a, b), And(Not(a), Not(b))))
        if isinstance(g, Subseteq):
            z = fresh()
            return ForallIn(z, g.left, In(Var(z), g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY):
            return go_basis(type(g)(go(g.left), go(g.right)))
        if isinstance(g, BOUNDED):
            return go_basis(type(g)(g.var, g.bound, go(g.body)))
        if isinstance(g, UNBOUNDED):
            return go_basis(type(g)(g.var, go(g.body)))
        return g

    def go_basis(g):
        if not primitive_basis:
            return g
        if isinstance(g, Or):
            return Not(And(Not(g.left), Not(g.right)))
        if isinstance(g, ExistsIn):
            return Not(ForallIn(g.var, g.bound, Not(g.body)))
        if isinstance(g, Exists):
            return Not(Forall(g.var, Not(g.body)))
        return g

    return go(f)


# classical satisfaction over hereditarily finite sets


def classical_satisfaction(f, env):
    """Two-valued truth in <V, in> with constants bound to frozensets."""

    def term(t, local):
        if isinstance(t, Var):
            return local[t.name]
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariableError(f"constant {t.name!r} has no value") from None

    def go(g, local):
        if isinstance(g, Eq):
            return term(g.left, local) == term(g.right, local)
        if isinstance(g, In):
            return term(g.left, local) in term(g.right, local)
        if isinstance(g, Subseteq):
            return term(g.left, local) <= term(g.right, local)
        if isinstance(g, Not):
            return not go(g.body, local)
        if isinstance(g, And):
            return go(g.left, local) and go(g.right, local)
        if isinstance(g, Or):
            return go(g.left, local) or go(g.right, local)
        if isinstance(g, Imp):
            return (not go(g.left, local)) or go(g.right, local)
        if isinstance(g, Iff):
            return go(g.left, local) == go(g.right, local)
        if isinstance(g, ForallIn):
            return all(go(g.body, {**local, g.var: x}) for x in term(g.bound, local))
        if isinstance(g, ExistsIn):
            return any(go(g.body, {**local, g.var: x}) for x in term(g.bound, local))
        if isinstance(g, UNBOUNDED):
            raise UnsupportedConstruct("unbounded quantifier over the class of all sets")
        raise TypeError(f"not a formula: {g!r}")

    return go(f, {})
