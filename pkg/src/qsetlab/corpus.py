"""The Delta-0 theorem corpus and the batch suites built on it."""

import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import List, Optional

import numpy as np

from . import formula as fm
from . import interp as ip
from . import logical_ops as lops
from .oml_core import is_boolean, parse_lattice_name
from .quniverse import check_embed, hf, hf_str, p_tilde, qset, random_qset, restrict, \
    set_commutator, to_literal, zero_check

SANITY_SAMPLES = 50


class CorpusError(ValueError):
    pass


class TransferViolation(AssertionError):
    pass


@dataclass
class TheoremEntry:
    id: str
    source: str
    arity: int
    note: str = ""
    tags: tuple = ()
    formula: object = None

    def __post_init__(self):
        if self.formula is None:
            self.formula = fm.parse(self.source)
        consts = sorted(fm.constants_of(self.formula), key=ip._natural_key)
        if consts != [f"x{i}" for i in range(1, self.arity + 1)]:
            raise CorpusError(f"{self.id}: constants {consts} do not match arity {self.arity}")
        if not fm.is_delta0(self.formula):
            raise CorpusError(f"{self.id}: not a Delta-0 formula")
        self.desugared = fm.desugar(self.formula)

    @property
    def names(self):
        return [f"x{i}" for i in range(1, self.arity + 1)]


def parse_corpus(text):
    entries, block = [], {}

    def flush():
        if block:
            missing = {"id", "formula", "arity"} - block.keys()
            if missing:
                raise CorpusError(f"corpus block missing {sorted(missing)}: {block}")
            tags = tuple(t.strip() for t in block.get("tags", "").split(",") if t.strip())
            entries.append(TheoremEntry(block["id"], block["formula"], int(block["arity"]),
                                        block.get("note", ""), tags))
            block.clear()

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.rstrip()
        if line.startswith("#"):
            continue
        if not line.strip():
            flush()
            continue
        if ":" not in line:
            raise CorpusError(f"line {lineno}: expected 'key: value'")
        k, v = line.split(":", 1)
        k = k.strip()
        if k == "id" and block:
            flush()
        block[k] = v.strip()
    flush()
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise CorpusError("duplicate corpus ids")
    return entries


def load_corpus(path=None):
    if path is None:
        text = resources.files("qsetlab").joinpath("data/corpus.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_corpus(text)


def random_hf(rng, depth=3, width=3):
    if depth == 0:
        return frozenset()
    k = int(rng.integers(0, width + 1))
    return frozenset(random_hf(rng, int(rng.integers(0, depth)), width) for _ in range(k))


def sanity_gate(entries, samples=SANITY_SAMPLES, seed=0):
    """Every entry must hold classically on random hereditarily finite sets.
    The first argument pairs are drawn from each other to hit the
    interesting cases (x in y, x = y)."""
    rng = np.random.default_rng(seed)
    for e in entries:
        for _ in range(samples):
            pool = [random_hf(rng, 3) for _ in range(e.arity)]
            for i in range(e.arity):
                if pool[i] and rng.integers(0, 2):
                    j = int(rng.integers(0, e.arity))
                    pool[j] = sorted(pool[i], key=hf_str)[0]
            env = dict(zip(e.names, pool))
            if not fm.classical_satisfaction(e.formula, env):
                raise CorpusError(f"{e.id} fails classically at "
                                  + ", ".join(f"{k}={hf_str(v)}" for k, v in env.items()))
    return True


# argument pools

def _stable_seed(*parts):
    h = hashlib.blake2b("|".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def arg_pool(L, rank_bound=3, seed=42, size=60):
    """Stratified pool: check-embeddings, P~ for every element, restrictions
    of low-rank nodes, and random mixed nests. Deterministic in (L, seed)."""
    rng = np.random.default_rng(_stable_seed("pool", L.fingerprint, seed, rank_bound))
    pool = {}

    def add(u):
        if u.rank <= rank_bound:
            pool.setdefault(u.uid, u)

    for v in (0, 1, 2, [1], [[1]], [0, [1]], 3):
        try:
            add(check_embed(L, v))
        except ValueError:
            pass
    tildes = [p_tilde(L, x) for x in range(L.n)]
    for t in tildes:
        add(t)
    for x in range(L.n):
        add(qset(L, [(tildes[x], L.top)]))
        add(qset(L, [(zero_check(L), x), (check_embed(L, 1), L.perp(x))]))
    low = [u for u in pool.values() if u.rank < rank_bound]
    for _ in range(size // 4):
        u = low[int(rng.integers(0, len(low)))]
        add(restrict(u, int(rng.integers(0, L.n))))
    for _ in range(size):
        add(random_qset(L, rng, max_rank=rank_bound, max_width=2))
    return sorted(pool.values(), key=lambda u: u.digest)


def arg_tuples(pool, arity, budget, seed, tag=""):
    rng = np.random.default_rng(_stable_seed("tuples", seed, arity, tag))
    idx = rng.integers(0, len(pool), size=(budget, arity))
    return [tuple(pool[i] for i in row) for row in idx]


# configuration

INTERP_SETS = ("all36", "self-dual6")


@dataclass
class SuiteConfig:
    lattices: List[str] = field(default_factory=lambda: ["mo2"])
    interpretations: object = "all36"
    rank_bound: int = 3
    budget: int = 2000
    seed: int = 42
    halt_on_violation: bool = True
    corpus: Optional[str] = None
    formulas: Optional[List[str]] = None

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def build_interps(L, spec):
    if spec == "all36":
        return ip.all_standard(L)
    if spec == "self-dual6":
        return [ip.standard(L, j, j) for j in range(6)]
    if isinstance(spec, str):
        spec = [spec]
    out = []
    for s in spec:
        if s == "star-join":
            out.append(ip.star_join(L))
        elif s == "const-imp":
            out.append(ip.const_imp(L))
        else:
            out.append(ip.parse_interp_id(L, s))
    return out


# transfer suite


@dataclass
class Violation:
    lattice: str
    fingerprint: str
    interp: str
    entry: str
    formula: str
    args: tuple
    lhs: str
    bound: str

    def lines(self):
        return [f"violation: {self.lattice} {self.interp} {self.entry}",
                f"  formula: {self.formula}",
                *(f"  x{i}: {a}" for i, a in enumerate(self.args, 1)),
                f"  lhs: {self.lhs}",
                f"  bound: {self.bound}"]


@dataclass
class SuiteReport:
    kind: str
    summary: dict
    violations: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations and self.summary.get("pass", True)

    def text(self):
        out = [f"suite: {self.kind}"]
        for k in sorted(self.summary):
            out.append(f"{k}: {self.summary[k]}")
        out.extend(self.rows)
        for v in self.violations[:20]:
            out.extend(v.lines())
        return "\n".join(out) + "\n"

    def json(self):
        return json.dumps({"suite": self.kind, **self.summary,
                           "violations": [v.__dict__ | {"args": list(v.args)}
                                          for v in self.violations[:20]]},
                          sort_keys=True, indent=1)


def _entries(cfg):
    entries = load_corpus(cfg.corpus)
    if cfg.formulas:
        entries = [e for e in entries if e.id in set(cfg.formulas)]
    sanity_gate(entries)
    return entries


def transfer_sweep(L, interps, entries, pool, budget, seed, lattice_name="?",
                   halt_on_violation=True):
    """Evaluate every entry on ``budget`` argument tuples for all interps.

    Returns (checked, violations, ones) where ``ones`` counts tuples with
    commutator 1 (which must evaluate to 1).
    """
    ev = ip.Evaluator(interps)
    bound_cache = {}
    violations = []
    checked = ones = 0
    for e in entries:
        for args in arg_tuples(pool, e.arity, budget, seed, e.id + L.fingerprint):
            env = dict(zip(e.names, args))
            vals = ev.evaluate(e.desugared, env, desugared=True)
            key = frozenset().union(*(a.support_set() for a in args))
            bound = bound_cache.get(key)
            if bound is None:
                bound = bound_cache[key] = set_commutator(args)
            ok = L.leq[bound, vals]
            if bound == L.top:
                ones += 1
                ok = ok & (vals == L.top)
            checked += len(interps)
            if not ok.all():
                for i in np.nonzero(~ok)[0]:
                    it = interps[i]
                    v = Violation(lattice_name, L.fingerprint, it.name, e.id, e.source,
                                  tuple(to_literal(a) for a in args),
                                  L.label(vals[i]), L.label(bound))
                    if halt_on_violation and it.normal:
                        raise TransferViolation("\n".join(v.lines()))
                    violations.append(v)
    return checked, violations, ones


def run_transfer_suite(cfg):
    entries = _entries(cfg)
    summary = {"entries": len(entries), "budget": cfg.budget, "seed": cfg.seed,
               "rank_bound": cfg.rank_bound}
    rows, violations = [], []
    total = total_ones = 0
    for name in cfg.lattices:
        L = parse_lattice_name(name)
        interps = build_interps(L, cfg.interpretations)
        pool = arg_pool(L, cfg.rank_bound, cfg.seed)
        checked, viol, ones = transfer_sweep(L, interps, entries, pool, cfg.budget, cfg.seed,
                                             name, cfg.halt_on_violation)
        rows.append(f"lattice {name}: fingerprint={L.fingerprint} interps={len(interps)} "
                    f"checks={checked} commutator-one={ones} violations={len(viol)}")
        total += checked
        total_ones += ones
        violations.extend(viol)
    summary.update({"checks": total, "commutator_one_tuples": total_ones,
                    "violations": len(violations), "pass": not violations})
    return SuiteReport("transfer", summary, violations, rows)


# De Morgan suite

DEMORGAN_BODIES = ("!(x in q)", "x in q", "x = q", "x sub q", "E y in x . y = q")


def demorgan_matrix(L, interps, budget=200, seed=42, rank_bound=2):
    """Pass/fail of every De Morgan law for every interpretation over a
    deterministic family: u = P~ with phi(x) = !(x in Q~) for all (P, Q),
    plus ``budget`` random (body, u, q) samples."""
    ev = ip.Evaluator(interps)
    laws = {k: np.ones(len(interps), dtype=bool) for k in ("M1", "M2", "M3", "M4", "M5", "M6")}
    witness = {}

    def absorb(nf, en, lw, desc):
        for k, v in lw.items():
            newly = laws[k] & ~v
            for i in np.nonzero(newly)[0]:
                witness.setdefault((interps[i].name, k), desc)
            laws[k] &= v

    tildes = [p_tilde(L, x) for x in range(L.n)]
    body = fm.parse("!(x in q)")
    for P in range(L.n):
        for Q in range(L.n):
            absorb(*ip.de_morgan_vectors(ev, body, tildes[P], {"q": tildes[Q]}),
                   f"u=ptilde {L.label(P)}, phi=!(x in q), q=ptilde {L.label(Q)}")
    pool = arg_pool(L, rank_bound, seed, size=30)
    rng = np.random.default_rng(_stable_seed("demorgan", L.fingerprint, seed))
    bodies = [fm.parse(b) for b in DEMORGAN_BODIES]
    for _ in range(budget):
        b = bodies[int(rng.integers(0, len(bodies)))]
        u = pool[int(rng.integers(0, len(pool)))]
        q = pool[int(rng.integers(0, len(pool)))]
        absorb(*ip.de_morgan_vectors(ev, b, u, {"q": q}),
               f"u={to_literal(u)}, phi={fm.to_text(b)}, q={to_literal(q)}")
    return laws, witness


def run_demorgan_suite(cfg):
    rows = []
    ok = True
    summary = {"seed": cfg.seed, "budget": cfg.budget}
    for name in cfg.lattices:
        L = parse_lattice_name(name)
        interps = build_interps(L, cfg.interpretations)
        laws, _ = demorgan_matrix(L, interps, min(cfg.budget, 400), cfg.seed)
        m56 = [it.name for i, it in enumerate(interps) if laws["M5"][i] and laws["M6"][i]]
        m14 = all(laws[k].all() for k in ("M1", "M2", "M3", "M4"))
        sd = [it.name for it in interps if it.self_dual]
        if is_boolean(L):
            expect = [it.name for it in interps]
        else:
            expect = sd
        good = m14 and m56 == expect
        ok &= good
        rows.append(f"lattice {name}: fingerprint={L.fingerprint} M1-M4={'pass' if m14 else 'fail'} "
                    f"M5M6-pass=[{' '.join(m56)}] self-dual=[{' '.join(sd)}] "
                    f"{'pass' if good else 'FAIL'}")
    summary["pass"] = ok
    return SuiteReport("demorgan", summary, [], rows)


def run_census(cfg):
    rows = []
    summary = {}
    for name in cfg.lattices:
        L = parse_lattice_name(name)
        c = ip.interpretation_census(L)
        rows.append(f"lattice {name}: fingerprint={L.fingerprint} "
                    f"polynomials={lops.census_polynomials(L)} interpretations={c.distinct} "
                    f"self-dual={c.self_dual_count}")
    summary["pass"] = True
    return SuiteReport("census", summary, [], rows)


def corpus_ids():
    return [e.id for e in load_corpus()]



# metatheory suites

def _sublogics(L, rng, count):
    """Sublogics of the form A^!! for small random A, plus {0,1} and L."""
    out = [sorted({L.bottom, L.top}), list(range(L.n))]
    from .oml_core import generated_sublogic
    for _ in range(count):
        k = int(rng.integers(1, 3))
        A = [int(x) for x in rng.integers(0, L.n, size=k)]
        out.append(sorted(generated_sublogic(L, A)))
    uniq = {tuple(r) for r in out}
    return [list(r) for r in sorted(uniq)]


def run_absoluteness_suite(cfg):
    """[[f]] computed in a sublogic R equals [[f]] computed in L, for args in V^(R)."""
    entries = _entries(cfg)
    checks = fails = 0
    rows, violations = [], []
    for name in cfg.lattices:
        L = parse_lattice_name(name)
        interps = [it for it in build_interps(L, cfg.interpretations) if it.normal]
        rng = np.random.default_rng(_stable_seed("absolute", L.fingerprint, cfg.seed))
        per = max(1, cfg.budget // max(1, len(entries)))
        lf = 0
        for R in _sublogics(L, rng, 6):
            for e in entries:
                for _ in range(max(1, per // 8)):
                    args = [random_qset(L, rng, min(cfg.rank_bound, 2), 2, weights=R)
                            for _ in range(e.arity)]
                    for it in interps:
                        ok, outer, inner = ip.absoluteness_check(it, e.formula, args, R)
                        checks += 1
                        if not ok:
                            lf += 1
                            violations.append(Violation(
                                name, L.fingerprint, it.name, e.id, e.source,
                                tuple(to_literal(a) for a in args),
                                L.label(outer), L.label(inner)))
        fails += lf
        rows.append(f"lattice {name}: fingerprint={L.fingerprint} failures={lf}")
    return SuiteReport("absolute", {"checks": checks, "failures": fails, "pass": fails == 0,
                                    "seed": cfg.seed}, violations, rows)


def run_restriction_suite(cfg):
    """[[f(args)]] ^ p = [[f(args|p)]] ^ p for p commuting with every support."""
    from .oml_core import commutant
    from .quniverse import joint_support
    entries = _entries(cfg)
    checks = fails = 0
    rows, violations = [], []
    for name in cfg.lattices:
        L = parse_lattice_name(name)
        interps = [it for it in build_interps(L, cfg.interpretations) if it.normal]
        ev = ip.Evaluator(interps)
        pool = arg_pool(L, min(cfg.rank_bound, 2), cfg.seed, size=30)
        lf = 0
        for e in entries:
            for args in arg_tuples(pool, e.arity, max(1, cfg.budget // 20), cfg.seed, "r" + e.id):
                env = dict(zip(e.names, args))
                full = ev.evaluate(e.desugared, env, desugared=True)
                for p in sorted(commutant(L, joint_support(args))):
                    cut = ev.evaluate(e.desugared, {k: restrict(u, p) for k, u in env.items()},
                                      desugared=True)
                    lhs, rhs = L.meet_table[full, p], L.meet_table[cut, p]
                    checks += len(interps)
                    for i in np.nonzero(lhs != rhs)[0]:
                        lf += 1
                        violations.append(Violation(
                            name, L.fingerprint, f"{interps[i].name} p={L.label(p)}", e.id,
                            e.source, tuple(to_literal(a) for a in args),
                            L.label(lhs[i]), L.label(rhs[i])))
        fails += lf
        rows.append(f"lattice {name}: fingerprint={L.fingerprint} failures={lf}")
    return SuiteReport("restrict", {"checks": checks, "failures": fails, "pass": fails == 0,
                                    "seed": cfg.seed}, violations, rows)


def elementary_check(L, X=(0, 1, 2)):
    """[[x in u]] = u(x) for every u with dom(u) inside dom(X-check), exhaustively.
    Returns the number of failures over all interpretations."""
    base = [check_embed(L, v) for v in X]
    interps = ip.all_standard(L)
    ev = ip.Evaluator(interps)
    f = fm.parse("x in u")
    fails = 0
    import itertools
    for ws in itertools.product(range(L.n), repeat=len(base)):
        u = qset(L, list(zip(base, ws)))
        for x, w in zip(base, ws):
            vals = ev.evaluate(f, {"x": x, "u": u})
            fails += int((vals != w).sum())
    return fails


def l_restriction_failures(L, samples=200, seed=42, amended=False):
    """Compare L(u|p) with L(u)^p over random u and p.

    With the zero-weight marker <u, 0> kept in u|p, the node u itself sits in
    dom(u|p), so L(u) is part of L(u|p). ``amended=True`` checks
    L(u|p) = (L(u)^p) u L(u) instead of the plain identity."""
    rng = np.random.default_rng(_stable_seed("lrestrict", L.fingerprint, seed))
    bad = []
    for _ in range(samples):
        u = random_qset(L, rng, 3, 3)
        p = int(rng.integers(0, L.n))
        got = restrict(u, p).support_set()
        want = {L.meet(x, p) for x in u.support_set()}
        if amended:
            want |= u.support_set()
        if got != want:
            bad.append((to_literal(u), L.label(p)))
    return bad


def elementary_equivalence_failures(entries, samples=50, seed=0):
    """Classical truth of f(u1..un) iff [[f(check u1..)]] = 1, for every interpretation."""
    from .oml_core import build_boolean
    L = build_boolean(1)
    ev = ip.Evaluator(ip.all_standard(L))
    rng = np.random.default_rng(seed)
    bad = 0
    for e in entries:
        for _ in range(samples):
            xs = [random_hf(rng, 3, 2) for _ in range(e.arity)]
            classical = fm.classical_satisfaction(e.formula, dict(zip(e.names, xs)))
            vals = ev.evaluate(e.desugared, {n: check_embed(L, x) for n, x in zip(e.names, xs)},
                               desugared=True)
            bad += int(((vals == L.top) != classical).sum())
    return bad
