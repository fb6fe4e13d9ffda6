"""Command-line front end.

Exit codes: 0 pass, 1 a check failed, 2 usage error.
"""

import argparse
import json
import sys

import numpy as np

from . import corpus, formula as fm, hilbert as hb, interp as ip, logical_ops as lops
from .oml_core import LatticeError, center, load_lattice, parse_lattice_name, save_lattice, \
    verify_axioms
from .quniverse import QSetError, load_env

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Out:
    """Collects line output and a machine summary; prints one of them."""

    def __init__(self, as_json):
        self.as_json = as_json
        self.lines = []
        self.data = {}

    def line(self, text=""):
        self.lines.append(text)

    def put(self, key, value, text=None):
        self.data[key] = value
        self.lines.append(f"{key}: {value if text is None else text}")

    def emit(self, stream):
        if self.as_json:
            stream.write(json.dumps(self.data, sort_keys=True, default=str) + "\n")
        else:
            stream.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _lattice(name, allow_non_oml=False):
    try:
        if allow_non_oml and name.startswith("file:"):
            return load_lattice(name[5:], allow_non_oml=True)
        return parse_lattice_name(name)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read lattice: {e}") from None
    except LatticeError as e:
        raise UsageError(str(e)) from None


def _head(out, name, L):
    out.put("lattice", name)
    out.put("fingerprint", L.fingerprint)


# lattice


def cmd_lattice(a, out):
    L = _lattice(a.name, allow_non_oml=a.action == "verify")
    _head(out, a.name, L)
    if a.action == "build":
        out.put("elements", L.n)
        if a.out:
            save_lattice(L, a.out)
            out.put("written", a.out)
        return EXIT_OK
    if a.action == "verify":
        rep = verify_axioms(L)
        out.put("oml", rep.ok, str(rep.ok).lower())
        if not rep.ok:
            w = [L.label(x) for x in rep.witness] if rep.witness is not None else None
            out.put("law", rep.law)
            out.put("witness", w, " ".join(w or []))
        return EXIT_OK if rep.ok else EXIT_FAIL
    # show
    out.put("elements", [L.label(x) for x in range(L.n)], " ".join(L.label(x) for x in range(L.n)))
    out.put("ortho", {L.label(x): L.label(L.perp(x)) for x in range(L.n)},
            " ".join(f"{L.label(x)}->{L.label(L.perp(x))}" for x in range(L.n)))
    covers = []
    for x in range(L.n):
        for y in range(L.n):
            if x != y and L.leq[x, y] and not any(
                    L.leq[x, z] and L.leq[z, y] for z in range(L.n) if z not in (x, y)):
                covers.append((L.label(x), L.label(y)))
    out.put("covers", covers, " ".join(f"{x}<{y}" for x, y in covers))
    C = sorted(center(L))
    out.put("center", [L.label(x) for x in C], " ".join(L.label(x) for x in C))
    ncp = int((~L.commute_matrix).sum()) // 2
    out.put("noncommuting_pairs", ncp)
    return EXIT_OK


# ops


def _op_by_name(L, text):
    t = text.replace(" ", "")
    for prefix, fn in (("->", lops.implication_j), ("*", lops.conjunction_j)):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            j = int(t[len(prefix):])
            if j not in range(6):
                raise UsageError("operation index must be in 0..5")
            return fn(L, j)
    raise UsageError(f"unknown operation {text!r}; use ->j or *j")


def cmd_ops(a, out):
    L = _lattice(a.lattice)
    _head(out, a.lattice, L)
    if a.action == "census":
        out.put("polynomials", lops.census_polynomials(L, a.mode))
        return EXIT_OK
    if a.action == "classify":
        rows = {}
        for j in range(6):
            op = lops.implication_j(L, j)
            res = lops.check_conditions(op)
            rows[op.name] = {k: bool(v.holds) for k, v in res.items()}
            flags = " ".join(f"{k}={'y' if v.holds else 'n'}" for k, v in res.items())
            out.line(f"{op.name}: {flags} material={'y' if lops.is_material(op) else 'n'}")
        out.data["conditions"] = rows
        out.data["material"] = [n for n, r in rows.items()
                                if all(r[k] for k in ("E", "MP", "MT", "NG"))]
        return EXIT_OK
    op = _op_by_name(L, a.op)
    labels = [L.label(x) for x in range(L.n)]
    width = max(len(s) for s in labels)
    out.line(f"operation: {op.name}")
    out.line(" " * (width + 1) + " ".join(s.rjust(width) for s in labels))
    for P in range(L.n):
        out.line(labels[P].rjust(width) + " "
                 + " ".join(L.label(op.table[P, Q]).rjust(width) for Q in range(L.n)))
    out.data["operation"] = op.name
    out.data["table"] = [[L.label(op.table[P, Q]) for Q in range(L.n)] for P in range(L.n)]
    return EXIT_OK


# eval


def cmd_eval(a, out):
    L = _lattice(a.lattice)
    try:
        it = ip.parse_interp_id(L, a.interp)
    except ValueError as e:
        raise UsageError(str(e)) from None
    env = {}
    if a.env:
        try:
            env = load_env(a.env, L)
        except OSError as e:
            raise UsageError(f"cannot read env file: {e}") from None
        except QSetError as e:
            raise UsageError(f"env file: {e}") from None
    try:
        f = fm.parse(a.formula, constants=set(env))
    except fm.FormulaSyntaxError as e:
        raise UsageError(str(e)) from None
    missing = fm.constants_of(f) - set(env)
    if missing:
        raise UsageError(f"unbound constants: {', '.join(sorted(missing))}")
    try:
        v = ip.truth_value(it, f, env)
    except fm.UnsupportedConstruct as e:
        raise UsageError(str(e)) from None
    _head(out, a.lattice, L)
    out.put("interpretation", it.name)
    out.put("formula", fm.to_text(f))
    out.put("value", L.label(v))
    return EXIT_OK


# check / census


SUITES = {"transfer": corpus.run_transfer_suite, "demorgan": corpus.run_demorgan_suite,
          "absolute": corpus.run_absoluteness_suite, "restrict": corpus.run_restriction_suite}


def cmd_check(a, out):
    try:
        cfg = corpus.SuiteConfig.load(a.config) if a.config else corpus.SuiteConfig()
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as e:
        raise UsageError(f"bad config: {e}") from None
    try:
        rep = SUITES[a.kind](cfg)
    except corpus.TransferViolation as e:
        out.line(str(e))
        out.data.update({"suite": a.kind, "pass": False, "error": str(e)})
        return EXIT_FAIL
    except (LatticeError, ValueError) as e:
        raise UsageError(str(e)) from None
    if out.as_json:
        out.data.update(json.loads(rep.json()))
        out.data["rows"] = rep.rows
    else:
        out.lines.extend(rep.text().rstrip("\n").split("\n"))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_census(a, out):
    L = _lattice(a.lattice)
    _head(out, a.lattice, L)
    c = ip.interpretation_census(L)
    out.put("polynomials", lops.census_polynomials(L))
    out.put("interpretations", c.distinct)
    out.put("self_dual", c.self_dual_count)
    return EXIT_OK


# spectral


def _matrix(path):
    try:
        M = hb.load_matrix(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        raise UsageError(f"cannot read matrix {path}: {e}") from None
    if M.d > hb.MAX_DIM:
        raise UsageError(f"dimension {M.d} exceeds {hb.MAX_DIM}")
    if not M.is_hermitian():
        raise UsageError(f"{path} is not Hermitian")
    return M


def cmd_spectral(a, out):
    A, B = _matrix(a.A), _matrix(a.B)
    if A.d != B.d:
        raise UsageError("A and B have different dimensions")
    leq = hb.spectral_order_leq(A, B)
    out.put("spectral_leq", leq, str(leq).lower())
    if a.action == "order":
        return EXIT_OK
    if a.conj not in range(6):
        raise UsageError("--conj must be in 0..5")
    V = hb.q_value_order(A, B, a.conj)
    one = V.close_to(hb.identity(V.d), 1e-7)
    rank = int(round(np.trace(V.to_float().a).real))
    out.put("conj", a.conj)
    out.put("qvalue_rank", rank)
    out.put("qvalue_is_identity", one, str(one).lower())
    agree = one == leq
    out.put("agree", agree, str(agree).lower())
    return EXIT_OK if agree else EXIT_FAIL


# demo


def cmd_demo(a, out):
    L = _lattice(a.lattice)
    try:
        rep = ip.takeuti_counterexample(L)
    except ip.NoCounterexample as e:
        out.put("lattice", a.lattice)
        out.put("fingerprint", L.fingerprint)
        out.put("counterexample", "none", f"none ({e})")
        return EXIT_FAIL
    out.put("lattice", a.lattice)
    for line in rep.lines():
        k, v = line.split(": ", 1)
        out.put(k.replace("-", "_") if k != "lattice" else "fingerprint", v)
    return EXIT_OK if rep.ok else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="qsetlab",
                                description="Quantum set theory over finite orthomodular lattices.")
    p.add_argument("--json", action="store_true", help="print the machine summary")
    sub = p.add_subparsers(dest="verb", required=True)

    q = sub.add_parser("lattice", help="build, verify or show a lattice")
    q.add_argument("action", choices=["build", "verify", "show"])
    q.add_argument("name", help="bool<k>, mo<m>, prod(a,b) or file:<path>")
    q.add_argument("--out", help="write the lattice as JSON (build)")
    q.set_defaults(fn=cmd_lattice)

    q = sub.add_parser("ops", help="Kotas operations")
    q.add_argument("action", choices=["census", "classify", "table"])
    q.add_argument("--lattice", required=True)
    q.add_argument("--op", default="->3", help="->j or *j (table)")
    q.add_argument("--mode", choices=["auto", "tables"], default="auto")
    q.set_defaults(fn=cmd_ops)

    q = sub.add_parser("eval", help="truth value of a formula")
    q.add_argument("--lattice", required=True)
    q.add_argument("--interp", default="3,3")
    q.add_argument("--env", help="file of `name = literal` lines")
    q.add_argument("formula")
    q.set_defaults(fn=cmd_eval)

    q = sub.add_parser("check", help="run a property suite")
    q.add_argument("kind", choices=sorted(SUITES))
    q.add_argument("--config", help="JSON suite configuration")
    q.set_defaults(fn=cmd_check)

    q = sub.add_parser("census", help="interpretation census")
    q.add_argument("--lattice", required=True)
    q.set_defaults(fn=cmd_census)

    q = sub.add_parser("spectral", help="spectral order on Hermitian matrices")
    q.add_argument("action", choices=["order", "qvalue"])
    q.add_argument("--A", required=True)
    q.add_argument("--B", required=True)
    q.add_argument("--conj", type=int, default=3)
    q.set_defaults(fn=cmd_spectral)

    q = sub.add_parser("demo", help="worked examples")
    q.add_argument("name", choices=["takeuti-counterexample"])
    q.add_argument("--lattice", default="mo2")
    q.set_defaults(fn=cmd_demo)
    return p


def dispatch(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    out = Out(a.json)
    try:
        code = a.fn(a, out)
    except UsageError as e:
        stderr.write(f"qsetlab {a.verb}: error: {e}\n")
        return EXIT_USAGE
    out.emit(stdout)
    return code


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
