"""Acceptance criteria 1-11, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` or as a script. The lines
are also repeated in the pytest terminal summary.
"""

import math
import sys
import time

import numpy as np
import pytest

from qsetlab import corpus as cp
from qsetlab import hilbert as hb
from qsetlab import interp as ip
from qsetlab import logical_ops as lops
from qsetlab.oml_core import build_mo, commutator_set, is_boolean, is_isomorphic, \
    parse_lattice_name
from qsetlab.quniverse import QuantumSubset, check_embed

CORE = ["mo2", "prod(bool1,mo2)", "bool3"]
NONBOOL = ["mo2", "prod(bool1,mo2)"]
TAU = 1e-9
RESULTS = []


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    sys.__stdout__.write("\n" + line + "\n")
    sys.__stdout__.flush()
    return ok


def test_c01_kotas_census():
    t = time.perf_counter()
    got = {n: lops.census_polynomials(parse_lattice_name(n)) for n in ("bool2", "mo2",
                                                                        "prod(bool1,mo2)")}
    dt = time.perf_counter() - t
    ok = got == {"bool2": 16, "mo2": 6, "prod(bool1,mo2)": 96} and dt < 1
    assert report(1, ok, f"census {got} in {dt:.2f}s")


def test_c02_material_implications():
    rows = []
    ok = True
    for n in NONBOOL:
        L = parse_lattice_name(n)
        res = [lops.check_conditions(lops.implication_j(L, j)) for j in range(6)]
        mat = [j for j in range(6) if all(res[j][k].holds for k in ("E", "MP", "MT", "NG"))]
        e = [j for j in range(6) if res[j]["E"].holds]
        ok &= mat == [0, 2, 3] and e == [0, 1, 2, 3, 4]
        rows.append(f"{n}: material={mat} E={e}")
    assert report(2, ok, "; ".join(rows))


def test_c03_interpretation_census():
    ok = True
    rows = []
    for n in CORE:
        L = parse_lattice_name(n)
        c = ip.interpretation_census(L)
        want = 1 if is_boolean(L) else 36
        ok &= c.distinct == want
        rows.append(f"{n}={c.distinct}")
    L = build_mo(2)
    c = ip.interpretation_census(L)
    P, Q = L.index("a"), L.index("b")
    sub = [L.label(c.sub_vals[P, Q, 6 * j]) for j in range(6)]
    mem = [L.label(c.mem_vals[P, Q, k]) for k in range(6)]
    ok &= sub == ["0", "a", "b", "a'", "b'", "1"] and mem == ["1", "a'", "b", "a", "b'", "0"]
    assert report(3, ok, f"{' '.join(rows)}; sub-list {sub}; mem-list {mem}")


def test_c04_transfer_sweep():
    t = time.perf_counter()
    entries = cp.load_corpus()
    cp.sanity_gate(entries)
    total = viol = ones = 0
    for n in CORE:
        L = parse_lattice_name(n)
        pool = cp.arg_pool(L, 3, 42)
        checked, v, o = cp.transfer_sweep(L, ip.all_standard(L), entries, pool, 2000, 42, n,
                                          halt_on_violation=False)
        total += checked
        viol += len(v)
        ones += o
    dt = time.perf_counter() - t
    ok = viol == 0 and len(entries) >= 15 and dt < 300
    assert report(4, ok, f"{len(entries)} formulas, {total} checks, {viol} violations, "
                         f"{ones} tuples with commutator 1, {dt:.1f}s")


def test_c05_necessity():
    L = parse_lattice_name("bool2")
    out = ip.non_normal_transfer_failure(L)
    names = {it.name for it, *_ in out}
    witnessed = all(r.bound == L.top and r.lhs != L.top for *_, r in out)
    rep = cp.run_transfer_suite(cp.SuiteConfig(lattices=["bool2"],
                                               interpretations=["star-join", "const-imp"],
                                               budget=500))
    per = {k: sum(v.interp == k and v.bound == "1" for v in rep.violations)
           for k in ("3,join", "const1,3")}
    ok = names == {"3,join", "const1,3"} and witnessed and all(per.values())
    assert report(5, ok, f"witnesses {sorted(names)}; sweep violations with commutator 1: {per}")


def test_c06_de_morgan_counterexample():
    r = ip.takeuti_counterexample(build_mo(2))
    L = r.lattice
    ok = L.label(r.exists_side) == "0" and L.label(r.forall_side) == "a"
    assert report(6, ok, f"exists-side {L.label(r.exists_side)}, "
                         f"negated-forall-side {L.label(r.forall_side)}")


def test_c07_de_morgan_census():
    rows = []
    ok = True
    for n in CORE:
        L = parse_lattice_name(n)
        interps = ip.all_standard(L)
        laws, _ = cp.demorgan_matrix(L, interps, budget=2000, seed=42)
        m56 = [it.name for i, it in enumerate(interps) if laws["M5"][i] and laws["M6"][i]]
        m14 = all(laws[k].all() for k in ("M1", "M2", "M3", "M4"))
        if is_boolean(L):
            good = m14 and len(m56) == 36
        else:
            good = m14 and m56 == [f"{j},{j}" for j in range(6)]
        ok &= good
        rows.append(f"{n}: M5/M6 pass {len(m56)} ({'diagonal' if not is_boolean(L) else 'all'}),"
                    f" M1-M4 {'all' if m14 else 'not all'}")
    assert report(7, ok, "; ".join(rows))


def test_c08_quantum_subset_table():
    L = build_mo(2)
    A = QuantumSubset(L, [0], ["a"])
    B = QuantumSubset(L, [0], ["b"])
    empty = check_embed(L, 0)
    sub, dm = [], []
    for j in range(6):
        it = ip.standard(L, j, j)
        sub.append(L.label(ip.truth_value(it, "a sub b", {"a": A.to_qset(), "b": B.to_qset()})))
        C = A.quantized_meet(B.complement(), lops.conjunction_j(L, j)).to_qset()
        dm.append(L.label(ip.truth_value(it, "c = e", {"c": C, "e": empty})))
    ok = sub == ["0", "a", "b", "a'", "b'", "1"] and dm == sub
    assert report(8, ok, f"[[A sub B]]_j = {sub}; [[A meet_j B' = 0]]_j = {dm}")


class TestC09Metatheory:
    parts = {}

    def _record(self, key, ok, detail):
        self.parts[key] = (ok, detail)
        if len(self.parts) == 6:
            literal_ok = self.parts["L-restriction"][0]
            all_ok = all(v[0] for v in self.parts.values())
            text = "; ".join(f"{k} {'ok' if v[0] else 'FAILS'} ({v[1]})"
                             for k, v in self.parts.items())
            if not literal_ok:
                text += " -- the literal L-restriction identity fails because the " \
                        "zero-weight marker <u,0> keeps L(u) inside L(u|p); the amended " \
                        "identity L(u|p) = (L(u)^p) u L(u) holds"
            report(9, all_ok, text)
        return ok

    def test_absoluteness(self):
        rep = cp.run_absoluteness_suite(cp.SuiteConfig(lattices=CORE, budget=400))
        assert self._record("absoluteness", rep.passed,
                            f"{rep.summary['checks']} checks, {rep.summary['failures']} failures")

    def test_restriction_principle(self):
        rep = cp.run_restriction_suite(cp.SuiteConfig(lattices=CORE, budget=2000))
        assert self._record("restriction", rep.passed,
                            f"{rep.summary['checks']} checks, {rep.summary['failures']} failures")

    def test_elementary(self):
        fails = cp.elementary_check(build_mo(2), (0, 1, 2))
        ee = cp.elementary_equivalence_failures(cp.load_corpus(), samples=50)
        assert self._record("elementary", fails == 0 and ee == 0,
                            f"membership {fails} failures, equivalence {ee} failures")

    def test_commutator_agreement(self):
        bad = total = 0
        for n in CORE + ["mo3", "prod(bool2,mo2)"]:
            L = parse_lattice_name(n)
            rng = np.random.default_rng(cp._stable_seed("com", L.fingerprint, 42))
            for _ in range(200):
                A = [int(x) for x in rng.integers(0, L.n, size=int(rng.integers(1, 5)))]
                total += 1
                bad += commutator_set(L, A, "O") != commutator_set(L, A, "BK")
        assert self._record("comO=comBK", bad == 0, f"{total} sets, {bad} disagreements")

    def test_l_restriction_amended(self):
        bad = sum(len(cp.l_restriction_failures(parse_lattice_name(n), 200, amended=True))
                  for n in CORE)
        assert self._record("L-restriction amended", bad == 0, f"{bad} failures")

    @pytest.mark.xfail(strict=True, reason="literal identity contradicts the kept marker pair")
    def test_l_restriction_literal(self):
        bad = sum(len(cp.l_restriction_failures(parse_lattice_name(n), 200)) for n in CORE)
        self._record("L-restriction", bad == 0, f"{bad} of 600 random cases fail")
        assert bad == 0


def test_c10_hilbert_identities():
    t = time.perf_counter()
    rng = np.random.default_rng(2024)
    checks = bad = 0
    for _ in range(100):
        P, Q = hb.random_structured_pair(4, rng)
        for theta in (math.pi / 7, math.pi / 3, 1.0):
            checks += 1
            bad += not hb.takeuti_theta(P, Q, theta).close_to(
                hb.takeuti_expansion(P, Q, theta), TAU)
            for j in range(6):
                for i in (0, 1):
                    checks += 1
                    bad += not hb.star_j_theta_i(j, theta, i, P, Q, TAU, strict=False)[1]
    P, Q = hb.random_rank1_pair(rng)
    c = hb.closure_generate([P, Q])
    mo2 = c.lattice.n == 6 and is_isomorphic(c.lattice, build_mo(2))
    dt = time.perf_counter() - t
    ok = bad == 0 and mo2 and dt < 30
    assert report(10, ok, f"{checks} identity checks, {bad} failures; rank-one closure "
                          f"{c.lattice.n} elements, MO2 {mo2}; {dt:.1f}s")


def test_c11_spectral_order():
    rng = np.random.default_rng(11)
    mismatches = pairs = mono_bad = mono_checked = 0
    for k in range(100):
        d = int(rng.integers(2, 5))
        if k < 50:
            A, B = hb.random_commuting_hermitian_pair(d, rng)
        else:
            A, B = hb.random_noncommuting_hermitian_pair(d, rng, positive=bool(k % 2))
        pairs += 1
        leq = hb.spectral_order_leq(A, B)
        for j in range(5):
            V = hb.q_value_order(A, B, j)
            mismatches += V.close_to(hb.identity(d), 1e-7) != leq
        positive = np.linalg.eigvalsh(A.to_float().a).min() >= -TAU
        if leq and positive:
            for n in range(1, 5):
                mono_checked += 1
                mono_bad += not hb.psd_leq(hb.matrix_power(A, n), hb.matrix_power(B, n), 1e-7)
    ok = mismatches == 0 and mono_bad == 0 and mono_checked > 0
    assert report(11, ok, f"{pairs} pairs x 5 conjunctions, {mismatches} mismatches; "
                          f"powers {mono_checked} checks, {mono_bad} failures")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
