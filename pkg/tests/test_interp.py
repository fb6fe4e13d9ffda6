import numpy as np
import pytest

from qsetlab import formula as fm
from qsetlab import interp as ip
from qsetlab.oml_core import build_boolean, build_mo, commutant, generated_sublogic
from qsetlab.quniverse import (QuantumSubset, check_embed, p_tilde, qset, random_qset,
                               zero_check)
from qsetlab.logical_ops import conjunction_j


def test_basic_values(mo2):
    it = ip.standard(mo2, 3, 3)
    z, a = zero_check(mo2), p_tilde(mo2, "a")
    tv = lambda f, **env: mo2.label(ip.truth_value(it, f, env))  # noqa: E731
    assert tv("u = u", u=z) == "1"
    assert tv("u in z", u=a, z=z) == "0"
    assert tv("z in a", z=z, a=a) == "a"
    assert tv("z = a", z=z, a=a) == "a'"


def test_interp_ids(mo2):
    assert ip.parse_interp_id(mo2, "sasaki").name == "3,3"
    assert ip.parse_interp_id(mo2, "takeuti").name == "3,5"
    with pytest.raises(ValueError):
        ip.parse_interp_id(mo2, "7,1")
    assert all(it.normal for it in ip.all_standard(mo2))
    assert not ip.star_join(mo2).normal and not ip.const_imp(mo2).normal
    assert sum(it.self_dual for it in ip.all_standard(mo2)) == 6


def test_unbounded_rejected(mo2):
    ev = ip.Evaluator([ip.standard(mo2, 3, 3)])
    with pytest.raises(fm.UnsupportedConstruct):
        ev.evaluate(fm.parse("E y . y in u"), {"u": zero_check(mo2)})


def test_bank_matches_single(prod, rng):
    interps = ip.all_standard(prod)
    ev = ip.Evaluator(interps)
    f = fm.parse("A y in u . y in v | v sub u")
    for _ in range(20):
        env = {"u": random_qset(prod, rng, 2, 2), "v": random_qset(prod, rng, 2, 2)}
        vals = ev.evaluate(f, env)
        for k in (0, 7, 21, 35):
            assert vals[k] == ip.truth_value(interps[k], f, env)


def test_transfer_examples(mo2):
    it = ip.standard(mo2, 3, 5)
    r = ip.transfer_check(it, "x1 = x1", [p_tilde(mo2, "a")])
    assert r and r.lhs == mo2.top


def test_takeuti_counterexample(mo2, prod):
    rep = ip.takeuti_counterexample(mo2)
    assert mo2.label(rep.exists_side) == "0" and mo2.label(rep.forall_side) == "a"
    rep = ip.takeuti_counterexample(prod)
    assert rep.ok and prod.label(rep.P) == "(0,a)"
    with pytest.raises(ip.NoCounterexample):
        ip.takeuti_counterexample(build_boolean(2))


def test_dmsc0_values(mo2):
    f = "x1 sub x2 <-> !(E x in x1 . !(x in x2))"
    env = {"x1": p_tilde(mo2, "a"), "x2": p_tilde(mo2, "b")}
    assert mo2.label(ip.truth_value(ip.standard(mo2, 3, 3), f, env)) == "1"
    assert mo2.label(ip.truth_value(ip.standard(mo2, 3, 5), f, env)) == "a'"


def test_census(mo2, prod, bool3):
    for L in (mo2, prod):
        c = ip.interpretation_census(L)
        assert c.distinct == 36 and c.self_dual_count == 6
    assert ip.interpretation_census(bool3).distinct == 1


def test_discriminator_lists(mo2):
    c = ip.interpretation_census(mo2)
    a, b = mo2.index("a"), mo2.index("b")
    sub = [mo2.label(c.sub_vals[a, b, 6 * j]) for j in range(6)]
    mem = [mo2.label(c.mem_vals[a, b, k]) for k in range(6)]
    assert sub == ["0", "a", "b", "a'", "b'", "1"]
    assert mem == ["1", "a'", "b", "a", "b'", "0"]


def test_collapse(mo2, bool3):
    vac, w = ip.boolean_collapse_check(bool3, ip.standard(bool3, 3, 3))
    assert vac and w is None
    vac, w = ip.boolean_collapse_check(mo2, ip.standard(mo2, 3, 3))
    assert not vac and w[2] != mo2.top


def test_non_normal_failures(bool2):
    out = ip.non_normal_transfer_failure(bool2)
    assert {it.name for it, *_ in out} == {"3,join", "const1,3"}
    for _, _, _, r in out:
        assert r.bound == bool2.top and r.lhs != bool2.top


def test_absoluteness(mo2, rng):
    R = sorted(generated_sublogic(mo2, ["a"]))
    it = ip.standard(mo2, 2, 4)
    for _ in range(20):
        args = [random_qset(mo2, rng, 2, 2, weights=R) for _ in range(2)]
        ok, _, _ = ip.absoluteness_check(it, "x1 sub x2 -> x2 in x1", args, R)
        assert ok


def test_restriction_principle(prod, rng):
    it = ip.standard(prod, 1, 4)
    for _ in range(20):
        args = [random_qset(prod, rng, 2, 2) for _ in range(2)]
        from qsetlab.quniverse import joint_support
        for p in commutant(prod, joint_support(args)):
            ok, _, _ = ip.restriction_check(it, "x1 in x2 | x2 = x1", args, p)
            assert ok


def test_quantum_subset_table(mo2):
    A = QuantumSubset(mo2, [0], ["a"])
    B = QuantumSubset(mo2, [0], ["b"])
    empty = check_embed(mo2, 0)
    got_sub, got_eq = [], []
    for j in range(6):
        it = ip.standard(mo2, j, j)
        got_sub.append(mo2.label(ip.truth_value(it, "a sub b", {"a": A.to_qset(),
                                                                 "b": B.to_qset()})))
        C = A.quantized_meet(B.complement(), conjunction_j(mo2, j)).to_qset()
        got_eq.append(mo2.label(ip.truth_value(it, "c = e", {"c": C, "e": empty})))
    assert got_sub == ["0", "a", "b", "a'", "b'", "1"]
    assert got_eq == got_sub
