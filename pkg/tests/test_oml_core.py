import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsetlab.oml_core import (CapacityError, LatticeError, OrthoLattice, build_boolean,
                              build_mo, center, commutant, commutator_pair, commutator_set,
                              commutes, decompose, direct_product, find_isomorphism,
                              generated_sublogic, hexagon, horizontal_sum, is_boolean,
                              is_extremely_noncommutative, is_isomorphic, lattice_from_dict,
                              load_lattice, parse_lattice_name, save_lattice, verify_axioms)

from oracles import boolean_sets


NAMES = ["bool1", "bool2", "bool3", "mo2", "mo3", "prod(bool1,mo2)", "prod(mo2,bool1)"]


@pytest.mark.parametrize("name", NAMES)
def test_constructors_are_oml(name):
    L = parse_lattice_name(name)
    assert verify_axioms(L).ok


def test_sizes():
    assert [parse_lattice_name(n).n for n in NAMES] == [2, 4, 8, 6, 8, 12, 12]


def test_boolean_matches_set_oracle():
    L = build_boolean(3)
    sets = boolean_sets(3)
    # label "ab" <-> {0, 1}
    lab = {s: ("".join("abc"[i] for i in sorted(s)) or "0") for s in sets}
    lab[frozenset(range(3))] = "1"
    for s in sets:
        for t in sets:
            assert L.label(L.meet(L.index(lab[s]), L.index(lab[t]))) == lab[s & t]
            assert L.label(L.join(L.index(lab[s]), L.index(lab[t]))) == lab[s | t]
        assert L.label(L.perp(L.index(lab[s]))) == lab[frozenset(range(3)) - s]


def test_hexagon_fails_orthomodularity():
    rep = verify_axioms(hexagon())
    assert not rep.ok
    assert rep.law == "orthomodular"


def test_non_oml_rejected_without_flag():
    H = hexagon()
    d = H.to_dict()
    with pytest.raises(LatticeError):
        lattice_from_dict(d)
    assert not lattice_from_dict(d, allow_non_oml=True).report.ok


def test_capacity():
    with pytest.raises(CapacityError):
        build_boolean(8, cap=100)


def test_commutation_mo2(mo2):
    a, b = mo2.index("a"), mo2.index("b")
    assert not commutes(mo2, a, b)
    assert commutes(mo2, a, mo2.index("a'"))
    assert commutator_pair(mo2, a, b) == mo2.bottom
    assert commutator_pair(mo2, a, mo2.index("a'")) == mo2.top
    assert sorted(mo2.label(x) for x in center(mo2)) == ["0", "1"]


def test_commutant_and_sublogic(mo2):
    a = mo2.index("a")
    assert sorted(mo2.label(x) for x in commutant(mo2, [a])) == ["0", "1", "a", "a'"]
    assert len(generated_sublogic(mo2, [a])) == 4
    assert len(generated_sublogic(mo2, ["a", "b"])) == 6
    assert len(commutant(mo2, [])) == 6


def test_extreme_noncommutativity():
    assert is_extremely_noncommutative(build_mo(2))
    assert is_extremely_noncommutative(build_mo(3))
    assert not is_extremely_noncommutative(direct_product(build_boolean(1), build_mo(2)))
    assert is_boolean(build_boolean(3)) and not is_boolean(build_mo(2))


def test_commutator_methods_agree_product(prod):
    A = [prod.index("(1,a)"), prod.index("(1,b)")]
    assert prod.label(commutator_set(prod, A, "O")) == "(1,0)"
    assert prod.label(commutator_set(prod, A, "BK")) == "(1,0)"
    assert commutator_set(prod, [], "O") == prod.top


@pytest.mark.parametrize("name", ["mo2", "mo3", "prod(bool1,mo2)", "bool3", "prod(bool2,mo2)"])
def test_commutator_methods_agree_random(name):
    L = parse_lattice_name(name)
    rng = np.random.default_rng(7)
    for _ in range(60):
        A = [int(x) for x in rng.integers(0, L.n, size=int(rng.integers(1, 4)))]
        assert commutator_set(L, A, "O") == commutator_set(L, A, "BK")


def test_decomposition(prod):
    d = decompose(prod, ["(1,a)", "(1,b)"])
    assert sorted(prod.label(x) for x in d.boolean_members) == ["(0,0)", "(1,0)"]
    assert is_isomorphic(d.nonboolean_part, build_mo(2))
    assert d.reconstruction_ok()


def test_isomorphism():
    a = direct_product(build_boolean(1), build_mo(2))
    b = direct_product(build_mo(2), build_boolean(1))
    f = find_isomorphism(a, b)
    assert f is not None
    for x in range(a.n):
        assert f[a.perp(x)] == b.perp(f[x])
    assert not is_isomorphic(build_mo(3), build_boolean(3))


def test_horizontal_sum_is_mo():
    s = horizontal_sum([build_boolean(2), build_boolean(2)])
    assert is_isomorphic(s, build_mo(2))


def test_roundtrip_file(tmp_path, prod):
    p = tmp_path / "l.json"
    save_lattice(prod, p)
    L = load_lattice(p)
    assert L.fingerprint == prod.fingerprint
    assert parse_lattice_name(f"file:{p}").fingerprint == prod.fingerprint
    json.loads(p.read_text())


def test_bad_name():
    with pytest.raises(LatticeError):
        parse_lattice_name("klein7")


def test_fingerprint_stable():
    assert build_mo(2).fingerprint == build_mo(2).fingerprint
    assert build_mo(2).fingerprint != build_boolean(2).fingerprint


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(NAMES), st.data())
def test_oml_laws_property(name, data):
    L = parse_lattice_name(name)
    x = data.draw(st.integers(0, L.n - 1))
    y = data.draw(st.integers(0, L.n - 1))
    o = L.perp
    assert o(o(x)) == x
    assert o(L.meet(x, y)) == L.join(o(x), o(y))
    if L.le(x, y):
        assert y == L.join(x, L.meet(y, o(x)))
    # commutation is symmetric
    assert commutes(L, x, y) == commutes(L, y, x)
