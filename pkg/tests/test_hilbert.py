import math
from fractions import Fraction

import numpy as np
import pytest

from qsetlab import hilbert as hb
from qsetlab.hilbert import GaussianRational as GR
from qsetlab.oml_core import build_mo, is_isomorphic, verify_axioms

from oracles import mat_join, mat_meet

THETAS = (math.pi / 7, math.pi / 3, 1.0)


def test_gaussian_rational_arithmetic():
    z = GR(Fraction(1, 2), Fraction(-3, 4))
    assert z * z.conjugate() == GR(Fraction(13, 16), 0)
    assert z + GR(Fraction(1, 2), Fraction(3, 4)) == GR(1, 0)


def test_exact_mo2_closure():
    P = hb.exact_matrix([[1, 0], [0, 0]])
    Q = hb.exact_matrix([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]])
    c = hb.closure_generate([P, Q])
    assert c.lattice.n == 6
    assert verify_axioms(c.lattice).ok
    assert is_isomorphic(c.lattice, build_mo(2))


def test_float_rank1_closure(rng):
    for _ in range(5):
        P, Q = hb.random_rank1_pair(rng)
        c = hb.closure_generate([P, Q])
        assert is_isomorphic(c.lattice, build_mo(2))


def test_meet_join_against_svd_oracle(rng):
    for _ in range(20):
        P, Q = hb.random_structured_pair(4, rng)
        p, q = P.to_float().a.real, Q.to_float().a.real
        m = hb.proj_meet(P, Q).a
        j = hb.proj_join(P, Q).a
        # oracle works over R; compare only on real pairs
        if np.allclose(P.a.imag, 0) and np.allclose(Q.a.imag, 0):
            assert np.allclose(m, mat_meet(p, q), atol=1e-8)
            assert np.allclose(j, mat_join(p, q), atol=1e-8)
        assert hb.proj_leq(hb.proj_meet(P, Q), P)
        assert hb.proj_leq(Q, hb.proj_join(P, Q))


def test_exact_meet_is_exact():
    P = hb.exact_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    Q = hb.exact_matrix([[0, 0, 0], [0, 1, 0], [0, 0, 1]])
    M = hb.proj_meet(P, Q)
    assert M.exact and M == hb.exact_matrix([[0, 0, 0], [0, 1, 0], [0, 0, 0]])


def test_commutator_of_commuting_pair_is_identity():
    P = hb.exact_matrix([[1, 0], [0, 0]])
    Q = hb.exact_matrix([[0, 0], [0, 1]])
    assert hb.commutator(P, Q) == hb.identity(2, exact=True)


@pytest.mark.parametrize("theta", THETAS)
def test_takeuti_identities_sample(theta):
    rng = np.random.default_rng(99)
    for _ in range(10):
        P, Q = hb.random_structured_pair(4, rng)
        assert hb.takeuti_theta(P, Q, theta).close_to(hb.takeuti_expansion(P, Q, theta), 1e-9)
        for j in range(6):
            for i in (0, 1):
                _, ok = hb.star_j_theta_i(j, theta, i, P, Q, strict=False)
                assert ok, (j, i)


def test_printed_forms_fail_at_zero_angle():
    rng = np.random.default_rng(5)
    P, Q = hb.random_rank1_pair(rng)
    bad = [(j, i) for j, i in ((2, 0), (4, 0), (1, 1), (3, 1))
           if not hb.printed_closed_form(j, 0.0, i, P, Q).close_to(
               hb.star_j_theta_i_raw(j, 0.0, i, P, Q), 1e-9)]
    assert bad


def test_strict_mode_raises(monkeypatch):
    rng = np.random.default_rng(5)
    P, Q = hb.random_rank1_pair(rng)
    monkeypatch.setattr(hb, "closed_form", lambda j, t, i, P, Q: hb.zeros(P.d))
    with pytest.raises(hb.NumericalIntegrityError):
        hb.star_j_theta_i(2, 0.0, 0, P, Q)


def test_spectral_family_reconstructs(rng):
    for _ in range(10):
        A, _ = hb.random_noncommuting_hermitian_pair(3, rng)
        F = hb.spectral_family(A)
        assert F.reconstruct().close_to(A, 1e-8)


def test_spectral_order_basic():
    A = hb.ComplexMatrix(np.diag([1.0, 2.0]), False)
    B = hb.ComplexMatrix(np.diag([2.0, 3.0]), False)
    assert hb.spectral_order_leq(A, B) and not hb.spectral_order_leq(B, A)
    assert hb.q_value_order(A, B, 5).close_to(hb.identity(2), 1e-9)
    assert hb.q_value_order(B, A, 5).close_to(hb.zeros(2), 1e-9)


def test_qvalue_direct_and_closure_agree(rng):
    for _ in range(8):
        A, B = hb.random_noncommuting_hermitian_pair(2, rng)
        for j in range(5):
            assert hb.q_value_order(A, B, j).close_to(hb.q_value_order(A, B, j, "direct"), 1e-7)


def test_matrix_file_roundtrip(tmp_path):
    M = hb.exact_matrix([[Fraction(1, 3), GR(0, 1)], [GR(0, -1), 2]])
    p = tmp_path / "m.json"
    hb.save_matrix(M, p)
    assert hb.load_matrix(p) == M
    F = hb.ComplexMatrix(np.array([[1.5, 0.25j], [-0.25j, 0.0]]), False)
    hb.save_matrix(F, p)
    assert hb.load_matrix(p).close_to(F, 1e-15)


def test_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        hb.ComplexMatrix(np.array([[np.nan]]), False)
