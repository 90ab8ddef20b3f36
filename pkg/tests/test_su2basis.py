import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubkit.su2basis import (
    RaParameters,
    SpinLabel,
    build_h,
    build_v,
    check_eigen_relation,
    check_orthonormality,
    check_su2_commutators,
    eigenbasis,
    eigenvector,
    polar_generators,
    reverse_layout,
)

HALF = SpinLabel(1)
ONE = SpinLabel(2)


def q(d, x):
    return cmath.exp(2j * math.pi * x / d)


def _v_oracle(j: SpinLabel, r, a):
    """Direct transcription over |j,m> with explicit m bookkeeping."""
    d = j.d
    ms = [-j.j + n for n in range(d)]
    idx = {m: n for n, m in enumerate(ms)}
    v = np.zeros((d, d), dtype=complex)
    v[idx[-j.j], idx[j.j]] += cmath.exp(2j * math.pi * j.j * r)
    for m in ms[:-1]:
        v[idx[m + 1], idx[m]] += q(d, (j.j - m) * a)
    return v


def test_spin_label():
    assert SpinLabel.from_j("3/2") == SpinLabel(3)
    assert SpinLabel.from_j(2).d == 5
    assert list(SpinLabel(2).m_values) == [-1, 0, 1]
    with pytest.raises(ValueError):
        SpinLabel.from_j(0.25)
    with pytest.raises(ValueError):
        SpinLabel(-1)


class TestBuildV:
    def test_sigma_x(self):
        assert np.allclose(build_v(HALF, RaParameters(0, 0)), [[0, 1], [1, 0]])

    def test_qubit_a1_printed_layout(self):
        # printed layout orders |j,j> first; n-ordering puts q below the diagonal
        v = build_v(HALF, RaParameters(0, 1))
        assert np.allclose(reverse_layout(v), [[0, -1], [1, 0]])
        assert np.allclose(v, [[0, 1], [-1, 0]])

    def test_qutrit_cyclic_shift(self):
        v = build_v(ONE, RaParameters(0, 0))
        assert np.allclose(v, np.roll(np.eye(3), 1, axis=0))

    @pytest.mark.parametrize("two_j", range(0, 10))
    @pytest.mark.parametrize("r,a", [(0, 0), (0.3, 1.7), (-1.1, 2.25), (2.0, -0.5)])
    def test_matches_oracle_and_unitary(self, two_j, r, a):
        j = SpinLabel(two_j)
        v = build_v(j, RaParameters(r, a))
        assert np.allclose(v, _v_oracle(j, r, a), atol=1e-13)
        assert np.abs(v.conj().T @ v - np.eye(j.d)).max() < 1e-12

    def test_exact_matches_float(self):
        for two_j in range(1, 9):
            for a in range(two_j + 1):
                j = SpinLabel(two_j)
                assert np.allclose(build_v(j, RaParameters(0, a), exact=True).value, build_v(j, RaParameters(0, a)))

    def test_exact_requires_r0_integer_a(self):
        with pytest.raises(ValueError):
            build_v(ONE, RaParameters(0.5, 1), exact=True)
        with pytest.raises(ValueError):
            build_v(ONE, RaParameters(0, 1.5), exact=True)


class TestBuildH:
    def test_examples(self):
        assert np.allclose(np.diag(build_h(HALF)), [0, 1])
        assert np.allclose(np.diag(build_h(ONE)), [0, math.sqrt(2), math.sqrt(2)])

    @pytest.mark.parametrize("two_j", range(0, 10))
    def test_hermitian_and_vanishes_at_bottom(self, two_j):
        h = build_h(SpinLabel(two_j))
        assert h[0, 0] == 0
        assert np.allclose(h, h.conj().T)


class TestPolar:
    def test_qubit(self):
        jp, jm, jz = polar_generators(HALF, RaParameters(0, 0))
        assert np.allclose(jp, [[0, 0], [1, 0]])
        assert np.allclose(jz, np.diag([-0.5, 0.5]))
        assert np.allclose(jm, jp.conj().T)

    @pytest.mark.parametrize("two_j", range(0, 10))
    def test_jz_is_m(self, two_j):
        j = SpinLabel(two_j)
        for r, a in [(0, 0), (0.7, -1.3), (1.9, 3.1)]:
            _, _, jz = polar_generators(j, RaParameters(r, a))
            assert np.allclose(jz, np.diag(j.m_values), atol=1e-12)

    def test_spin_one_a2_commutators(self):
        rep = check_su2_commutators(*polar_generators(ONE, RaParameters(0, 2)))
        assert rep.passed

    def test_qubit_residuals_exact_zero(self):
        rep = check_su2_commutators(*polar_generators(HALF, RaParameters(0, 0)))
        assert rep.passed and rep.max_residual == 0

    def test_spin_five_halves_general(self):
        rep = check_su2_commutators(*polar_generators(SpinLabel(5), RaParameters(0.3, 1.7)), tol=1e-12)
        assert rep.passed and rep.max_residual < 1e-12

    def test_negative_control(self):
        eye = np.eye(3, dtype=complex)
        rep = check_su2_commutators(eye, eye, eye)
        assert not rep.passed
        assert rep.max_residual > 0.5

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            check_su2_commutators(np.eye(2), np.eye(3), np.eye(2))

    @pytest.mark.parametrize("two_j", range(0, 10))
    def test_v_commutes_with_casimir(self, two_j):
        j = SpinLabel(two_j)
        p = RaParameters(0.37, -2.1)
        jp, jm, jz = polar_generators(j, p)
        casimir = jp @ jm + jz @ jz - jz
        v = build_v(j, p)
        assert np.abs(v @ casimir - casimir @ v).max() < 1e-12


class TestEigenvectors:
    def test_qubit_examples(self):
        s = 1 / math.sqrt(2)
        assert np.allclose(eigenvector(HALF, RaParameters(0, 0), 0), [s, s])
        assert np.allclose(eigenvector(HALF, RaParameters(0, 0), 1), [s, -s])

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            eigenvector(HALF, RaParameters(), 2)
        with pytest.raises(ValueError):
            check_eigen_relation(HALF, RaParameters(), -1)

    def test_eigenvalue_examples(self):
        cases = [(HALF, 0, 0, 1), (HALF, 0, 1, -1), (ONE, 1, 0, q(3, 1))]
        for j, a, alpha, lam in cases:
            rep = check_eigen_relation(j, RaParameters(0, a), alpha, exact=True)
            assert rep.passed
            assert complex(*rep.checks[0].details["eigenvalue"]) == pytest.approx(lam)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 9), st.floats(-3, 3), st.floats(-3, 3), st.data())
    def test_relation_and_norm_for_real_parameters(self, two_j, r, a, data):
        j = SpinLabel(two_j)
        alpha = data.draw(st.integers(0, two_j))
        p = RaParameters(r, a)
        assert np.linalg.norm(eigenvector(j, p, alpha)) == pytest.approx(1)
        rep = check_eigen_relation(j, p, alpha, tol=1e-12)
        assert rep.passed, rep

    def test_orthonormality_examples(self):
        assert check_orthonormality(HALF, RaParameters(0, 1), exact=True).passed
        assert check_orthonormality(SpinLabel(3), RaParameters(0, 2), exact=True).passed
        g = eigenbasis(SpinLabel(3), RaParameters(0, 2))
        assert np.allclose(np.diag(g.conj() @ g.T), 1)

    @pytest.mark.parametrize("two_j", range(0, 10))
    def test_orthonormal_float_general(self, two_j):
        assert check_orthonormality(SpinLabel(two_j), RaParameters(1.3, 0.4)).passed

    def test_exact_eigenvectors_match_float(self):
        for two_j in range(1, 8):
            j = SpinLabel(two_j)
            for a in range(j.d):
                p = RaParameters(0, a)
                assert np.allclose(eigenbasis(j, p, exact=True).value, eigenbasis(j, p))
