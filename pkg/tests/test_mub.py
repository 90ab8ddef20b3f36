import itertools
import math

import numpy as np
import pytest

from mubkit.mub import (
    Basis,
    apply_unitary,
    basis_b0a,
    basis_b0a_kform,
    check_form_equivalence,
    check_odd_pair,
    check_orthonormal,
    check_unbiased,
    check_w_eigenvectors,
    complete_set_prime,
    computational_basis,
    is_prime,
    is_product,
    kform_to_nform,
    naive_set,
    overlap_moduli,
    tensor_basis,
    triple_set,
    verify_set,
    w_basis,
    w_bases,
)
from mubkit.qdft import hadamard

S2 = 1 / math.sqrt(2)


def _random_unitary(d, rng):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _float_unbiased(b1, b2):
    m = overlap_moduli(b1.to_float(), b2.to_float())
    return np.allclose(m, 1 / math.sqrt(b1.d), atol=1e-12)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestB0a:
    def test_d2_a0(self):
        assert np.allclose(basis_b0a(2, 0).matrix, [[S2, S2], [S2, -S2]])

    def test_d2_a1(self):
        assert np.allclose(basis_b0a(2, 1).matrix, [[S2, 1j * S2], [S2, -1j * S2]])

    @pytest.mark.parametrize("d", range(2, 10))
    def test_alpha0_and_columns_of_hadamard(self, d):
        for a in range(d):
            b = basis_b0a(d, a)
            n = np.arange(d)
            v0 = np.exp(2j * np.pi * n * (d - n) * a / 2 / d) / math.sqrt(d)
            assert np.allclose(b.matrix[0], v0, atol=1e-13)
            assert np.allclose(b.matrix, hadamard(d, a).T)
            assert np.allclose(basis_b0a(d, a, exact=False).matrix, b.matrix, atol=1e-13)

    @pytest.mark.parametrize("d", range(2, 13))
    def test_orthonormal_exact(self, d):
        for a in range(d):
            v = check_orthonormal(basis_b0a(d, a))
            assert v.verdict == "identical-orthonormal"
        assert check_orthonormal(computational_basis(d)).passed

    def test_labels_and_name(self):
        b = basis_b0a(3, 4)
        assert b.name == "B01"
        assert b.labels == ((1, 0), (1, 1), (1, 2))
        assert len(b) == 3 and [v.label for v in b] == list(b.labels)


class TestKForm:
    def test_d2_a0_vector0(self):
        k = kform_to_nform(basis_b0a_kform(2, 0))
        assert k.amps[0].equals(basis_b0a(2, 0).amps[0])

    def test_d3_a1_exact(self):
        assert check_form_equivalence(3, 1, exact=True)

    def test_d5_a4_float(self):
        assert check_form_equivalence(5, 4, exact=False)

    @pytest.mark.parametrize("d", range(2, 10))
    def test_all_a(self, d):
        assert all(check_form_equivalence(d, a) for a in range(d))

    def test_detects_mismatch(self):
        # skipping the re-indexing breaks the equality for d >= 3
        raw = basis_b0a_kform(3, 1)
        assert not raw.amps.equals(basis_b0a(3, 1).amps)


class TestComputational:
    def test_examples(self):
        assert np.array_equal(computational_basis(2).matrix, np.eye(2))
        assert np.array_equal(computational_basis(3, exact=False).matrix, np.eye(3))
        assert computational_basis(1).d == 1


class TestUnbiased:
    def test_qubit_pair(self):
        v = check_unbiased(basis_b0a(2, 0), computational_basis(2))
        assert v.verdict == "unbiased" and v.witness is None

    @pytest.mark.parametrize("d", [4, 6, 8, 9, 10, 12])
    def test_b0a_vs_computational_any_d(self, d):
        for a in range(d):
            assert check_unbiased(basis_b0a(d, a), computational_basis(d)).passed

    def test_d4_witness(self):
        v = check_unbiased(basis_b0a(4, 0), basis_b0a(4, 2))
        assert not v.passed
        w = v.witness
        assert {"alpha", "beta", "modulus", "expected"} <= set(w)
        assert w["expected"] == pytest.approx(0.5)
        assert w["modulus"] != pytest.approx(0.5)
        # witness is reproducible from the float matrices
        m = overlap_moduli(basis_b0a(4, 0), basis_b0a(4, 2))
        assert m[w["alpha"], w["beta"]] == pytest.approx(w["modulus"])

    def test_float_mode_agrees(self):
        a, b = basis_b0a(4, 0, exact=False), basis_b0a(4, 2, exact=False)
        assert not check_unbiased(a, b).passed
        assert check_unbiased(basis_b0a(5, 1, False), basis_b0a(5, 3, False)).passed

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            check_unbiased(basis_b0a(2, 0), basis_b0a(3, 0))

    def test_not_orthonormal_detected(self):
        amps = np.ones((2, 2)) / math.sqrt(2)
        b = Basis(2, "custom", {}, amps)
        assert not check_orthonormal(b).passed


class TestCompleteSets:
    def test_qubit_is_pauli_eigenbases(self):
        bases = complete_set_prime(2)
        sx = np.array([[0, 1], [1, 0]])
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1, -1])
        for b, op in zip(bases, (sx, sy, sz)):
            for v in b.matrix:
                w = op @ v
                assert abs(abs(np.vdot(v, w)) - 1) < 1e-12

    def test_p3(self):
        rep = verify_set(complete_set_prime(3))
        assert len(rep.pairs) == 6 and rep.unbiased_pairs == 6 and rep.passed

    def test_p7(self):
        rep = verify_set(complete_set_prime(7), workers=4)
        assert rep.unbiased_pairs == 28 and rep.mode == "exact"

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
    def test_float_oracle(self, p):
        for b1, b2 in itertools.combinations(complete_set_prime(p, exact=False), 2):
            assert _float_unbiased(b1, b2)

    @pytest.mark.parametrize("d", [1, 4, 6, 9, 65])
    def test_non_prime_rejected(self, d):
        with pytest.raises(ValueError):
            complete_set_prime(d)

    def test_naive_d4_fails_with_witness(self):
        rep = verify_set(naive_set(4))
        assert not rep.passed
        f = rep.first_failure
        assert f is not None and f.witness is not None
        assert rep.to_dict()["passed"] is False

    def test_report_deterministic_under_workers(self):
        a = verify_set(complete_set_prime(5), workers=1).to_dict()
        b = verify_set(complete_set_prime(5), workers=6).to_dict()
        assert a == b


class TestTriplesAndOddPairs:
    def test_d6(self):
        assert verify_set(triple_set(6, 0)).passed

    def test_d4_wraps(self):
        t = triple_set(4, 3)
        assert t[1].params["a"] == 0
        assert verify_set(t).passed

    @pytest.mark.parametrize("d,a", [(9, 0), (15, 7), (3, 1)])
    def test_odd_pair(self, d, a):
        assert check_odd_pair(d, a).passed

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            check_odd_pair(4, 0)

    def test_even_a_plus_2_can_fail(self):
        assert not check_unbiased(basis_b0a(4, 0), basis_b0a(4, 2)).passed


class TestTensorAndW:
    def test_tensor_pairs(self):
        assert check_unbiased(tensor_basis(0, 0), tensor_basis(1, 1)).passed
        assert check_unbiased(tensor_basis(0, 1), tensor_basis(1, 0)).passed

    def test_four_tensor_bases_not_mutually_unbiased(self):
        bases = [tensor_basis(a, b) for a in (0, 1) for b in (0, 1)]
        assert not verify_set(bases).passed

    def test_tensor_order(self):
        b = tensor_basis(0, 1)
        assert b.labels == ((0, 0), (0, 1), (1, 0), (1, 1))
        u, v = basis_b0a(2, 0).matrix, basis_b0a(2, 1).matrix
        assert np.allclose(b.matrix[1], np.kron(u[0], v[1]))

    def test_tensor_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            tensor_basis(2, 0)
        with pytest.raises(ValueError):
            w_basis(0, 2)

    def test_w01_first_vector(self):
        lam, mu = (1 - 1j) / 2, (1 + 1j) / 2
        u, v = basis_b0a(2, 0).matrix, basis_b0a(2, 1).matrix
        want = lam * np.kron(u[0], v[0]) + mu * np.kron(u[1], v[1])
        assert np.allclose(w_basis(0, 1).matrix[0], want)

    def test_w_norms(self):
        for b in w_bases():
            assert np.allclose(np.linalg.norm(b.matrix, axis=1), 1)
            assert check_orthonormal(b).passed

    def test_ten_pairs_exact(self):
        bases = w_bases()
        rep = verify_set(bases)
        assert rep.unbiased_pairs == 10 and rep.passed
        for b1, b2 in itertools.combinations(bases, 2):
            assert np.allclose(overlap_moduli(b1, b2), 0.5, atol=1e-12)

    def test_float_mode(self):
        assert verify_set(w_bases(exact=False)).unbiased_pairs == 10

    def test_intrication(self):
        w00, w11, w01, w10, _ = w_bases()
        assert all(is_product(v) for v in w00) and all(is_product(v) for v in w11)
        assert not any(is_product(v) for v in w01) and not any(is_product(v) for v in w10)
        for v in w01:
            assert np.linalg.matrix_rank(v.value.reshape(2, 2)) == 2
        assert not any(is_product(v) for v in w_basis(0, 1, exact=False))

    def test_eigenvectors_of_tensor_operators(self):
        res = check_w_eigenvectors()
        assert res and max(res.values()) < 1e-12


def test_unitary_invariance():
    rng = np.random.default_rng(11)
    for bases in (complete_set_prime(5, exact=False), w_bases(exact=False), triple_set(6, 2, exact=False)):
        u = _random_unitary(bases[0].d, rng)
        moved = [apply_unitary(b, u) for b in bases]
        for i, j in itertools.combinations(range(len(bases)), 2):
            before = overlap_moduli(bases[i], bases[j])
            after = overlap_moduli(moved[i], moved[j])
            assert np.abs(before - after).max() < 1e-12
