"""Contracts of the dense kernels: tags, sorting, residuals, square roots."""

import numpy as np
import pytest

from swanson.errors import ContractViolation, NotPositiveDefinite
from swanson.linalg import (OperatorMatrix, eigendecompose_hermitian,
                            eigenvalues_general, hermitian_matrix,
                            hpd_sqrt_family, smallest_singular_value)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_matrix(a)


class TestOperatorMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(ContractViolation):
            OperatorMatrix(np.zeros((2, 3)))

    def test_rejects_bad_tag(self):
        with pytest.raises(ContractViolation):
            OperatorMatrix(np.eye(2), "banded")

    def test_hermitian_tag_requires_exact_symmetry(self):
        a = np.array([[1.0, 1e-18j], [0.0, 1.0]])
        with pytest.raises(ContractViolation):
            OperatorMatrix(a, "hermitian")

    def test_real_tridiagonal_tag(self):
        good = np.diag([1.0, 2.0, 3.0]) + np.diag([0.5, -0.5], 1)
        OperatorMatrix(good, "real-tridiagonal")
        with pytest.raises(ContractViolation):
            OperatorMatrix(good + np.diag([0.1], 2), "real-tridiagonal")
        with pytest.raises(ContractViolation):
            OperatorMatrix(good * (1 + 1j), "real-tridiagonal")

    def test_entries_are_frozen(self):
        m = OperatorMatrix(np.eye(2))
        with pytest.raises(ValueError):
            m.entries[0, 0] = 2.0


class TestHermitianEigendecomposition:
    def test_identity(self):
        dec = eigendecompose_hermitian(hermitian_matrix(np.eye(4)))
        assert np.allclose(dec.eigenvalues, 1.0, atol=0)

    def test_diagonal_sorted(self):
        dec = eigendecompose_hermitian(hermitian_matrix(np.diag([3.0, 1.0, 2.0])))
        assert np.array_equal(dec.eigenvalues.real, [1.0, 2.0, 3.0])
        assert np.all(dec.eigenvalues.imag == 0.0)

    def test_random_reconstruction(self):
        a = random_hermitian(20, seed=7)
        dec = eigendecompose_hermitian(a)
        v = dec.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(20))) <= 1e-10
        rebuilt = (v * dec.eigenvalues.real[None, :]) @ v.conj().T
        scale = np.max(np.abs(a.entries))
        assert np.max(np.abs(a.entries - rebuilt)) <= 1e-10 * scale
        assert np.all(dec.residuals <= 1e-10 * scale)

    def test_requires_tag(self):
        with pytest.raises(ContractViolation):
            eigendecompose_hermitian(OperatorMatrix(np.eye(3), "general"))

    def test_banded_eigenvalue_path_matches_dense(self):
        n = 30
        m = np.zeros((n, n), dtype=complex)
        m[np.arange(n), np.arange(n)] = np.arange(n) + 0.5
        idx = np.arange(n - 2)
        m[idx, idx + 2] = 0.3j * np.sqrt(idx + 1.0)
        m[idx + 2, idx] = np.conj(m[idx, idx + 2])
        a = OperatorMatrix(m, "hermitian")
        fast = eigendecompose_hermitian(a, eigenvectors=False)
        dense = np.linalg.eigvalsh(m)
        assert fast.eigenvectors is None
        assert np.max(np.abs(fast.eigenvalues.real - dense)) <= 1e-11


class TestGeneralEigenvalues:
    def test_triangular(self):
        a = np.triu(np.ones((3, 3), dtype=complex))
        a[0, 0], a[1, 1], a[2, 2] = 1.0, 2.0 + 1.0j, 5.0
        dec = eigenvalues_general(OperatorMatrix(a))
        assert np.allclose(sorted(dec.eigenvalues, key=lambda z: z.real),
                           [1.0, 2.0 + 1.0j, 5.0], atol=1e-12)

    def test_companion_roots(self):
        companion = np.array([[0.0, 1.0], [1.0, 0.0]])
        dec = eigenvalues_general(OperatorMatrix(companion))
        assert np.allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)

    def test_rotation_pair_sorted(self):
        a = np.array([[0.0, 1.0], [-1.0, 0.0]])
        dec = eigenvalues_general(OperatorMatrix(a))
        # ascending real part, then ascending imaginary part
        assert np.allclose(dec.eigenvalues, [-1.0j, 1.0j], atol=1e-14)

    def test_residuals_with_vectors(self):
        rng = np.random.default_rng(3)
        a = OperatorMatrix(rng.standard_normal((12, 12)))
        dec = eigenvalues_general(a, eigenvectors=True)
        assert np.allclose(np.linalg.norm(dec.eigenvectors, axis=0), 1.0,
                           atol=1e-12)
        assert np.all(dec.residuals <= 1e-12 * np.max(np.abs(a.entries)) * 12)


class TestSmallestSingularValue:
    def test_identity(self):
        assert smallest_singular_value(OperatorMatrix(np.eye(5))) == pytest.approx(1.0, abs=1e-14)

    def test_diagonal(self):
        a = OperatorMatrix(np.diag([3.0, 0.5, 2.0]))
        assert smallest_singular_value(a) == pytest.approx(0.5, abs=1e-14)

    def test_inverse_norm_oracle(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((15, 15)) + 1j * rng.standard_normal((15, 15))
        sigma = smallest_singular_value(OperatorMatrix(a))
        inv_norm = np.linalg.norm(np.linalg.inv(a), ord=2)
        assert sigma * inv_norm == pytest.approx(1.0, rel=1e-8)

    def test_lower_bounds_random_directions(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((10, 10))
        sigma = smallest_singular_value(OperatorMatrix(a))
        for _ in range(25):
            v = rng.standard_normal(10)
            v /= np.linalg.norm(v)
            assert sigma <= np.linalg.norm(a @ v) + 1e-12


class TestHpdSqrtFamily:
    def test_identity(self):
        q, q_sqrt, q_inv_sqrt = hpd_sqrt_family(hermitian_matrix(np.eye(3)))
        for m in (q, q_sqrt, q_inv_sqrt):
            assert np.allclose(m.entries, np.eye(3), atol=1e-14)
            assert m.structure_tag == "hermitian"

    def test_diagonal_convention(self):
        q, q_sqrt, q_inv_sqrt = hpd_sqrt_family(hermitian_matrix(np.diag([4.0, 9.0])))
        assert np.allclose(np.diag(q.entries).real, [0.25, 1.0 / 9.0], atol=1e-14)
        assert np.allclose(np.diag(q_sqrt.entries).real, [0.5, 1.0 / 3.0], atol=1e-14)
        assert np.allclose(np.diag(q_inv_sqrt.entries).real, [2.0, 3.0], atol=1e-14)

    def test_residuals_and_commutation(self):
        rng = np.random.default_rng(17)
        b = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        q_inv = hermitian_matrix(b @ b.conj().T + 0.5 * np.eye(8))
        q, q_sqrt, q_inv_sqrt = hpd_sqrt_family(q_inv)
        w = np.linalg.eigvalsh(q_inv.entries)
        kappa = w[-1] / w[0]
        assert np.max(np.abs(q.entries @ q_inv.entries - np.eye(8))) <= 1e-10 * kappa
        assert np.max(np.abs(q_sqrt.entries @ q_sqrt.entries - q.entries)) <= 1e-10 * kappa
        assert np.max(np.abs(q_inv_sqrt.entries @ q_inv_sqrt.entries
                             - q_inv.entries)) <= 1e-10 * kappa
        for m in (q, q_sqrt, q_inv_sqrt):
            comm = m.entries @ q_inv.entries - q_inv.entries @ m.entries
            assert np.max(np.abs(comm)) <= 1e-10 * kappa

    def test_gram_self_consistency(self):
        from swanson.waveform import gram_matrix
        gram = gram_matrix(0.5, 8)
        gap = np.max(np.abs(gram.Q_sqrt.entries @ gram.Q_sqrt.entries
                            - gram.Q.entries))
        assert gap <= 1e-10

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite) as err:
            hpd_sqrt_family(hermitian_matrix(np.diag([1.0, -2.0])))
        assert err.value.eigenvalue == pytest.approx(-2.0)
