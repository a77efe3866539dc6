"""Truncated-matrix construction: shift algebra, pentadiagonal Hamiltonian,
parity blocks, ladder pair, and the explicit ground vector."""

import math

import numpy as np
import pytest

from swanson.errors import ContractViolation, TruncationTailError
from swanson.linalg import eigenvalues_general
from swanson.oscillator import (LadderPair, ModelConfig, analytic_spectrum,
                                build_hamiltonian, build_ladder,
                                build_quadratic_generators,
                                build_shift_matrices, eta_parameter,
                                excited_vector, ground_vector, parity_split)


def leading_max(m, k):
    return np.max(np.abs(np.asarray(m)[:k, :k]))


class TestModelConfig:
    def test_gamma_range(self):
        ModelConfig(0.0, 2)
        ModelConfig(-0.999, 2)
        with pytest.raises(ContractViolation):
            ModelConfig(1.0, 10)
        with pytest.raises(ContractViolation):
            ModelConfig(0.5, 1)

    def test_omega(self):
        assert ModelConfig(0.5, 2).omega == pytest.approx(math.sqrt(1.25), abs=0)


class TestShiftMatrices:
    def test_dim2_display(self):
        b, bt = build_shift_matrices(ModelConfig(0.3, 2))
        assert np.array_equal(b.entries.real, [[0.0, 1.0], [0.0, 0.0]])
        assert np.array_equal(bt.entries, b.entries.T)

    def test_dim3_entry(self):
        b, _ = build_shift_matrices(ModelConfig(0.0, 3))
        assert b.entries[1, 2] == pytest.approx(math.sqrt(2.0), abs=0)

    def test_canonical_commutator_leading_block(self):
        b, bt = build_shift_matrices(ModelConfig(0.2, 4))
        comm = b.entries @ bt.entries - bt.entries @ b.entries
        assert leading_max(comm - np.eye(4), 3) == 0.0


class TestQuadraticGenerators:
    def test_two_step_raiser_entries(self):
        _, a_plus, _ = build_quadratic_generators(ModelConfig(0.1, 4))
        assert a_plus.entries[2, 0] == pytest.approx(math.sqrt(2.0), rel=1e-15)
        _, a_plus5, _ = build_quadratic_generators(ModelConfig(0.1, 5))
        assert a_plus5.entries[3, 1] == pytest.approx(math.sqrt(6.0), rel=1e-15)

    def test_commutators(self):
        a0, a_plus, a_minus = build_quadratic_generators(ModelConfig(0.4, 6))
        up = a0.entries @ a_plus.entries - a_plus.entries @ a0.entries
        down = a0.entries @ a_minus.entries - a_minus.entries @ a0.entries
        assert leading_max(up - 2.0 * a_plus.entries, 4) == 0.0
        assert leading_max(down + 2.0 * a_minus.entries, 4) == 0.0


class TestHamiltonian:
    def test_diagonal(self):
        h = build_hamiltonian(ModelConfig(0.7, 3))
        assert np.array_equal(np.diag(h.entries).real, [0.5, 1.5, 2.5])

    def test_off_diagonal_signs(self):
        h = build_hamiltonian(ModelConfig(0.5, 4)).entries
        assert h[0, 2] == pytest.approx(-0.25 * math.sqrt(2.0), abs=0)
        assert h[2, 0] == pytest.approx(+0.25 * math.sqrt(2.0), abs=0)

    def test_band_structure(self):
        op = build_hamiltonian(ModelConfig(0.5, 12))
        assert op.structure_tag == "pentadiagonal"
        h = op.entries
        assert np.all(h.imag == 0.0)
        assert np.all(np.diagonal(h, 1) == 0.0)
        assert np.all(np.diagonal(h, -1) == 0.0)
        for off in range(3, 12):
            assert np.all(np.diagonal(h, off) == 0.0)

    def test_gamma_zero_reduces_to_oscillator(self):
        h = build_hamiltonian(ModelConfig(0.0, 10))
        assert np.array_equal(h.entries, h.entries.conj().T)
        w = np.linalg.eigvalsh(h.entries)
        assert np.allclose(w, np.arange(10) + 0.5, atol=1e-13)

    def test_parity_commutes_exactly(self):
        h = build_hamiltonian(ModelConfig(0.6, 9)).entries
        j = np.diag((-1.0) ** np.arange(9)).astype(complex)
        assert np.array_equal(j @ h @ j, h)


class TestParitySplit:
    def test_even_odd_diagonals(self):
        h_even, h_odd = parity_split(build_hamiltonian(ModelConfig(0.5, 6)))
        assert np.array_equal(np.diag(h_even.entries).real, [0.5, 2.5, 4.5])
        assert np.array_equal(np.diag(h_odd.entries).real, [1.5, 3.5, 5.5])

    def test_antisymmetric_off_diagonals(self):
        h_even, h_odd = parity_split(build_hamiltonian(ModelConfig(0.5, 10)))
        for block in (h_even.entries.real, h_odd.entries.real):
            assert np.array_equal(np.diagonal(block, 1), -np.diagonal(block, -1))

    def test_spectrum_union_matches(self):
        h = build_hamiltonian(ModelConfig(0.5, 40))
        h_even, h_odd = parity_split(h)
        full = np.sort_complex(eigenvalues_general(h).eigenvalues)
        split = np.sort_complex(np.concatenate([
            eigenvalues_general(h_even).eigenvalues,
            eigenvalues_general(h_odd).eigenvalues]))
        assert np.max(np.abs(full - split)) <= 1e-10

    def test_requires_pentadiagonal_tag(self):
        from swanson.linalg import OperatorMatrix
        with pytest.raises(ContractViolation):
            parity_split(OperatorMatrix(np.eye(4), "general"))


class TestAnalyticSpectrum:
    def test_harmonic_case(self):
        assert np.array_equal(analytic_spectrum(ModelConfig(0.0, 4), 2),
                              [0.5, 1.5, 2.5])

    def test_lowest_and_spacing(self):
        cfg = ModelConfig(0.5, 4)
        vals = analytic_spectrum(cfg, 3)
        assert vals[0] == pytest.approx(0.5590169944, abs=1e-10)
        assert np.allclose(np.diff(vals), 1.1180339887, atol=1e-10)


class TestLadder:
    def test_gamma_zero_collapse(self):
        cfg = ModelConfig(0.0, 8)
        ladder = build_ladder(cfg)
        b, bt = build_shift_matrices(cfg)
        assert np.allclose(ladder.D.entries, b.entries, atol=1e-15)
        assert np.allclose(ladder.D_ddag.entries, bt.entries, atol=1e-15)

    def test_commutation_and_factorization(self):
        cfg = ModelConfig(0.5, 50)
        ladder = build_ladder(cfg)
        d, dd = ladder.D.entries, ladder.D_ddag.entries
        h = build_hamiltonian(cfg).entries
        om = cfg.omega
        assert leading_max(d @ dd - dd @ d - np.eye(50), 48) <= 1e-12
        assert leading_max(h @ dd - dd @ h - om * dd, 48) <= 1e-10
        assert leading_max(h @ d - d @ h + om * d, 48) <= 1e-10
        assert leading_max(h - om * (dd @ d + 0.5 * np.eye(50)), 48) <= 1e-10

    def test_eta(self):
        assert eta_parameter(0.5) == pytest.approx(-0.2360679775, abs=1e-10)
        assert eta_parameter(0.0) == 0.0
        ladder = build_ladder(ModelConfig(0.5, 4))
        assert isinstance(ladder, LadderPair)
        assert ladder.eta == eta_parameter(0.5)
        assert set(ladder.coefficients) == {"D", "D_ddag"}


class TestGroundVector:
    def test_gamma_zero_is_first_basis_vector(self):
        v = ground_vector(ModelConfig(0.0, 6))
        assert np.array_equal(v, np.eye(6)[0])

    def test_component_pattern(self):
        cfg = ModelConfig(0.5, 12)
        v = ground_vector(cfg)
        eta = eta_parameter(0.5)
        assert v[0] == 1.0
        assert np.all(v[1::2] == 0.0)
        # entry 2k = eta^k sqrt((2k-1)!!/(2k)!!)
        for k in (1, 2, 3, 4):
            num = math.prod(range(1, 2 * k, 2))
            den = math.prod(range(2, 2 * k + 1, 2))
            assert v[2 * k] == pytest.approx(eta ** k * math.sqrt(num / den),
                                             rel=1e-14)

    def test_annihilation_and_rayleigh(self):
        cfg = ModelConfig(0.5, 60)
        v = ground_vector(cfg)
        d = build_ladder(cfg).D.entries
        h = build_hamiltonian(cfg).entries
        nv = np.linalg.norm(v)
        assert np.linalg.norm((d @ v)[:-2]) <= 1e-10 * nv
        r = h @ v - 0.5590169943749474 * v
        assert np.linalg.norm(r[:-2]) / nv <= 1e-9


class TestExcitedVector:
    def test_zeroth_power(self):
        cfg = ModelConfig(0.5, 40)
        assert np.array_equal(excited_vector(cfg, 0),
                              ground_vector(cfg).astype(complex))

    def test_hermitian_ladder_hits_basis_vector(self):
        cfg = ModelConfig(0.0, 20)
        v = excited_vector(cfg, 3)
        v = v / np.linalg.norm(v)
        assert abs(abs(v[3]) - 1.0) <= 1e-14

    def test_eigen_residual(self):
        cfg = ModelConfig(0.5, 80)
        v = excited_vector(cfg, 2)
        h = build_hamiltonian(cfg).entries
        lam = 2.5 * cfg.omega
        r = h @ v - lam * v
        assert np.linalg.norm(r[:-8]) / np.linalg.norm(v) <= 1e-8

    def test_tail_contamination_error(self):
        with pytest.raises(TruncationTailError):
            excited_vector(ModelConfig(0.9, 10), 4)


def test_truncated_spectrum_converges_to_closed_form():
    cfg = ModelConfig(0.5, 60)
    h1 = build_hamiltonian(cfg)
    h2 = build_hamiltonian(ModelConfig(0.5, 120))
    w1 = eigenvalues_general(h1).eigenvalues[:3]
    w2 = eigenvalues_general(h2).eigenvalues[:3]
    assert np.max(np.abs(w1 - w2)) <= 1e-8
    assert np.max(np.abs(w2.real - analytic_spectrum(cfg, 2))) <= 1e-8
