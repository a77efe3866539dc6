"""The sigma_min kernel against the dense SVD oracle, plus backend
equivalence, conjugation symmetry, and determinism."""

import subprocess
import sys

import numpy as np
import pytest

from swanson import _sigma
from swanson.oscillator import ModelConfig, build_hamiltonian


@pytest.fixture(scope="module")
def bands40():
    h = build_hamiltonian(ModelConfig(0.5, 40)).entries
    return _sigma.bands_from_dense(h), h.real


def test_matches_svd_oracle(bands40):
    bands, h = bands40
    re = np.linspace(-1.0, 6.0, 6)
    im = np.linspace(-2.5, 2.5, 5)
    grid = _sigma.sigma_min_grid(bands, re, im)
    eye = np.eye(40)
    for r, y in enumerate(im):
        for c, x in enumerate(re):
            oracle = np.linalg.svd(complex(x, y) * eye - h,
                                   compute_uv=False)[-1]
            assert grid[r, c] == pytest.approx(oracle, rel=1e-8, abs=1e-14)


def test_conjugation_symmetry_bitwise(bands40):
    bands, _ = bands40
    re = np.linspace(0.0, 4.0, 5)
    im = np.linspace(-3.0, 3.0, 7)
    grid = _sigma.sigma_min_grid(bands, re, im)
    assert np.array_equal(grid, grid[::-1, :])


def test_determinism(bands40):
    bands, _ = bands40
    re = np.linspace(-0.5, 3.0, 4)
    im = np.linspace(0.0, 2.0, 3)
    a = _sigma.sigma_min_grid(bands, re, im)
    b = _sigma.sigma_min_grid(bands, re, im)
    assert np.array_equal(a, b)


def test_near_singular_at_eigenvalue(bands40):
    bands, h = bands40
    lam = np.sort_complex(np.linalg.eigvals(h))[0]
    val = _sigma.sigma_min_points(bands, [lam])[0]
    assert val <= 1e-10


def test_numpy_backend_agrees(bands40):
    bands, _ = bands40
    re = np.linspace(-1.0, 5.0, 5)
    im = np.linspace(-2.0, 2.0, 5)
    q0 = _sigma._start_vector(bands[2].shape[0])
    via_numpy = _sigma._grid_numpy(*bands, re, im, q0,
                                   _sigma.DEFAULT_MAX_ITER, _sigma.DEFAULT_RTOL)
    dispatched = _sigma.sigma_min_grid(bands, re, im)
    assert np.max(np.abs(via_numpy - dispatched)
                  / np.maximum(dispatched, 1e-14)) <= 1e-9


def test_env_flag_selects_numpy_backend():
    import os
    code = "import swanson._sigma as s; print(s.active_backend())"
    env = dict(os.environ, SWANSON_PURE_NUMPY="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_rejects_wide_band():
    with pytest.raises(Exception):
        _sigma.bands_from_dense(np.ones((6, 6)))


def test_small_dims():
    h = build_hamiltonian(ModelConfig(0.3, 2)).entries
    bands = _sigma.bands_from_dense(h)
    val = _sigma.sigma_min_points(bands, [1.0 + 0.5j])[0]
    oracle = np.linalg.svd((1.0 + 0.5j) * np.eye(2) - h.real,
                           compute_uv=False)[-1]
    assert val == pytest.approx(oracle, rel=1e-10)
