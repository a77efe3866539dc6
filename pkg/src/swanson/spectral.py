"""Non-normal spectral diagnostics on truncations: converged spectra,
pseudospectrum grids, numerical-range boundaries via support functions,
accretivity checks, and the eigenvector-conditioning proxy for the
failure of Riesz basicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _sigma
from .errors import ContractViolation, ConvergenceFailure
from .linalg import (OperatorMatrix, eigendecompose_hermitian,
                     eigenvalues_general, smallest_singular_value)
from .oscillator import ModelConfig, build_hamiltonian

__all__ = [
    "PseudospectrumGrid",
    "NumericalRangeBoundary",
    "AccretivityReport",
    "HyperbolaComparison",
    "DiscrepancyRecord",
    "DEFAULT_REGION",
    "converged_spectrum",
    "pseudospectrum",
    "support_function",
    "numerical_range_boundary",
    "hyperbola_reference",
    "accretivity_check",
    "basis_quality",
]

#: Default complex window for pseudospectrum grids (covers the first ~10
#: eigenvalues for |gamma| < 1).
DEFAULT_REGION = (-2.0, 14.0, -7.0, 7.0)


def converged_spectrum(cfg: ModelConfig, n_wanted: int, *, tol: float = 1e-8,
                       max_dim: int = 800) -> list[tuple[complex, float]]:
    """The n_wanted smallest-real-part eigenvalues of the truncation,
    with |lambda(N) - lambda(2N)| as the per-eigenvalue error estimate.

    The truncation is doubled until every estimate drops below ``tol``;
    failure to converge by ``max_dim`` raises, listing the offenders.
    """
    if n_wanted < 1:
        raise ContractViolation("n_wanted must be >= 1")
    n = max(cfg.dim, 2 * n_wanted)
    while True:
        low = _lowest_eigenvalues(cfg.gamma, n, n_wanted)
        high = _lowest_eigenvalues(cfg.gamma, 2 * n, n_wanted)
        estimates = np.abs(low - high)
        if np.all(estimates <= tol):
            return [(complex(v), float(e)) for v, e in zip(high, estimates)]
        if 2 * n >= max_dim:
            bad = [int(i) for i in np.nonzero(estimates > tol)[0]]
            raise ConvergenceFailure(
                f"eigenvalues {bad} not converged to {tol} at dim {2 * n}",
                indices=bad)
        n *= 2


def _lowest_eigenvalues(gamma: float, dim: int, count: int) -> np.ndarray:
    h = build_hamiltonian(ModelConfig(gamma, dim))
    return eigenvalues_general(h).eigenvalues[:count]


@dataclass(frozen=True, eq=False)
class PseudospectrumGrid:
    """sigma_min(z I - H) sampled on a rectangular grid; row r of
    ``sigma_min`` belongs to ``im_nodes[r]``."""

    re_nodes: np.ndarray
    im_nodes: np.ndarray
    sigma_min: np.ndarray
    dim_used: int
    gamma: float

    @property
    def resolution(self) -> tuple[int, int]:
        return (self.im_nodes.shape[0], self.re_nodes.shape[0])


def pseudospectrum(cfg: ModelConfig, region: tuple[float, float, float, float]
                   = DEFAULT_REGION, resolution: int = 200) -> PseudospectrumGrid:
    """Grid of sigma_min(z I - H_N) over the closed rectangle ``region``
    = (re_min, re_max, im_min, im_max), ``resolution`` nodes per axis.

    Rows are computed independently (kernel parallelizes over them); the
    result does not depend on scheduling order.
    """
    re0, re1, im0, im1 = region
    if not (re1 > re0 and im1 > im0):
        raise ContractViolation("pseudospectrum region must be non-degenerate")
    if resolution < 2:
        raise ContractViolation("resolution must be >= 2")
    h = build_hamiltonian(cfg)
    bands = _sigma.bands_from_dense(h.entries)
    re_nodes = np.linspace(re0, re1, resolution)
    im_nodes = np.linspace(im0, im1, resolution)
    grid = _sigma.sigma_min_grid(bands, re_nodes, im_nodes)
    return PseudospectrumGrid(re_nodes, im_nodes, grid, cfg.dim, cfg.gamma)


def _realpart_matrix(cfg: ModelConfig, theta: float) -> OperatorMatrix:
    """Hermitian part of e^{-i theta} H_N: cos(theta) (A0 + I/2)
    + sin(theta) * i * gamma (A- - A+)/2, assembled exactly hermitian."""
    n = cfg.dim
    m = np.zeros((n, n), dtype=np.complex128)
    diag = math.cos(theta) * (np.arange(n) + 0.5)
    m[np.arange(n), np.arange(n)] = diag
    idx = np.arange(n - 2)
    upper = 1j * math.sin(theta) * 0.5 * cfg.gamma * np.sqrt((idx + 1.0) * (idx + 2.0))
    m[idx, idx + 2] = upper
    m[idx + 2, idx] = np.conj(upper)
    return OperatorMatrix(m, "hermitian")


def support_function(cfg: ModelConfig, thetas, *, dim: int | None = None) -> np.ndarray:
    """h(theta) = smallest eigenvalue of Re(e^{-i theta} H_N) for each
    angle; the angles must lie strictly inside (-pi/2, pi/2)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if np.any(np.abs(thetas) >= math.pi / 2):
        raise ContractViolation("support angles must satisfy |theta| < pi/2")
    use = cfg if dim is None else ModelConfig(cfg.gamma, dim)
    out = np.empty(thetas.shape[0])
    for k, theta in enumerate(thetas):
        dec = eigendecompose_hermitian(_realpart_matrix(use, float(theta)),
                                       eigenvectors=False)
        out[k] = dec.eigenvalues[0].real
    return out


@dataclass(frozen=True, eq=False)
class NumericalRangeBoundary:
    """Support-function samples of the numerical range and the boundary
    points reconstructed from adjacent support lines."""

    thetas: np.ndarray
    support_values: np.ndarray
    support_estimates: np.ndarray
    boundary_points: np.ndarray
    dim_used: int
    gamma: float


def numerical_range_boundary(cfg: ModelConfig, theta_count: int = 81
                             ) -> NumericalRangeBoundary:
    """Trace the lower boundary of W(H_N) with ``theta_count`` symmetric
    support angles.

    Support values are taken at dim 2N with |h_N - h_2N| reported as the
    truncation estimate; boundary point k is the intersection of the
    support lines at thetas[k] and thetas[k+1].  The default window stays
    inside |tan theta| < 1/|gamma|, where the truncation support values
    actually converge (outside, they sink linearly with dim and the
    estimate reports it).
    """
    if theta_count < 3:
        raise ContractViolation("theta_count must be >= 3")
    opening = math.pi / 2 if cfg.gamma == 0.0 else math.atan(1.0 / abs(cfg.gamma))
    limit = opening * theta_count / (theta_count + 1)
    thetas = np.linspace(-limit, limit, theta_count)
    coarse = support_function(cfg, thetas)
    fine = support_function(cfg, thetas, dim=2 * cfg.dim)
    estimates = np.abs(coarse - fine)
    x = np.empty(theta_count - 1)
    y = np.empty(theta_count - 1)
    for k in range(theta_count - 1):
        t0, t1 = thetas[k], thetas[k + 1]
        h0, h1 = fine[k], fine[k + 1]
        det = math.sin(t1 - t0)
        x[k] = (h0 * math.sin(t1) - math.sin(t0) * h1) / det
        y[k] = (math.cos(t0) * h1 - h0 * math.cos(t1)) / det
    return NumericalRangeBoundary(thetas, fine, estimates, x + 1j * y,
                                  cfg.dim, cfg.gamma)


@dataclass(frozen=True, eq=False)
class DiscrepancyRecord:
    name: str
    computed: float
    printed: float
    delta: float
    flagged: bool


@dataclass(frozen=True, eq=False)
class HyperbolaComparison:
    """Tabulation of the two printed numerical-range formulas (hyperbola
    branch with vertex x = 1; theta eigenvalue formula) against the
    numeric support function and the converged spectrum.

    This is a reporter: printed formulas that disagree with the numerics
    beyond 1e-6 are flagged, never raised.
    """

    gamma: float
    degenerate_ray: bool
    thetas: np.ndarray | None = None
    support_numeric: np.ndarray | None = None
    support_printed: np.ndarray | None = None
    lowest_eigenvalue: float | None = None
    discrepancies: list[DiscrepancyRecord] = field(default_factory=list)


def printed_support_formula(gamma: float, thetas: np.ndarray) -> np.ndarray:
    """Lowest-level (n = 0) value of the printed theta formula
    (1/2)(cos t - sqrt(cos^2 t - 4 g^2 sin^2 t)); NaN where the
    discriminant is negative."""
    thetas = np.asarray(thetas, dtype=np.float64)
    disc = np.cos(thetas) ** 2 - 4.0 * gamma * gamma * np.sin(thetas) ** 2
    out = np.full(thetas.shape, np.nan)
    ok = disc >= 0.0
    out[ok] = 0.5 * (np.cos(thetas[ok]) - np.sqrt(disc[ok]))
    return out


def hyperbola_reference(gamma: float, theta_samples: int = 41, *,
                        dim: int = 200, flag_tol: float = 1e-6
                        ) -> HyperbolaComparison:
    """Evaluate the printed boundary formulas against the numeric support
    function and the converged lowest eigenvalue; see HyperbolaComparison."""
    if gamma == 0.0:
        return HyperbolaComparison(gamma=0.0, degenerate_ray=True)
    cfg = ModelConfig(gamma, dim)
    limit = (math.pi / 2) * theta_samples / (theta_samples + 1)
    thetas = np.linspace(-limit, limit, theta_samples)
    h_num = support_function(cfg, thetas, dim=2 * dim)
    h_printed = printed_support_formula(gamma, thetas)
    lam0 = converged_spectrum(cfg, 1)[0][0].real

    records = []
    h0_num = float(support_function(cfg, [0.0], dim=2 * dim)[0])
    h0_printed = float(printed_support_formula(gamma, np.array([0.0]))[0])
    records.append(DiscrepancyRecord(
        "theta_formula_at_zero", h0_num, h0_printed,
        abs(h0_num - h0_printed), abs(h0_num - h0_printed) > flag_tol))
    # Printed branch keeps x >= 1 (vertex at 1); spectrum must lie inside
    # the closure of W(H), so an eigenvalue left of the vertex is a
    # containment violation of the printed curve.
    records.append(DiscrepancyRecord(
        "hyperbola_vertex_containment", lam0, 1.0,
        max(0.0, 1.0 - lam0), lam0 < 1.0 - flag_tol))
    valid = ~np.isnan(h_printed)
    max_gap = float(np.max(np.abs(h_num[valid] - h_printed[valid]))) if np.any(valid) else 0.0
    records.append(DiscrepancyRecord(
        "theta_formula_max_gap", max_gap, 0.0, max_gap, max_gap > flag_tol))
    return HyperbolaComparison(gamma, False, thetas, h_num, h_printed,
                               lam0, records)


@dataclass(frozen=True, eq=False)
class AccretivityReport:
    """Resolvent norms at sampled Re(lambda) < 0 against the m-accretive
    bound 1/|Re lambda|."""

    lambdas: np.ndarray
    resolvent_norms: np.ndarray
    bounds: np.ndarray
    margins: np.ndarray
    dim_used: int

    @property
    def all_within(self) -> bool:
        return bool(np.all(self.margins >= 0.0))


def accretivity_check(cfg: ModelConfig, lambda_samples) -> AccretivityReport:
    """||(H_N - lambda)^-1||_2 <= 1/|Re lambda| for every sample with
    Re lambda < 0."""
    lams = np.atleast_1d(np.asarray(lambda_samples, dtype=np.complex128))
    if np.any(lams.real >= 0.0):
        raise ContractViolation("accretivity samples need Re(lambda) < 0")
    h = build_hamiltonian(cfg).entries
    eye = np.eye(cfg.dim)
    norms = np.empty(lams.shape[0])
    for k, lam in enumerate(lams):
        sigma = smallest_singular_value(OperatorMatrix(h - lam * eye))
        norms[k] = math.inf if sigma == 0.0 else 1.0 / sigma
    bounds = 1.0 / np.abs(lams.real)
    return AccretivityReport(lams, norms, bounds, bounds - norms, cfg.dim)


def basis_quality(cfg: ModelConfig, dims_list) -> list[tuple[int, float]]:
    """Spectral condition number kappa_2(V) of the unit-column eigenvector
    matrix of H_N for each requested dim.

    For gamma = 0 this stays at 1 + O(eps); for gamma != 0 it grows with
    dim without visible saturation (the Riesz-basis-failure proxy).
    Reported, not asserted.
    """
    out = []
    for dim in dims_list:
        if dim < 4:
            raise ContractViolation("basis_quality needs dims >= 4")
        h = build_hamiltonian(ModelConfig(cfg.gamma, int(dim)))
        dec = eigenvalues_general(h, eigenvectors=True)
        s = np.linalg.svd(dec.eigenvectors, compute_uv=False)
        kappa = math.inf if s[-1] == 0.0 else float(s[0] / s[-1])
        out.append((int(dim), kappa))
    return out
