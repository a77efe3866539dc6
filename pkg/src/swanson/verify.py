"""Cross-checking policy in one auditable place.

Every check pits a computed quantity against an expectation.  Checks with
source "derived-from-operators" must pass: the expectation follows from
the operator algebra (or an independent numerical oracle), so failure
means an implementation bug.  Checks with source "printed-in-paper"
evaluate closed forms as displayed in the source text; when such a form
disagrees with the derived oracle the check is reported with status
"paper-discrepancy", which is informational and does not fail a run.

The known discrepancies this report documents for gamma != 0:

* the displayed ground-state exponent exp(-x^2/sqrt(1+g^2)) is not an
  eigenfunction of the auxiliary operator (the derived exponent
  sqrt(1+g^2) is);
* the displayed support-line formula for the numerical range vanishes at
  theta = 0 where the support is 1/2;
* the displayed boundary hyperbola has vertex x = 1, which would exclude
  the lowest eigenvalue (1/2) sqrt(1+g^2);
* the matrix section names sqrt(1+g^2) as the lowest eigenvalue where
  three independent computations give (1/2) sqrt(1+g^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import physics, spectral, waveform
from .oscillator import (ModelConfig, analytic_spectrum, build_hamiltonian,
                         build_ladder, ground_vector)

__all__ = ["Check", "VerificationReport", "run_verification"]

DERIVED = "derived-from-operators"
PRINTED = "printed-in-paper"


@dataclass(frozen=True)
class Check:
    name: str
    computed: float
    expected: float
    source: str
    residual: float
    tolerance: float
    status: str


@dataclass
class VerificationReport:
    gamma: float
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, computed: float, expected: float, source: str,
            tolerance: float, *, residual: float | None = None) -> None:
        if residual is None:
            residual = abs(computed - expected)
        if residual <= tolerance:
            status = "pass"
        else:
            status = "paper-discrepancy" if source == PRINTED else "fail"
        self.checks.append(Check(name, float(computed), float(expected), source,
                                 float(residual), float(tolerance), status))

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "paper-discrepancy": 0}
        for check in self.checks:
            out[check.status] += 1
        return out

    @property
    def has_failures(self) -> bool:
        return any(c.status == "fail" for c in self.checks)


def _max_block(m: np.ndarray, k: int) -> float:
    return float(np.max(np.abs(m[:k, :k])))


def run_verification(gamma: float = 0.5) -> VerificationReport:
    """Run the whole cross-check battery at one gamma (quick settings:
    a few seconds of runtime)."""
    rep = VerificationReport(float(gamma))
    g = float(gamma)
    omega = math.sqrt(1.0 + g * g)

    # --- truncated spectrum vs closed form -----------------------------
    cfg = ModelConfig(g, 150)
    pairs = spectral.converged_spectrum(cfg, 10)
    values = np.array([v for v, _ in pairs])
    target = analytic_spectrum(cfg, 9)
    rep.add("spectrum.closed_form", float(np.max(np.abs(values.real - target))),
            0.0, DERIVED, 1e-8)
    rep.add("spectrum.reality", float(np.max(np.abs(values.imag))), 0.0,
            DERIVED, 1e-8)

    # --- ladder algebra -------------------------------------------------
    lcfg = ModelConfig(g, 50)
    h = build_hamiltonian(lcfg).entries
    ladder = build_ladder(lcfg)
    d, dd = ladder.D.entries, ladder.D_ddag.entries
    eye = np.eye(50)
    k = 48
    rep.add("ladder.canonical_commutator",
            _max_block(d @ dd - dd @ d - eye, k), 0.0, DERIVED, 1e-12)
    rep.add("ladder.raising_commutator",
            _max_block(h @ dd - dd @ h - omega * dd, k), 0.0, DERIVED, 1e-10)
    rep.add("ladder.lowering_commutator",
            _max_block(h @ d - d @ h + omega * d, k), 0.0, DERIVED, 1e-10)
    rep.add("ladder.factorization",
            _max_block(h - omega * (dd @ d + 0.5 * eye), k), 0.0, DERIVED, 1e-10)

    # --- ground vector --------------------------------------------------
    v0 = ground_vector(lcfg)
    nv0 = np.linalg.norm(v0)
    rep.add("ground.annihilation",
            float(np.linalg.norm((d @ v0)[:-2]) / nv0), 0.0, DERIVED, 1e-10)
    resid = h @ v0 - 0.5 * omega * v0
    rep.add("ground.eigen_residual",
            float(np.linalg.norm(resid[:-2]) / nv0), 0.0, DERIVED, 1e-9)

    # --- waveforms -------------------------------------------------------
    n_modes = 8
    psi = [waveform.psi_n(g, n) for n in range(n_modes + 1)]
    psit = [waveform.psi_tilde_n(g, n) for n in range(n_modes + 1)]
    bi = max(abs(waveform.inner_product(psi[mm], psit[nn]) - (mm == nn))
             for mm in range(n_modes + 1) for nn in range(n_modes + 1))
    rep.add("waveform.biorthonormality", float(bi), 0.0, DERIVED, 1e-12)
    po = max(abs(waveform.physical_inner_product(psi[mm], psi[nn], g) - (mm == nn))
             for mm in range(n_modes + 1) for nn in range(n_modes + 1))
    rep.add("waveform.physical_orthonormality", float(po), 0.0, DERIVED, 1e-12)

    direct = 0.0
    factored = 0.0
    for n in range(n_modes + 1):
        lam = (n + 0.5) * omega
        norm_n = waveform.l2_norm(psi[n])
        direct = max(direct, waveform.l2_norm(
            waveform.apply_operator(psi[n], "H", g) - lam * psi[n]) / norm_n)
        via_ladder = waveform.apply_operator(
            waveform.apply_operator(psi[n], "d", g), "d_ddag", g)
        factored = max(factored, waveform.l2_norm(
            omega * (via_ladder + 0.5 * psi[n]) - lam * psi[n]) / norm_n)
    rep.add("waveform.eigen_residual_direct", direct, 0.0, DERIVED, 1e-10)
    rep.add("waveform.eigen_residual_factorized", factored, 0.0, DERIVED, 1e-10)

    # --- ground-state exponent: derived vs printed ----------------------
    e0 = 0.5 * omega
    phi_derived = waveform.phi_n(g, 0)
    res_derived = waveform.l2_norm(
        waveform.apply_operator(phi_derived, "H0", g) - e0 * phi_derived)
    rep.add("waveform.ground_exponent_derived", float(res_derived), 0.0,
            DERIVED, 1e-12)
    phi_printed = waveform.HermiteGaussian(np.array([1.0 + 0.0j]), 1.0 / omega)
    phi_printed = (1.0 / waveform.l2_norm(phi_printed)) * phi_printed
    res_printed = waveform.l2_norm(
        waveform.apply_operator(phi_printed, "H0", g) - e0 * phi_printed)
    rep.add("paper.ground_exponent_printed", float(res_printed), 0.0,
            PRINTED, 1e-6)
    rep.add("waveform.psi_exponent_positive", omega + g, 0.0, DERIVED, 0.0,
            residual=max(0.0, -(omega + g)))

    # --- compression -----------------------------------------------------
    model = physics.compress(g, 6)
    q = model.gram.Q.entries
    hh = model.H_hat.entries
    rep.add("compress.pseudo_hermiticity",
            float(np.max(np.abs(q @ hh - hh.conj().T @ q))), 0.0, DERIVED, 1e-10)
    eigs = np.sort(np.linalg.eigvals(hh).real)
    rep.add("compress.eigenvalues",
            float(np.max(np.abs(eigs - model.lambdas))), 0.0, DERIVED, 1e-10)
    rep.add("compress.biorthogonal_vectors",
            float(np.max(np.abs(model.Psi_tilde_hat.conj().T @ model.Psi_hat
                                - np.eye(6)))), 0.0, DERIVED, 1e-10)
    direct_sum = np.einsum("jk,k,ki->ji", model.gram.Q_inv_sqrt.entries,
                           model.lambdas, model.gram.Q_sqrt.entries)
    rep.add("compress.entry_formula",
            float(np.max(np.abs(direct_sum - hh))), 0.0, DERIVED, 1e-12)

    # --- dynamics ----------------------------------------------------------
    c0 = np.zeros(6, dtype=complex)
    c0[0] = c0[2] = 1.0 / math.sqrt(2.0)
    t_grid = np.arange(0.0, 10.0 + 0.025, 0.05)
    trace = physics.evolve(model, c0, t_grid)
    drift = float((trace.phys_norms.max() - trace.phys_norms.min())
                  / trace.phys_norms[0])
    rep.add("dynamics.physical_norm_drift", drift, 0.0, DERIVED, 1e-10)
    osc = float(trace.std_norms.max() - trace.std_norms.min())
    rep.add("dynamics.standard_norm_oscillation", osc, 1e-6, DERIVED, 0.0,
            residual=max(0.0, 1e-6 - osc) if g != 0.0 else 0.0)
    t_star = 2.0 * math.pi / omega
    rec = physics.evolve(model, c0, [t_star])
    phase = np.exp(-1j * model.lambdas[0] * t_star)
    rep.add("dynamics.recurrence",
            float(np.linalg.norm(rec.coeffs[0] - phase * c0)), 0.0, DERIVED, 1e-10)

    # --- accretivity --------------------------------------------------------
    acfg = ModelConfig(g, 200)
    rng = np.random.default_rng(2024)
    lams = -(0.1 + 9.9 * rng.random(12)) + 1j * (6.0 * rng.random(12) - 3.0)
    report = spectral.accretivity_check(acfg, lams)
    worst = float(np.min(report.margins))
    rep.add("accretivity.resolvent_bound", worst, 0.0, DERIVED, 0.0,
            residual=max(0.0, -worst))

    # --- numerical range ----------------------------------------------------
    ncfg = ModelConfig(g, 200)
    h0 = float(spectral.support_function(ncfg, [0.0], dim=400)[0])
    rep.add("numrange.support_at_zero", h0, 0.5, DERIVED, 1e-8)
    pair = spectral.support_function(ncfg, [0.3, -0.3], dim=400)
    rep.add("numrange.evenness", float(abs(pair[0] - pair[1])), 0.0,
            DERIVED, 1e-10)
    boundary = spectral.numerical_range_boundary(ncfg, theta_count=41)
    margin = min(float(np.min(values.real * math.cos(t) + values.imag * math.sin(t)
                              - hval))
                 for t, hval in zip(boundary.thetas, boundary.support_values))
    rep.add("numrange.spectral_inclusion", margin, 0.0, DERIVED, 1e-6,
            residual=max(0.0, -margin))

    # --- printed Theorem-style formulas vs numerics ---------------------------
    if g != 0.0:
        comparison = spectral.hyperbola_reference(g, 21, dim=150)
        by_name = {r.name: r for r in comparison.discrepancies}
        theta0 = by_name["theta_formula_at_zero"]
        rep.add("paper.theorem31_theta_formula", theta0.printed, theta0.computed,
                PRINTED, 1e-6)
        vertex = by_name["hyperbola_vertex_containment"]
        rep.add("paper.theorem31_hyperbola_vertex", vertex.printed,
                vertex.computed, PRINTED, 1e-6,
                residual=vertex.delta)
    rep.add("paper.lowest_eigenvalue_claim", omega, 0.5 * omega, PRINTED, 1e-6)

    # --- pseudospectrum non-triviality (quick grid) ----------------------------
    pcfg = ModelConfig(g, 150)
    grid = spectral.pseudospectrum(pcfg, region=(-1.0, 10.0, -5.0, 5.0),
                                   resolution=60)
    count = int((10.0 + 2.0) / omega) + 1
    eig_set = np.array([v for v, _ in spectral.converged_spectrum(pcfg, count)])
    zs = grid.re_nodes[None, :] + 1j * grid.im_nodes[:, None]
    dist = np.min(np.abs(zs[:, :, None] - eig_set[None, None, :]), axis=2)
    ratio = float(np.max(dist / np.maximum(grid.sigma_min, 1e-300)))
    if g == 0.0:
        rep.add("pseudospectrum.trivial_baseline", ratio, 1.0, DERIVED, 0.0,
                residual=max(0.0, ratio - 2.0))
    else:
        rep.add("pseudospectrum.nontrivial", ratio, 10.0, DERIVED, 0.0,
                residual=max(0.0, 10.0 - ratio))
    sigma_bound = float(np.max(grid.sigma_min - dist))
    rep.add("pseudospectrum.sigma_below_distance", sigma_bound, 0.0, DERIVED,
            1e-10, residual=max(0.0, sigma_bound))

    return rep
