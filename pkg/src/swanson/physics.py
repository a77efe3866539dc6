"""Finite-dimensional physical model: compression of H to the span of n
eigenfunctions, the pseudo-Hermitian matrix H_hat, biorthogonal vector
pairs, metric inner products, energy expectation, and time evolution.

Vectors in C^n are coordinates with respect to the orthonormalized basis
of the compressed space, so the standard C^n product coincides with the
L2 product of the corresponding functions.  The eigencoordinate vector c
(coefficients along Psi_0..Psi_{n-1}) maps to the ambient vector
``Psi_hat @ c``; both inner products are linear in the first argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContractViolation, DegenerateState
from .linalg import OperatorMatrix
from .waveform import GramData, gram_matrix

__all__ = [
    "CompressedModel",
    "EvolutionTrace",
    "compress",
    "physical_inner_product_vec",
    "energy_expectation",
    "transition_amplitude_vec",
    "evolve",
    "state_from_modes",
    "modes_from_state",
    "dense_propagator",
]


@dataclass(frozen=True, eq=False)
class CompressedModel:
    """Gram data, H_hat = Q^-1/2 diag(lambda) Q^1/2, the closed-form
    eigenvalues, and the biorthogonal eigenvector pairs
    Psi_hat_i = Q^-1/2 E_i (right) and Psi~_hat_i = Q^1/2 E_i (left)."""

    n_modes: int
    gamma: float
    gram: GramData
    H_hat: OperatorMatrix
    lambdas: np.ndarray
    Psi_hat: np.ndarray
    Psi_tilde_hat: np.ndarray


def compress(gamma: float, n_modes: int) -> CompressedModel:
    """Compress H to the span of Psi_0..Psi_{n_modes-1}.

    Uses the closed-form eigenvalues (k + 1/2) sqrt(1 + gamma^2) for the
    diagonal factor, matching the similarity construction exactly.
    """
    if n_modes < 2:
        raise ContractViolation("n_modes must be >= 2 for non-trivial dynamics")
    gram = gram_matrix(gamma, n_modes)
    omega = math.sqrt(1.0 + gamma * gamma)
    lambdas = (np.arange(n_modes) + 0.5) * omega
    q_sqrt = gram.Q_sqrt.entries
    q_inv_sqrt = gram.Q_inv_sqrt.entries
    h_hat = (q_inv_sqrt * lambdas[None, :]) @ q_sqrt
    return CompressedModel(n_modes, float(gamma), gram,
                           OperatorMatrix(h_hat, "general"), lambdas,
                           q_inv_sqrt.copy(), q_sqrt.copy())


def _check_vec(model: CompressedModel, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (model.n_modes,):
        raise ContractViolation(
            f"vector length {u.shape} does not match n_modes={model.n_modes}")
    return u


def physical_inner_product_vec(model: CompressedModel, u, v) -> complex:
    """<<u, v>> = <Q u, v>, linear in u, conjugate-linear in v."""
    u = _check_vec(model, u)
    v = _check_vec(model, v)
    return complex(np.vdot(v, model.gram.Q.entries @ u))


def energy_expectation(model: CompressedModel, u) -> float:
    """Re <<H_hat u, u>> / <<u, u>>; real up to roundoff because H_hat is
    hermitian in the Q-weighted product."""
    u = _check_vec(model, u)
    if not np.any(u):
        raise DegenerateState("energy expectation of the zero vector")
    num = physical_inner_product_vec(model, model.H_hat.entries @ u, u)
    den = physical_inner_product_vec(model, u, u).real
    return (num / den).real


def transition_amplitude_vec(model: CompressedModel, u, v) -> complex:
    """<<u, v>> / sqrt(<<u, u>> <<v, v>>); modulus <= 1."""
    u = _check_vec(model, u)
    v = _check_vec(model, v)
    nu = physical_inner_product_vec(model, u, u).real
    nv = physical_inner_product_vec(model, v, v).real
    if nu <= 0.0 or nv <= 0.0:
        raise DegenerateState("transition amplitude needs positive physical norms")
    return physical_inner_product_vec(model, u, v) / math.sqrt(nu * nv)


def state_from_modes(model: CompressedModel, coeffs) -> np.ndarray:
    """Ambient vector of the eigenmode combination sum_k c_k Psi_hat_k
    (the coordinate image of sum_k c_k Psi_k)."""
    c = _check_vec(model, coeffs)
    return model.Psi_hat @ c


def modes_from_state(model: CompressedModel, u) -> np.ndarray:
    """Eigenmode coefficients of an ambient vector (biorthogonal
    projections <u, Psi~_hat_i>)."""
    u = _check_vec(model, u)
    return model.Psi_tilde_hat @ u


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    """Spectral evolution c_k(t) = exp(-i lambda_k t) c_k(0) together with
    the physical and standard norms of the evolving state."""

    times: np.ndarray
    coeffs: np.ndarray
    phys_norms: np.ndarray
    std_norms: np.ndarray


def evolve(model: CompressedModel, c0, t_grid) -> EvolutionTrace:
    """Evolve the eigenmode coefficients c0 over t_grid.

    The physical norm <<u(t), u(t)>> is conserved; the standard norm
    <u(t), u(t)> oscillates unless a single mode is populated or the
    metric is the identity.
    """
    c0 = _check_vec(model, c0)
    if not np.any(c0):
        raise DegenerateState("cannot evolve the zero state")
    t = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    phases = np.exp(-1j * np.outer(t, model.lambdas))
    coeffs = phases * c0[None, :]
    states = coeffs @ model.Psi_hat.T
    weighted = states @ model.gram.Q.entries.T
    phys = np.einsum("ti,ti->t", states.conj(), weighted).real
    std = np.einsum("ti,ti->t", states.conj(), states).real
    return EvolutionTrace(t, coeffs, phys, std)


def dense_propagator(model: CompressedModel, t: float) -> np.ndarray:
    """exp(-i H_hat t) by dense matrix exponential; cross-check for the
    spectral path, not used on the main route."""
    return scipy.linalg.expm(-1j * t * model.H_hat.entries)
