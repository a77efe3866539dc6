"""Truncated matrix realization of the non-self-adjoint oscillator

    H = b*b + (gamma/2) (b*^2 - b^2) + 1/2

in the number basis.  Every matrix here is assembled from the shift
matrices B, B^T (never transcribed from a display), so band structure and
commutation identities hold to roundoff away from the truncation corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, TruncationTailError
from .linalg import OperatorMatrix

__all__ = [
    "ModelConfig",
    "LadderPair",
    "build_shift_matrices",
    "build_quadratic_generators",
    "build_hamiltonian",
    "parity_split",
    "analytic_spectrum",
    "build_ladder",
    "ground_vector",
    "excited_vector",
    "eta_parameter",
]


@dataclass(frozen=True)
class ModelConfig:
    """Non-Hermiticity parameter gamma (|gamma| < 1, 0 allowed as the
    Hermitian baseline) and truncation size dim (states retained)."""

    gamma: float
    dim: int = 200

    def __post_init__(self):
        if not abs(self.gamma) < 1.0:
            raise ContractViolation(f"gamma must satisfy |gamma| < 1, got {self.gamma}")
        if self.dim < 2:
            raise ContractViolation(f"dim must be >= 2, got {self.dim}")

    @property
    def omega(self) -> float:
        """Level spacing sqrt(1 + gamma^2)."""
        return math.sqrt(1.0 + self.gamma * self.gamma)


def eta_parameter(gamma: float) -> float:
    """Geometric decay ratio of the ground vector's even components."""
    omega = math.sqrt(1.0 + gamma * gamma)
    return (1.0 - gamma - omega) / (1.0 + gamma + omega)


def build_shift_matrices(cfg: ModelConfig) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Upper shift B with B[i, i+1] = sqrt(i+1), and its transpose."""
    n = cfg.dim
    b = np.zeros((n, n))
    idx = np.arange(n - 1)
    b[idx, idx + 1] = np.sqrt(idx + 1.0)
    return OperatorMatrix(b, "general"), OperatorMatrix(b.T, "general")


def build_quadratic_generators(cfg: ModelConfig
                               ) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Number matrix A0 = diag(0..dim-1), two-step raiser A+ with
    A+[i+2, i] = sqrt((i+1)(i+2)), and A- = A+^T."""
    b, bt = build_shift_matrices(cfg)
    a0 = np.diag(np.arange(cfg.dim, dtype=float)).astype(complex)
    a_plus = bt.entries @ bt.entries
    a_minus = b.entries @ b.entries
    return (OperatorMatrix(a0, "general"),
            OperatorMatrix(a_plus, "general"),
            OperatorMatrix(a_minus, "general"))


def build_hamiltonian(cfg: ModelConfig) -> OperatorMatrix:
    """Pentadiagonal truncation A0 + (gamma/2)(A+ - A-) + I/2."""
    a0, a_plus, a_minus = build_quadratic_generators(cfg)
    h = a0.entries + 0.5 * cfg.gamma * (a_plus.entries - a_minus.entries)
    h = h + 0.5 * np.eye(cfg.dim)
    return OperatorMatrix(h, "pentadiagonal")


def parity_split(h: OperatorMatrix) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Split H into its even- and odd-index compressions.

    Each block is real tridiagonal with super-diagonal equal to minus the
    sub-diagonal (Jacobi matrix premultiplied by diag(1,-1,1,...)).
    """
    if h.structure_tag != "pentadiagonal":
        raise ContractViolation("parity_split expects a pentadiagonal-tagged matrix")
    even = np.arange(0, h.dim, 2)
    odd = np.arange(1, h.dim, 2)
    h_even = h.entries[np.ix_(even, even)]
    h_odd = h.entries[np.ix_(odd, odd)]
    return (OperatorMatrix(h_even, "real-tridiagonal"),
            OperatorMatrix(h_odd, "real-tridiagonal"))


def analytic_spectrum(cfg: ModelConfig, n_max: int) -> np.ndarray:
    """Closed-form eigenvalues (n + 1/2) sqrt(1 + gamma^2), n = 0..n_max."""
    if n_max < 0:
        raise ContractViolation("n_max must be >= 0")
    return (np.arange(n_max + 1) + 0.5) * cfg.omega


@dataclass(frozen=True, eq=False)
class LadderPair:
    """Lowering/raising matrices D, D^ddag for the truncated H, the decay
    ratio eta, and the B/B^T coefficients used to form each matrix."""

    D: OperatorMatrix
    D_ddag: OperatorMatrix
    eta: float
    coefficients: dict = field(default_factory=dict)


def build_ladder(cfg: ModelConfig) -> LadderPair:
    """D = cB_d B + cBT_d B^T and D^ddag = cB_r B + cBT_r B^T with

        cB_d  = ((1+g^2)^(1/4) + (1+g)(1+g^2)^(-1/4)) / 2
        cBT_d = ((1+g^2)^(1/4) - (1-g)(1+g^2)^(-1/4)) / 2
        cB_r  = ((1+g^2)^(1/4) - (1+g)(1+g^2)^(-1/4)) / 2
        cBT_r = ((1+g^2)^(1/4) + (1-g)(1+g^2)^(-1/4)) / 2

    so that [D, D^ddag] = I and [H, D^ddag] = sqrt(1+g^2) D^ddag away from
    the truncation corner.
    """
    g = cfg.gamma
    p = (1.0 + g * g) ** 0.25
    c_b_low = 0.5 * (p + (1.0 + g) / p)
    c_bt_low = 0.5 * (p - (1.0 - g) / p)
    c_b_raise = 0.5 * (p - (1.0 + g) / p)
    c_bt_raise = 0.5 * (p + (1.0 - g) / p)
    b, bt = build_shift_matrices(cfg)
    d = c_b_low * b.entries + c_bt_low * bt.entries
    d_ddag = c_b_raise * b.entries + c_bt_raise * bt.entries
    coeffs = {
        "D": {"B": c_b_low, "B_T": c_bt_low},
        "D_ddag": {"B": c_b_raise, "B_T": c_bt_raise},
    }
    return LadderPair(OperatorMatrix(d, "general"), OperatorMatrix(d_ddag, "general"),
                      eta_parameter(g), coeffs)


def ground_vector(cfg: ModelConfig) -> np.ndarray:
    """Kernel vector of D: odd entries zero, entry 2k equal to
    eta^k sqrt((2k-1)!! / (2k)!!), entry 0 equal to 1."""
    eta = eta_parameter(cfg.gamma)
    if not abs(eta) < 1.0:
        raise ContractViolation(f"|eta| must be < 1 for a decaying ground vector, got {eta}")
    v = np.zeros(cfg.dim)
    v[0] = 1.0
    value = 1.0
    for k in range(1, (cfg.dim + 1) // 2):
        value *= eta * math.sqrt((2 * k - 1) / (2 * k))
        v[2 * k] = value
    return v


def excited_vector(cfg: ModelConfig, n: int, *, tail_tol: float = 1e-8) -> np.ndarray:
    """n-th eigenvector (D^ddag)^n applied to the ground vector.

    Raises TruncationTailError when the last two components carry more
    than ``tail_tol`` of the vector norm, i.e. the truncation is too small
    for the requested n.
    """
    if n < 0:
        raise ContractViolation("n must be >= 0")
    ladder = build_ladder(cfg)
    v = ground_vector(cfg).astype(complex)
    for _ in range(n):
        v = ladder.D_ddag.entries @ v
    tail = np.linalg.norm(v[-2:]) / np.linalg.norm(v)
    if tail > tail_tol:
        raise TruncationTailError(
            f"truncation dim={cfg.dim} too small for n={n}: tail fraction {tail:.3e}")
    return v
