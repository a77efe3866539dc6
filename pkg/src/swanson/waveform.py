"""Function-space realization of the oscillator eigenfunctions.

Everything here is a polynomial times a Gaussian, p(x) exp(-c x^2), so
differentiation and multiplication by x act on coefficient vectors and
every inner product is a finite Gauss-Hermite sum that is *exact* for the
integrand (up to roundoff).  Conventions:

* Phi_n: eigenfunctions of the Hermitian auxiliary operator
  H0 = -(1/4) d^2/dx^2 + (1+gamma^2) x^2, unit-normalized, exponent
  sqrt(1+gamma^2).  (Direct substitution forces this exponent; see the
  verification report for the residual of the alternative form.)
* Psi_n = exp(-gamma x^2) Phi_n: eigenfunctions of H, exponent
  sqrt(1+gamma^2) + gamma.
* Psi~_n = exp(+gamma x^2) Phi_n: eigenfunctions of H*, exponent
  sqrt(1+gamma^2) - gamma.  With unit-normalized Phi_n the biorthogonality
  <Psi_m, Psi~_n> = delta_mn needs no extra scale factors.

Inner products are linear in the first argument: <f, g> = int f conj(g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import ContractViolation, DegenerateState, DivergentIntegral
from .linalg import OperatorMatrix, hpd_sqrt_family

__all__ = [
    "HermiteGaussian",
    "QuadratureRule",
    "GramData",
    "gauss_rule",
    "phi_n",
    "psi_n",
    "psi_tilde_n",
    "inner_product",
    "l2_norm",
    "physical_inner_product",
    "shift_exponent",
    "apply_operator",
    "gram_matrix",
    "resolution_of_identity_check",
    "IdentityCheck",
    "transition_amplitude_function",
    "eigenmode_combination",
]

OPERATOR_NAMES = ("H", "H0", "a", "a_dag", "d", "d_ddag")


def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Drop trailing coefficients that are exactly zero (keep at least one)."""
    k = len(coeffs)
    while k > 1 and coeffs[k - 1] == 0:
        k -= 1
    return coeffs[:k]


def _x_times(coeffs: np.ndarray) -> np.ndarray:
    return np.concatenate(([0.0 + 0.0j], coeffs))


def _derivative(coeffs: np.ndarray) -> np.ndarray:
    if len(coeffs) == 1:
        return np.zeros(1, dtype=np.complex128)
    return coeffs[1:] * np.arange(1, len(coeffs))


def _pad_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] += b
    return out


@dataclass(frozen=True, eq=False)
class HermiteGaussian:
    """p(x) * exp(-exponent_c * x^2) with ascending-degree coefficients."""

    coeffs: np.ndarray
    exponent_c: float

    def __post_init__(self):
        if not self.exponent_c > 0.0:
            raise DivergentIntegral(
                f"Gaussian exponent must be positive, got {self.exponent_c}",
                exponent=float(self.exponent_c))
        coeffs = _trim(np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128)))
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "exponent_c", float(self.exponent_c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, x):
        x = np.asarray(x)
        return (np.polynomial.polynomial.polyval(x, self.coeffs)
                * np.exp(-self.exponent_c * x * x))

    def _require_same_exponent(self, other: "HermiteGaussian"):
        if self.exponent_c != other.exponent_c:
            raise ContractViolation("mixed Gaussian exponents in linear combination")

    def __add__(self, other: "HermiteGaussian") -> "HermiteGaussian":
        self._require_same_exponent(other)
        return HermiteGaussian(_pad_add(self.coeffs, other.coeffs), self.exponent_c)

    def __sub__(self, other: "HermiteGaussian") -> "HermiteGaussian":
        self._require_same_exponent(other)
        return HermiteGaussian(_pad_add(self.coeffs, -other.coeffs), self.exponent_c)

    def __mul__(self, scalar) -> "HermiteGaussian":
        return HermiteGaussian(self.coeffs * scalar, self.exponent_c)

    __rmul__ = __mul__


def shift_exponent(f: HermiteGaussian, delta: float) -> HermiteGaussian:
    """Multiply by exp(-delta x^2), i.e. move the Gaussian exponent."""
    return HermiteGaussian(f.coeffs, f.exponent_c + delta)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Hermite rule for the weight exp(-scale x^2); exact for
    polynomials of degree <= 2 * len(nodes) - 1."""

    nodes: np.ndarray
    weights: np.ndarray
    scale: float

    def integrate(self, poly_coeffs: np.ndarray) -> complex:
        values = np.polynomial.polynomial.polyval(self.nodes, poly_coeffs)
        return complex(np.dot(self.weights, values))


@lru_cache(maxsize=None)
def _hermite_nodes(npts: int) -> tuple[np.ndarray, np.ndarray]:
    # Golub-Welsch on the symmetric three-term recurrence for exp(-t^2).
    off = np.sqrt(np.arange(1, npts) / 2.0)
    nodes, vecs = scipy.linalg.eigh_tridiagonal(np.zeros(npts), off)
    weights = math.sqrt(math.pi) * vecs[0] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_rule(scale: float, degree: int) -> QuadratureRule:
    """Rule exact for p(x) exp(-scale x^2) with deg p <= degree (plus an
    8-node margin)."""
    if not scale > 0.0:
        raise DivergentIntegral(f"quadrature scale must be positive, got {scale}",
                                exponent=float(scale))
    npts = max(degree, 0) // 2 + 1 + 8
    t, w = _hermite_nodes(npts)
    root = math.sqrt(scale)
    return QuadratureRule(t / root, w / root, scale)


def inner_product(f: HermiteGaussian, g: HermiteGaussian) -> complex:
    """<f, g> = int f(x) conj(g(x)) dx, exact by quadrature."""
    scale = f.exponent_c + g.exponent_c
    if not scale > 0.0:
        raise DivergentIntegral(
            f"combined Gaussian exponent {scale} is not positive", exponent=scale)
    q = np.convolve(f.coeffs, np.conj(g.coeffs))
    rule = gauss_rule(scale, len(q) - 1)
    return rule.integrate(q)


def l2_norm(f: HermiteGaussian) -> float:
    return math.sqrt(max(inner_product(f, f).real, 0.0))


def physical_inner_product(f: HermiteGaussian, g: HermiteGaussian,
                           gamma: float) -> complex:
    """<<f, g>> = <exp(gamma x^2) f, exp(gamma x^2) g>.

    Computed directly against the combined weight so that inputs whose
    individually shifted exponents are negative, but whose sum still
    decays, are handled.
    """
    scale = f.exponent_c + g.exponent_c - 2.0 * gamma
    if not scale > 0.0:
        raise DivergentIntegral(
            f"physical inner product diverges: combined exponent {scale}",
            exponent=scale)
    q = np.convolve(f.coeffs, np.conj(g.coeffs))
    rule = gauss_rule(scale, len(q) - 1)
    return rule.integrate(q)


def apply_operator(f: HermiteGaussian, which: str, gamma: float) -> HermiteGaussian:
    """Exact symbolic action of one of {H, H0, a, a_dag, d, d_ddag}.

    With omega = sqrt(1+gamma^2) and P = (1+gamma^2)^(1/4), acting on
    p(x) exp(-c x^2):

        a      -> [ (omega - c)/P x p + p'/(2P) ]            (c_eff = c)
        d      -> same with c_eff = c - gamma
        a_dag  -> [ (omega + c)/P x p - p'/(2P) ]
        d_ddag -> same with c_eff = c - gamma
        H0     -> -p''/4 + (c/2) p + c x p' + (omega^2 - c^2) x^2 p
        H      -> same with c replaced by c - gamma

    The Gaussian exponent is always preserved (H applied at exponent c
    acts exactly as H0 does at exponent c - gamma, which is the operator
    intertwining through exp(-gamma x^2)).
    """
    if which not in OPERATOR_NAMES:
        raise ContractViolation(f"unknown operator {which!r}")
    g = float(gamma)
    om2 = 1.0 + g * g
    om = math.sqrt(om2)
    p4 = om2 ** 0.25
    c = f.exponent_c
    poly = f.coeffs
    if which in ("a", "d", "a_dag", "d_ddag"):
        c_eff = c if which in ("a", "a_dag") else c - g
        xp = _x_times(poly)
        dp = _derivative(poly)
        if which in ("a", "d"):
            q = _pad_add(((om - c_eff) / p4) * xp, dp / (2.0 * p4))
        else:
            q = _pad_add(((om + c_eff) / p4) * xp, -dp / (2.0 * p4))
    else:
        c_eff = c - g if which == "H" else c
        dp = _derivative(poly)
        ddp = _derivative(dp)
        q = _pad_add(-0.25 * ddp, (0.5 * c_eff) * poly)
        q = _pad_add(q, c_eff * _x_times(dp))
        q = _pad_add(q, (om2 - c_eff * c_eff) * _x_times(_x_times(poly)))
    return HermiteGaussian(q, c)


def _normalized(f: HermiteGaussian) -> HermiteGaussian:
    return HermiteGaussian(f.coeffs / l2_norm(f), f.exponent_c)


@lru_cache(maxsize=None)
def phi_n(gamma: float, n: int) -> HermiteGaussian:
    """n-th eigenfunction of H0, unit L2 norm, built by the raising
    recurrence p_{n+1} = 2 P x p_n - p_n'/(2P) from exp(-omega x^2)."""
    if n < 0:
        raise ContractViolation("n must be >= 0")
    gamma = float(gamma)
    omega = math.sqrt(1.0 + gamma * gamma)
    if n == 0:
        return _normalized(HermiteGaussian(np.array([1.0 + 0.0j]), omega))
    return _normalized(apply_operator(phi_n(gamma, n - 1), "a_dag", gamma))


def psi_n(gamma: float, n: int) -> HermiteGaussian:
    """Eigenfunction of H: exp(-gamma x^2) Phi_n."""
    return shift_exponent(phi_n(float(gamma), n), float(gamma))


def psi_tilde_n(gamma: float, n: int) -> HermiteGaussian:
    """Eigenfunction of H*: exp(+gamma x^2) Phi_n."""
    return shift_exponent(phi_n(float(gamma), n), -float(gamma))


def eigenmode_combination(gamma: float, coeffs) -> HermiteGaussian:
    """Finite combination sum_k coeffs[k] Psi_k (all share one exponent)."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    if coeffs.size == 0:
        raise ContractViolation("need at least one coefficient")
    out = coeffs[0] * psi_n(gamma, 0)
    for k in range(1, coeffs.size):
        if coeffs[k] != 0:
            out = out + coeffs[k] * psi_n(gamma, k)
    return out


@dataclass(frozen=True, eq=False)
class GramData:
    """Gram matrix Q^-1 of the Psi modes plus its derived hermitian family
    Q, Q^1/2, Q^-1/2 (all positive definite)."""

    n_modes: int
    Q_inv: OperatorMatrix
    Q: OperatorMatrix
    Q_sqrt: OperatorMatrix
    Q_inv_sqrt: OperatorMatrix


def gram_matrix(gamma: float, n_modes: int) -> GramData:
    """Gram data of Psi_0..Psi_{n_modes-1} under the standard product.

    Index convention: (Q^-1)[j, i] = <Psi_i, Psi_j>.  Entries with i+j odd
    are exactly zero by parity, and the matrix is real symmetric positive
    definite; Q, Q^1/2 and Q^-1/2 are attached via the spectral square
    root family.
    """
    if n_modes < 1:
        raise ContractViolation("n_modes must be >= 1")
    psi = [psi_n(gamma, k) for k in range(n_modes)]
    m = np.zeros((n_modes, n_modes), dtype=np.complex128)
    for j in range(n_modes):
        for i in range(j, n_modes):
            if (i + j) % 2 == 1:
                continue
            val = inner_product(psi[i], psi[j])
            m[j, i] = val
            m[i, j] = val
    q_inv = OperatorMatrix(m, "hermitian")
    q, q_sqrt, q_inv_sqrt = hpd_sqrt_family(q_inv)
    return GramData(n_modes, q_inv, q, q_sqrt, q_inv_sqrt)


@dataclass(frozen=True, eq=False)
class IdentityCheck:
    partial_sum: complex
    reference: complex
    gap: float


def resolution_of_identity_check(gamma: float, f: HermiteGaussian,
                                 g: HermiteGaussian, n_terms: int) -> IdentityCheck:
    """Partial biorthogonal resolution sum against the direct product:

        sum_{n < n_terms} <f, Psi~_n><Psi_n, g> / <Psi_n, Psi~_n>  vs  <f, g>

    Exact once n_terms exceeds every mode index used to build f and g.
    """
    total = 0.0 + 0.0j
    for n in range(n_terms):
        denom = inner_product(psi_n(gamma, n), psi_tilde_n(gamma, n))
        total += (inner_product(f, psi_tilde_n(gamma, n))
                  * inner_product(psi_n(gamma, n), g) / denom)
    reference = inner_product(f, g)
    return IdentityCheck(total, reference, abs(total - reference))


def transition_amplitude_function(f: HermiteGaussian, g: HermiteGaussian,
                                  gamma: float) -> complex:
    """<<f, g>> / sqrt(<<f, f>> <<g, g>>); modulus <= 1 by Cauchy-Schwarz."""
    nf = physical_inner_product(f, f, gamma).real
    ng = physical_inner_product(g, g, gamma).real
    if nf <= 0.0 or ng <= 0.0:
        raise DegenerateState("transition amplitude needs states of positive physical norm")
    return physical_inner_product(f, g, gamma) / math.sqrt(nf * ng)
