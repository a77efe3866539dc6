"""Dense numerical kernels: eigendecompositions, smallest singular value,
and positive-definite square-root families.

All heavy lifting is delegated to LAPACK through numpy/scipy; this module
owns the contracts (tags, sorting order, residual reporting) that the rest
of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContractViolation, ConvergenceFailure, NotPositiveDefinite

__all__ = [
    "STRUCTURE_TAGS",
    "OperatorMatrix",
    "SpectralDecomposition",
    "hermitian_matrix",
    "eigendecompose_hermitian",
    "eigenvalues_general",
    "smallest_singular_value",
    "hpd_sqrt_family",
]

STRUCTURE_TAGS = ("general", "hermitian", "real-tridiagonal", "pentadiagonal")

#: Default residual tolerance for decompositions at desk scale (dim <= 600).
DEFAULT_TOL = 1e-10


def _frozen_complex(array) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, order="C")
    out.setflags(write=False)
    return out


def _band_limit(entries: np.ndarray, half_width: int) -> bool:
    """True when every entry with |i - j| > half_width is exactly zero."""
    n = entries.shape[0]
    for off in range(half_width + 1, n):
        if np.any(np.diagonal(entries, off)) or np.any(np.diagonal(entries, -off)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex square matrix with a band-structure tag.

    The tag is a promise made by the builder and is validated exactly at
    construction time: ``hermitian`` means bitwise conjugate symmetry,
    ``real-tridiagonal`` means exactly real entries confined to the three
    central diagonals, ``pentadiagonal`` confines entries to |i-j| <= 2.
    """

    entries: np.ndarray
    structure_tag: str = "general"

    def __post_init__(self):
        entries = _frozen_complex(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ContractViolation("OperatorMatrix entries must be square")
        if entries.shape[0] < 1:
            raise ContractViolation("OperatorMatrix dim must be >= 1")
        if self.structure_tag not in STRUCTURE_TAGS:
            raise ContractViolation(f"unknown structure tag {self.structure_tag!r}")
        if self.structure_tag == "hermitian":
            if not np.array_equal(entries, entries.conj().T):
                raise ContractViolation("hermitian tag requires exact conjugate symmetry")
        elif self.structure_tag == "real-tridiagonal":
            if np.any(entries.imag):
                raise ContractViolation("real-tridiagonal tag requires exactly real entries")
            if not _band_limit(entries, 1):
                raise ContractViolation("real-tridiagonal tag requires bandwidth 1")
        elif self.structure_tag == "pentadiagonal":
            if not _band_limit(entries, 2):
                raise ContractViolation("pentadiagonal tag requires bandwidth 2")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def hermitian_matrix(array) -> OperatorMatrix:
    """Symmetrize ``(A + A*)/2`` and wrap with the hermitian tag.

    The symmetrized entries are bitwise conjugate-symmetric (IEEE addition
    is commutative), so the tag's exact-equality invariant holds.
    """
    a = np.asarray(array, dtype=np.complex128)
    return OperatorMatrix((a + a.conj().T) / 2.0, "hermitian")


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues sorted by (Re, Im), optional unit-norm eigenvectors,
    and the per-pair residuals ||A v - lambda v||_2 when vectors are kept."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray | None
    tolerance: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def _sort_pairs(values: np.ndarray, vectors: np.ndarray | None):
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    if vectors is not None:
        vectors = vectors[:, order]
    return values, vectors


def _residuals(a: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return np.linalg.norm(a @ vectors - vectors * values[None, :], axis=0)


def _bandwidth(entries: np.ndarray) -> int:
    n = entries.shape[0]
    for off in range(n - 1, 0, -1):
        if np.any(np.diagonal(entries, off)) or np.any(np.diagonal(entries, -off)):
            return off
    return 0


def eigendecompose_hermitian(a: OperatorMatrix, *, eigenvectors: bool = True,
                             tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a hermitian-tagged matrix.

    Eigenvalues come back real (zero imaginary part), ascending.  With
    ``eigenvectors=False``, banded inputs (detected, bandwidth <= 8) go
    through the banded LAPACK path, which is what makes dense theta-sweeps
    over pentadiagonal matrices cheap.
    """
    if a.structure_tag != "hermitian":
        raise ContractViolation("eigendecompose_hermitian requires the hermitian tag")
    try:
        if eigenvectors:
            w, v = np.linalg.eigh(a.entries)
        else:
            bw = _bandwidth(a.entries)
            if 0 < bw <= 8 and a.dim > 2:
                bands = np.zeros((bw + 1, a.dim), dtype=np.complex128)
                for off in range(bw + 1):
                    bands[bw - off, off:] = np.diagonal(a.entries, off)
                w = scipy.linalg.eigvals_banded(bands, lower=False)
            else:
                w = np.linalg.eigvalsh(a.entries)
            v = None
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"hermitian eigensolver failed: {exc}") from exc
    values = w.astype(np.complex128)
    res = _residuals(a.entries, values, v) if v is not None else None
    return SpectralDecomposition(values, v, res, tol)


def eigenvalues_general(a: OperatorMatrix, *, eigenvectors: bool = False,
                        tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigenvalues (optionally eigenvectors) of a general complex matrix,
    sorted by ascending real part, then ascending imaginary part."""
    try:
        if eigenvectors:
            w, v = np.linalg.eig(a.entries)
            v = v / np.linalg.norm(v, axis=0)[None, :]
        else:
            w = np.linalg.eigvals(a.entries)
            v = None
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"general eigensolver failed: {exc}") from exc
    w, v = _sort_pairs(w, v)
    res = _residuals(a.entries, w, v) if v is not None else None
    return SpectralDecomposition(w, v, res, tol)


def smallest_singular_value(a: OperatorMatrix) -> float:
    """sigma_min(A); relative accuracy ~1e-8 or absolute ~1e-14, whichever
    is looser (LAPACK SVD delivers much better in practice)."""
    try:
        s = np.linalg.svd(a.entries, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD failed: {exc}") from exc
    return float(s[-1])


def hpd_sqrt_family(q_inv: OperatorMatrix, *, tol: float = DEFAULT_TOL
                    ) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Given a hermitian positive-definite Gram matrix ``Q^-1``, return
    ``(Q, Q^1/2, Q^-1/2)``, each exactly hermitian and positive definite.

    All three share the eigenbasis of the input, so they commute with it
    to roundoff.
    """
    if q_inv.structure_tag != "hermitian":
        raise ContractViolation("hpd_sqrt_family requires the hermitian tag")
    w, v = np.linalg.eigh(q_inv.entries)
    if w[0] <= 0.0:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (eigenvalue {w[0]:.6e})",
            eigenvalue=float(w[0]))

    def rebuild(values: np.ndarray) -> OperatorMatrix:
        return hermitian_matrix((v * values[None, :]) @ v.conj().T)

    q = rebuild(1.0 / w)
    q_sqrt = rebuild(1.0 / np.sqrt(w))
    q_inv_sqrt = rebuild(np.sqrt(w))
    return q, q_sqrt, q_inv_sqrt
