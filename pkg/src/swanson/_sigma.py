"""Smallest-singular-value grids for shifted pentadiagonal matrices.

This is the hot kernel behind pseudospectrum computation: for every grid
node z it evaluates sigma_min(z I - H) for the (real, pentadiagonal)
truncated Hamiltonian H.  Dense SVD per node would be ~O(n^3) * nodes;
instead each node costs O(n) via

  1. banded Givens QR of A = z I - H  (no pivoting needed, unitary Q
     drops out of the singular values),
  2. inverse Lanczos on (R* R)^{-1} with full reorthogonalization, whose
     largest Ritz value theta gives sigma_min = theta^{-1/2}; Ritz values
     of the small tridiagonal are located by Sturm bisection.

Two interchangeable backends implement the same algorithm:

* a numba ``@njit(parallel=True)`` kernel (rows of the grid in parallel),
  used by default when numba imports;
* a pure numpy/scipy path (LAPACK banded LU per node), selected by
  setting the environment variable ``SWANSON_PURE_NUMPY=1`` or when numba
  is unavailable.

Both paths are conjugation-equivariant: H is real, so the returned grid
satisfies sigma(conj z) == sigma(z) bitwise.  Grid rows share nothing
mutable and the output is independent of scheduling order.
"""

from __future__ import annotations

import math
import os

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import zgbtrf, zgbtrs

from .errors import ContractViolation

__all__ = [
    "active_backend",
    "bands_from_dense",
    "sigma_min_grid",
    "sigma_min_points",
]

_ENV_FLAG = "SWANSON_PURE_NUMPY"

try:
    if os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on"):
        raise ImportError("numba disabled by environment flag")
    import warnings as _warnings
    # informational threading-layer fallback notice; harmless here
    _warnings.filterwarnings("ignore", message=".*TBB.*")
    from numba import njit, prange
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag in tests
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn
        return wrap

    prange = range  # type: ignore[assignment]

DEFAULT_MAX_ITER = 80
DEFAULT_RTOL = 5e-15


def active_backend() -> str:
    """Name of the backend that sigma_min_grid will use."""
    return "numba" if _HAVE_NUMBA else "numpy"


def bands_from_dense(h) -> tuple[np.ndarray, ...]:
    """Extract (sub2, sub1, diag, sup1, sup2) from a real pentadiagonal
    dense matrix (complex storage with exactly zero imaginary part is
    accepted)."""
    a = np.asarray(h)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolation("expected a square matrix")
    if np.iscomplexobj(a):
        if np.any(a.imag):
            raise ContractViolation("kernel expects a real matrix")
        a = a.real
    a = np.ascontiguousarray(a, dtype=np.float64)
    n = a.shape[0]
    for off in range(3, n):
        if np.any(np.diagonal(a, off)) or np.any(np.diagonal(a, -off)):
            raise ContractViolation("kernel expects bandwidth <= 2")
    return (np.diagonal(a, -2).copy(), np.diagonal(a, -1).copy(),
            np.diagonal(a, 0).copy(), np.diagonal(a, 1).copy(),
            np.diagonal(a, 2).copy())


def _start_vector(n: int) -> np.ndarray:
    """Deterministic real unit vector (64-bit LCG), shared by both backends."""
    out = np.empty(n)
    state = 0x9E3779B97F4A7C15
    for i in range(n):
        state = (state * 6364136223846793005 + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
        out[i] = (state >> 11) * (1.0 / 9007199254740992.0) - 0.5
    return out / np.linalg.norm(out)


# ----------------------------------------------------------------------
# numba backend
#
# Row-aligned band storage: R[i, t] holds A[i, i - 2 + t], t = 0..6
# (two subdiagonals, diagonal at t = 2, four superdiagonals of fill).
# ----------------------------------------------------------------------

@njit(cache=True)
def _build_and_qr(sub2, sub1, diag, sup1, sup2, zr, zi, R):
    n = diag.shape[0]
    z = complex(zr, zi)
    scale = abs(z)
    for i in range(n):
        for t in range(7):
            R[i, t] = 0.0 + 0.0j
        if i >= 2:
            R[i, 0] = complex(-sub2[i - 2], 0.0)
        if i >= 1:
            R[i, 1] = complex(-sub1[i - 1], 0.0)
        R[i, 2] = z - diag[i]
        if i + 1 < n:
            R[i, 3] = complex(-sup1[i], 0.0)
        if i + 2 < n:
            R[i, 4] = complex(-sup2[i], 0.0)
        row = abs(diag[i])
        if i >= 2 and abs(sub2[i - 2]) > row:
            row = abs(sub2[i - 2])
        if i + 2 < n and abs(sup2[i]) > row:
            row = abs(sup2[i])
        if row > scale:
            scale = row
    # Givens QR, eliminating each column's two subdiagonal entries
    # bottom-up; upper bandwidth grows to at most 4.
    for k in range(n - 1):
        i_hi = k + 2
        if i_hi > n - 1:
            i_hi = n - 1
        for i in range(i_hi, k, -1):
            p = i - 1
            tq = k - i + 2
            b = R[i, tq]
            if b == 0:
                continue
            a = R[p, tq + 1]
            aa = abs(a)
            bb = abs(b)
            r = math.hypot(aa, bb)
            if aa == 0.0:
                c = 0.0
                s = b.conjugate() / bb
            else:
                c = aa / r
                s = (a / aa) * b.conjugate() / r
            cmax = p + 4
            if cmax > n - 1:
                cmax = n - 1
            for col in range(k, cmax + 1):
                tp2 = col - p + 2
                xp = R[p, tp2]
                xq = R[i, tp2 - 1]
                R[p, tp2] = c * xp + s * xq
                R[i, tp2 - 1] = -s.conjugate() * xp + c * xq
            R[i, tq] = 0.0 + 0.0j
    # Floor tiny diagonal entries so the triangular solves cannot overflow;
    # the floor is at the noise level of sigma_min itself.
    floor = 2.220446049250313e-16 * (scale + 1e-300)
    for i in range(n):
        if abs(R[i, 2]) < floor:
            R[i, 2] = complex(floor, 0.0)
    return 0


@njit(cache=True)
def _solve_r(R, b, x):
    # R x = b, back substitution over the 4 superdiagonals.
    n = b.shape[0]
    for i in range(n - 1, -1, -1):
        acc = b[i]
        jmax = i + 4
        if jmax > n - 1:
            jmax = n - 1
        for j in range(i + 1, jmax + 1):
            acc -= R[i, j - i + 2] * x[j]
        x[i] = acc / R[i, 2]
    return 0


@njit(cache=True)
def _solve_rstar(R, b, y):
    # R* y = b, forward substitution: (R*)[i, j] = conj(R[j, i]).
    n = b.shape[0]
    for i in range(n):
        acc = b[i]
        jmin = i - 4
        if jmin < 0:
            jmin = 0
        for j in range(jmin, i):
            acc -= R[j, i - j + 2].conjugate() * y[j]
        y[i] = acc / R[i, 2].conjugate()
    return 0


@njit(cache=True)
def _tridiag_lmax(alpha, beta, m):
    # Largest eigenvalue of the symmetric tridiagonal (alpha, beta) by
    # Sturm-count bisection inside Gershgorin bounds.
    if m == 1:
        return alpha[0]
    hi = alpha[0] + abs(beta[0])
    lo = alpha[0] - abs(beta[0])
    for i in range(1, m):
        left = abs(beta[i - 1])
        right = abs(beta[i]) if i < m - 1 else 0.0
        if alpha[i] + left + right > hi:
            hi = alpha[i] + left + right
        if alpha[i] - left - right < lo:
            lo = alpha[i] - left - right
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        cnt = 0
        d = alpha[0] - mid
        if d == 0.0:
            d = -1e-300
        if d < 0.0:
            cnt += 1
        for i in range(1, m):
            d = alpha[i] - mid - beta[i - 1] * beta[i - 1] / d
            if d == 0.0:
                d = -1e-300
            if d < 0.0:
                cnt += 1
        if cnt >= m:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def _sigma_from_r(R, q0, Q, u, w, alpha, beta, max_iter, rtol):
    n = R.shape[0]
    for i in range(n):
        Q[0, i] = complex(q0[i], 0.0)
    theta = 0.0
    theta_prev = 0.0
    stall = 0
    for j in range(max_iter):
        _solve_rstar(R, Q[j], u)
        _solve_r(R, u, w)
        s = 0.0
        for i in range(n):
            s += (Q[j, i].conjugate() * w[i]).real
        alpha[j] = s
        if j > 0:
            bprev = beta[j - 1]
            for i in range(n):
                w[i] -= s * Q[j, i] + bprev * Q[j - 1, i]
        else:
            for i in range(n):
                w[i] -= s * Q[j, i]
        for t in range(j + 1):
            c = 0.0 + 0.0j
            for i in range(n):
                c += Q[t, i].conjugate() * w[i]
            for i in range(n):
                w[i] -= c * Q[t, i]
        nb = 0.0
        for i in range(n):
            nb += w[i].real * w[i].real + w[i].imag * w[i].imag
        nb = math.sqrt(nb)
        m = j + 1
        theta = _tridiag_lmax(alpha, beta, m)
        if j >= 5 and theta - theta_prev <= rtol * theta:
            stall += 1
            if stall >= 2:
                break
        else:
            stall = 0
        theta_prev = theta
        if nb <= 1e-290 or m >= n or j == max_iter - 1:
            break
        beta[j] = nb
        inv = 1.0 / nb
        for i in range(n):
            Q[j + 1, i] = w[i] * inv
    if theta <= 0.0:
        return 0.0
    return 1.0 / math.sqrt(theta)


@njit(cache=True, parallel=True)
def _grid_numba(sub2, sub1, diag, sup1, sup2, re_nodes, im_nodes, q0,
                max_iter, rtol):
    n = diag.shape[0]
    n_im = im_nodes.shape[0]
    n_re = re_nodes.shape[0]
    out = np.empty((n_im, n_re))
    for r in prange(n_im):
        R = np.empty((n, 7), np.complex128)
        Q = np.empty((max_iter, n), np.complex128)
        u = np.empty(n, np.complex128)
        w = np.empty(n, np.complex128)
        alpha = np.empty(max_iter)
        beta = np.empty(max_iter)
        for ci in range(n_re):
            _build_and_qr(sub2, sub1, diag, sup1, sup2, re_nodes[ci],
                          im_nodes[r], R)
            out[r, ci] = _sigma_from_r(R, q0, Q, u, w, alpha, beta,
                                       max_iter, rtol)
    return out


# ----------------------------------------------------------------------
# numpy/scipy fallback: LAPACK banded LU per node, same Lanczos scheme.
# ----------------------------------------------------------------------

def _lmax_np(alpha, beta, m):
    if m == 1:
        return float(alpha[0])
    w = scipy.linalg.eigvalsh_tridiagonal(alpha[:m], beta[:m - 1])
    return float(w[-1])


def _sigma_from_lu(lu, ipiv, q0, max_iter, rtol):
    n = lu.shape[1]
    Q = np.empty((max_iter, n), dtype=np.complex128)
    alpha = np.zeros(max_iter)
    beta = np.zeros(max_iter)
    Q[0] = q0
    theta = 0.0
    theta_prev = 0.0
    stall = 0
    for j in range(max_iter):
        u, info = zgbtrs(lu, 2, 2, Q[j].reshape(n, 1), ipiv, trans=2)
        if info != 0:
            return 0.0
        w, info = zgbtrs(lu, 2, 2, u, ipiv, trans=0)
        if info != 0:
            return 0.0
        w = w[:, 0]
        s = float(np.vdot(Q[j], w).real)
        alpha[j] = s
        w = w - s * Q[j]
        if j > 0:
            w = w - beta[j - 1] * Q[j - 1]
        coeff = Q[: j + 1].conj() @ w
        w = w - Q[: j + 1].T @ coeff
        nb = float(np.linalg.norm(w))
        m = j + 1
        theta = _lmax_np(alpha, beta, m)
        if j >= 5 and theta - theta_prev <= rtol * theta:
            stall += 1
            if stall >= 2:
                break
        else:
            stall = 0
        theta_prev = theta
        if nb <= 1e-290 or m >= n or j == max_iter - 1:
            break
        beta[j] = nb
        Q[j + 1] = w / nb
    if theta <= 0.0:
        return 0.0
    return 1.0 / math.sqrt(theta)


def _grid_numpy(sub2, sub1, diag, sup1, sup2, re_nodes, im_nodes, q0,
                max_iter, rtol):
    n = diag.shape[0]
    out = np.empty((im_nodes.shape[0], re_nodes.shape[0]))
    ab0 = np.zeros((7, n), dtype=np.complex128, order="F")
    if n > 2:
        ab0[2, 2:] = -sup2
        ab0[6, : n - 2] = -sub2
    if n > 1:
        ab0[3, 1:] = -sup1
        ab0[5, : n - 1] = -sub1
    for r in range(im_nodes.shape[0]):
        for ci in range(re_nodes.shape[0]):
            z = complex(re_nodes[ci], im_nodes[r])
            ab = ab0.copy(order="F")
            ab[4, :] = z - diag
            lu, ipiv, info = zgbtrf(ab, 2, 2)
            if info > 0:
                out[r, ci] = 0.0
                continue
            out[r, ci] = _sigma_from_lu(lu, ipiv, q0, max_iter, rtol)
    return out


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------

def _as_bands(h):
    if isinstance(h, tuple):
        return h
    return bands_from_dense(h)


def sigma_min_grid(h, re_nodes, im_nodes, *, max_iter: int = DEFAULT_MAX_ITER,
                   rtol: float = DEFAULT_RTOL) -> np.ndarray:
    """sigma_min(z I - H) on the rectangular grid re_nodes x im_nodes.

    Returns shape (len(im_nodes), len(re_nodes)); row r belongs to
    im_nodes[r].  ``h`` is a real pentadiagonal dense matrix or a
    5-band tuple from :func:`bands_from_dense`.
    """
    sub2, sub1, diag, sup1, sup2 = _as_bands(h)
    re_nodes = np.ascontiguousarray(re_nodes, dtype=np.float64)
    im_nodes = np.ascontiguousarray(im_nodes, dtype=np.float64)
    q0 = _start_vector(diag.shape[0])
    fn = _grid_numba if _HAVE_NUMBA else _grid_numpy
    return fn(sub2, sub1, diag, sup1, sup2, re_nodes, im_nodes, q0,
              max_iter, rtol)


def sigma_min_points(h, zs, *, max_iter: int = DEFAULT_MAX_ITER,
                     rtol: float = DEFAULT_RTOL) -> np.ndarray:
    """sigma_min(z I - H) for an arbitrary list of complex points."""
    zs = np.atleast_1d(np.asarray(zs, dtype=np.complex128))
    out = np.empty(zs.shape[0])
    for idx, z in enumerate(zs):
        out[idx] = sigma_min_grid(h, np.array([z.real]), np.array([z.imag]),
                                  max_iter=max_iter, rtol=rtol)[0, 0]
    return out
