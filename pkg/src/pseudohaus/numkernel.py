"""Dense complex linear algebra: adjoints, norms and smallest singular values.

In finite-dimensional l2 the lower norm ``nu(A) = inf_{|x|=1} |Ax|`` is the
smallest singular value, and ``mu(A) = min(nu(A), nu(A*))`` is the reciprocal
of the resolvent-type quantity ``|A^{-1}|``.  Singular values come from a
one-sided (Hestenes) Jacobi iteration that is vectorized over a stack of
matrices, so a whole grid of shifted matrices ``A - lambda I`` is processed
in one call.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import ContractError, ConvergenceFailure, InputError
from .rng import SplitMix64
from .validation import check_matrix

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 60
# columns below this multiple of eps * |A|_F are rounding noise; rotating
# them can never drive their cosine under tol
_NOISE = 64 * np.finfo(float).eps
# elements per chunk of a batched computation (complex entries)
_CHUNK_ENTRIES = 1 << 21
# agreement required between sigma_min(A) and sigma_min(A*) inside mu
MU_AGREEMENT = 1e-10


@dataclass(frozen=True)
class SvdResult:
    singular_values: np.ndarray
    converged: bool
    sweeps: int


def adjoint(a):
    """Conjugate transpose."""
    return np.conj(check_matrix(a)).T.copy()


@njit(cache=True)
def _jacobi_columns(w, tol, max_sweeps, noise):
    """Orthogonalize the columns ``w[b, j, :]`` of every matrix in the stack.

    ``w`` has shape ``(batch, k, m)``: ``k`` columns of length ``m`` stored
    contiguously; it is rotated in place.  Returns per-matrix convergence
    flags and the largest sweep count used.
    """
    batch, k, m = w.shape
    converged = np.zeros(batch, np.bool_)
    norms2 = np.empty(k)
    max_used = 0
    for b in range(batch):
        fro2 = 0.0
        for j in range(k):
            for i in range(m):
                z = w[b, j, i]
                fro2 += z.real * z.real + z.imag * z.imag
        noise2 = noise * noise * fro2
        done = k == 1
        sweeps = 0
        while not done and sweeps < max_sweeps:
            sweeps += 1
            for j in range(k):
                acc = 0.0
                for i in range(m):
                    z = w[b, j, i]
                    acc += z.real * z.real + z.imag * z.imag
                norms2[j] = acc
            rotated = False
            for p in range(k - 1):
                for q in range(p + 1, k):
                    alpha = norms2[p]
                    beta = norms2[q]
                    gamma = 0j
                    for i in range(m):
                        gamma += w[b, p, i].conjugate() * w[b, q, i]
                    g = abs(gamma)
                    if not g > tol * np.sqrt(alpha * beta):
                        continue
                    if min(alpha, beta) > noise2:
                        rotated = True
                    zeta = (beta - alpha) / (2.0 * g)
                    sign = 1.0 if zeta >= 0 else -1.0
                    t = sign / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = c * t
                    phase = gamma.conjugate() / g
                    for i in range(m):
                        x = w[b, p, i]
                        y = w[b, q, i] * phase
                        w[b, p, i] = c * x - s * y
                        w[b, q, i] = s * x + c * y
                    # exact Gram update of the rotated pair
                    norms2[p] = alpha - t * g
                    norms2[q] = beta + t * g
            done = not rotated
        converged[b] = done
        max_used = max(max_used, sweeps)
    return converged, max_used


def batched_singular_values(stack, tol=DEFAULT_TOL, max_sweeps=MAX_SWEEPS):
    """Singular values of every matrix in a ``(batch, rows, cols)`` stack.

    Returns ``(values, converged, sweeps)`` with ``values`` of shape
    ``(batch, min(rows, cols))`` sorted nonincreasing.
    """
    if tol <= 0:
        raise ContractError("tol must be positive")
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.ndim != 3:
        raise InputError(f"expected a 3-D stack, got shape {stack.shape}")
    if not np.all(np.isfinite(stack)):
        raise InputError("stack has non-finite entries")
    _, rows, cols = stack.shape
    if rows >= cols:
        w = np.ascontiguousarray(stack.transpose(0, 2, 1))
    else:
        # columns of A* are the conjugated rows of A
        w = np.conj(stack)
    converged, sweeps = _jacobi_columns(w, float(tol), int(max_sweeps), _NOISE)
    values = np.sqrt((w.real**2 + w.imag**2).sum(axis=2))
    values = -np.sort(-values, axis=1)
    return values, converged, sweeps


def svd(a, tol=DEFAULT_TOL):
    """Singular values of ``a`` by one-sided Jacobi (at most 60 sweeps)."""
    a = check_matrix(a)
    values, converged, sweeps = batched_singular_values(a[None], tol=tol)
    return SvdResult(values[0], bool(converged[0]), sweeps)


def _checked_svd(a, tol):
    res = svd(a, tol)
    if not res.converged:
        raise ConvergenceFailure(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")
    return res.singular_values


def sigma_min(a, tol=DEFAULT_TOL):
    """Smallest singular value, i.e. the l2 lower norm."""
    return float(_checked_svd(a, tol)[-1])


def op_norm(a, tol=DEFAULT_TOL):
    """Spectral norm (largest singular value)."""
    return float(_checked_svd(a, tol)[0])


def batched_mu(stack, tol=DEFAULT_TOL):
    """``min(sigma_min(A), sigma_min(A*))`` for a stack of square matrices.

    Both sides are computed independently and must agree to
    ``MU_AGREEMENT * max(1, |A|)``; a mismatch means the kernel is broken and
    raises.  Returns ``(mu, converged)``.
    """
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ContractError(f"mu needs square matrices, got shape {stack.shape[1:]}")
    sv, conv, _ = batched_singular_values(stack, tol)
    sv_adj, conv_adj, _ = batched_singular_values(np.conj(stack.transpose(0, 2, 1)), tol)
    lo, lo_adj = sv[:, -1], sv_adj[:, -1]
    slack = MU_AGREEMENT * np.maximum(1.0, sv[:, 0])
    bad = np.abs(lo - lo_adj) > slack
    if bad.any():
        i = int(np.nonzero(bad)[0][0])
        raise ConvergenceFailure(
            f"sigma_min(A)={lo[i]!r} and sigma_min(A*)={lo_adj[i]!r} disagree", node=i
        )
    return np.minimum(lo, lo_adj), conv & conv_adj


def mu(a, tol=DEFAULT_TOL):
    """``min(nu(A), nu(A*))`` for a square matrix."""
    a = check_matrix(a, square=True)
    values, converged = batched_mu(a[None], tol)
    if not converged[0]:
        raise ConvergenceFailure(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")
    return float(values[0])


def chunk_size(entries_per_item):
    return max(1, _CHUNK_ENTRIES // max(1, entries_per_item))


@njit(cache=True)
def _tgk_count_below(off2, x):
    """Eigenvalues below ``x`` of the zero-diagonal symmetric tridiagonal with
    squared off-diagonals ``off2`` (Sturm count of the LDL^T pivots)."""
    pivmin = 2.2250738585072014e-308
    q = -x
    if q == 0.0:
        q = -pivmin
    count = 1 if q < 0 else 0
    for j in range(off2.shape[0]):
        q = -x - off2[j] / q
        if q == 0.0:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@njit(cache=True)
def _bidiagonal_bisect(off2, n, hi0, rel, floor):
    batch = off2.shape[0]
    out = np.zeros(batch)
    for b in range(batch):
        row = off2[b]
        lo = floor
        hi = hi0[b]
        if _tgk_count_below(row, lo) >= n + 1:
            continue
        while hi - lo > rel * hi:
            mid = np.sqrt(lo) * np.sqrt(hi) if hi > 2.0 * lo else 0.5 * (lo + hi)
            if _tgk_count_below(row, mid) >= n + 1:
                hi = mid
            else:
                lo = mid
        out[b] = 0.5 * (lo + hi)
    return out


def bidiagonal_sigma_min(diag, sup):
    """Smallest singular value of upper bidiagonal matrices.

    ``diag`` has shape ``(batch, n)`` and ``sup`` shape ``(batch, n - 1)``.
    Uses bisection on the Golub-Kahan tridiagonal ``[[0, B*], [B, 0]]``,
    whose eigenvalues are ``+-sigma_i``; phases of the entries do not change
    singular values, so only magnitudes enter.  Bisection runs on a
    geometric scale until the bracket is relatively tight to ~4 ulp.
    Values below 1e-300 are returned as 0.
    """
    d = np.abs(np.asarray(diag, dtype=np.complex128))
    e = np.abs(np.asarray(sup, dtype=np.complex128))
    batch, n = d.shape
    off = np.empty((batch, 2 * n - 1))
    off[:, 0::2] = d
    off[:, 1::2] = e
    hi = np.max(d, axis=1) + np.max(e, axis=1, initial=0.0) + 1e-300
    return _bidiagonal_bisect(off * off, n, hi, 4 * np.finfo(float).eps, 1e-300)


def lower_norm_sampled(a, p, trials, seed):
    """Monte-Carlo upper bound for ``inf_{|x|_p = 1} |Ax|_p``.

    Draws ``trials`` complex Gaussian directions from ``SplitMix64(seed)``,
    normalizes each in the ``p``-norm and returns the smallest image norm.
    Only meant as an oracle for matrices with at most 8 columns.
    """
    a = check_matrix(a)
    if p not in (1, 2, np.inf):
        raise ContractError(f"p must be 1, 2 or inf, got {p!r}")
    if int(trials) < 1:
        raise ContractError("trials must be >= 1")
    if max(a.shape) > 8:
        raise ContractError("lower_norm_sampled is limited to dimensions <= 8")
    rng = SplitMix64(seed)
    best = np.inf
    remaining = int(trials)
    step = 1 << 15
    while remaining > 0:
        m = min(step, remaining)
        remaining -= m
        x = rng.complex_normal((m, a.shape[1]))
        y = x @ a.T
        ratio = np.linalg.norm(y, ord=p, axis=1) / np.linalg.norm(x, ord=p, axis=1)
        best = min(best, float(ratio.min()))
    return best
