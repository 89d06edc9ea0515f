"""Small dense real linear-algebra kernel.

Matrices and vectors are plain float64 ``numpy`` arrays. numpy supplies the
storage and BLAS-level products; the factorizations and eigen/singular value
routines below are written out here so every step is inspectable.
"""

import math

import numpy as np

from .errors import (
    AsymmetricMatrixError,
    ConvergenceError,
    DimensionError,
    NonFiniteError,
    SingularMatrixError,
)

PIVOT_RTOL = 1e-14
SYMMETRY_RTOL = 1e-12
JACOBI_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 60
NEGLIGIBLE_RTOL = 1e-18


def as_matrix(m):
    """Return ``m`` as a finite 2-d float64 array (a copy is made only if needed)."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix has NaN or infinite entries")
    return a


def as_vector(v):
    a = np.asarray(v, dtype=np.float64)
    if a.ndim != 1 or a.shape[0] < 1:
        raise DimensionError(f"expected a non-empty 1-d vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("vector has NaN or infinite entries")
    return a


def identity(n):
    return np.eye(n)


def matvec(m, v):
    m = as_matrix(m)
    v = as_vector(v)
    if m.shape[1] != v.shape[0]:
        raise DimensionError(f"cannot multiply {m.shape} matrix by vector of length {v.shape[0]}")
    return m @ v


def frobenius_sq(m):
    """Sum of squared entries, i.e. ``trace(M M^T)``."""
    m = as_matrix(m)
    return float(np.einsum("ij,ij->", m, m))


def _require_square(m):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")


def lu_factor(m):
    """Partial-pivoted LU factorization.

    Returns ``(lu, perm)`` where the strict lower triangle of ``lu`` holds the
    unit-lower factor, the upper triangle holds U, and ``perm`` is the row
    permutation so that ``m[perm] = L @ U``.
    """
    m = as_matrix(m)
    _require_square(m)
    n = m.shape[0]
    lu = m.copy()
    perm = np.arange(n)
    scale = float(np.max(np.abs(m)))
    threshold = PIVOT_RTOL * scale
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= threshold or scale == 0.0:
            raise SingularMatrixError(
                f"pivot {lu[p, k]:.3e} in column {k} is below {threshold:.3e}"
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_solve_factored(lu, perm, b):
    n = lu.shape[0]
    y = np.asarray(b, dtype=np.float64)[perm].copy()
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
    return y


def lu_solve(m, b):
    """Solve ``m @ y = b`` by Gaussian elimination with partial pivoting."""
    m = as_matrix(m)
    b = as_vector(b)
    _require_square(m)
    if b.shape[0] != m.shape[0]:
        raise DimensionError(f"right-hand side has length {b.shape[0]}, matrix is {m.shape}")
    lu, perm = lu_factor(m)
    return lu_solve_factored(lu, perm, b)


def unit_vector(rng, n):
    """Uniform random point on the unit sphere in R^n (normalized Gaussian)."""
    while True:
        v = rng.standard_normal(n)
        nrm = np.linalg.norm(v)
        if nrm > 0.0:
            return v / nrm


def canonicalize(v):
    """Flip the global sign of ``v`` so its first nonzero entry is positive."""
    v = np.asarray(v, dtype=np.float64)
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v.copy()


def _eig_residual(m, lam, v):
    return float(np.linalg.norm(m @ v - lam * v))


def power_iteration(m, tol=1e-12, max_iters=10_000, rng=None):
    """Eigenpair for the algebraically largest real eigenvalue of ``m``.

    The iteration runs on ``m + alpha*I`` with ``alpha = ||m||_F``, which moves
    every eigenvalue into the right half-plane, so the largest eigenvalue is
    also the one of largest modulus there. Without the shift, pairs such as
    ``+1, -1`` tie in modulus and plain power iteration oscillates.

    Returns ``(lam, v)`` with ``||m v - lam v|| <= tol * ||m||_F``, ``||v|| = 1``
    and ``lam`` the Rayleigh quotient.
    """
    m = as_matrix(m)
    _require_square(m)
    rng = np.random.default_rng() if rng is None else rng
    n = m.shape[0]
    fro = math.sqrt(frobenius_sq(m))
    if fro == 0.0:
        return 0.0, canonicalize(unit_vector(rng, n))
    shifted = m + fro * np.eye(n)
    v = unit_vector(rng, n)
    res = math.inf
    for _ in range(max_iters):
        w = shifted @ v
        v = w / np.linalg.norm(w)
        lam = float(v @ (m @ v))
        res = _eig_residual(m, lam, v)
        if res <= tol * fro:
            return lam, canonicalize(v)
    raise ConvergenceError(f"power iteration did not converge in {max_iters} steps", res)


def inverse_iteration(m, shift, tol=1e-12, max_iters=1_000, rng=None):
    """Eigenpair of ``m`` whose eigenvalue is nearest ``shift``.

    ``m - shift*I`` is factored once; a shift that sits on an eigenvalue
    raises :class:`SingularMatrixError`.
    """
    m = as_matrix(m)
    _require_square(m)
    rng = np.random.default_rng() if rng is None else rng
    n = m.shape[0]
    fro = math.sqrt(frobenius_sq(m))
    lu, perm = lu_factor(m - shift * np.eye(n))
    v = unit_vector(rng, n)
    res = math.inf
    for _ in range(max_iters):
        w = lu_solve_factored(lu, perm, v)
        v = w / np.linalg.norm(w)
        lam = float(v @ (m @ v))
        res = _eig_residual(m, lam, v)
        if res <= tol * fro:
            return lam, canonicalize(v)
    raise ConvergenceError(f"inverse iteration did not converge in {max_iters} steps", res)


def _round_robin(n):
    """Pairings for a cyclic Jacobi sweep; every round is a set of disjoint pairs.

    Odd ``n`` gets a dummy index ``n`` which is dropped from the pairs.
    """
    players = list(range(n + (n % 2)))
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        p = [players[i] for i in range(m // 2)]
        q = [players[m - 1 - i] for i in range(m // 2)]
        keep = [(a, b) for a, b in zip(p, q) if a < n and b < n]
        if keep:
            pp, qq = zip(*keep)
            rounds.append((np.array(pp), np.array(qq)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _offdiag_sq(s):
    off = s.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.einsum("ij,ij->", off, off))


def _rotate_rows(a, p, q, c, sn):
    rp, rq = a[p, :], a[q, :]
    a[p, :] = c[:, None] * rp - sn[:, None] * rq
    a[q, :] = sn[:, None] * rp + c[:, None] * rq


def symmetric_eigenvalues(s):
    """All eigenvalues of a symmetric matrix, descending, by cyclic Jacobi.

    Each round of a sweep annihilates n/2 disjoint off-diagonal entries at
    once (round-robin ordering), so the rotations can be applied as vectorized
    row and column updates.
    """
    s = as_matrix(s)
    _require_square(s)
    fro = math.sqrt(frobenius_sq(s))
    if np.max(np.abs(s - s.T), initial=0.0) > SYMMETRY_RTOL * max(fro, np.finfo(float).tiny):
        raise AsymmetricMatrixError("matrix is not symmetric")
    a = 0.5 * (s + s.T)
    n = a.shape[0]
    target = (JACOBI_RTOL * fro) ** 2
    rounds = _round_robin(n)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_sq(a) <= target:
            return np.sort(np.diag(a))[::-1].copy()
        for p, q in rounds:
            apq = a[p, q]
            # entries this small are already zero for convergence purposes
            active = np.abs(apq) > NEGLIGIBLE_RTOL * fro
            if not np.any(active):
                continue
            app, aqq = a[p, p], a[q, q]
            tau = np.where(active, (aqq - app) / (2.0 * np.where(active, apq, 1.0)), 0.0)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            sn = t * c
            # J^T A J as two row rotations: (J^T A)^T = A J for symmetric A
            _rotate_rows(a, p, q, c, sn)
            a = np.ascontiguousarray(a.T)
            _rotate_rows(a, p, q, c, sn)
            a[p, q] = 0.0
            a[q, p] = 0.0
    raise ConvergenceError(
        f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps", math.sqrt(_offdiag_sq(a))
    )


def singular_values(m):
    """The ``min(rows, cols)`` singular values, descending, as square roots
    of the eigenvalues of the smaller Gram matrix.

    Negative eigenvalues produced by rounding are clamped to zero. The smallest
    value is only accurate to about ``sqrt(eps) * ||m||``.
    """
    m = as_matrix(m)
    gram = m.T @ m if m.shape[0] >= m.shape[1] else m @ m.T
    gram = 0.5 * (gram + gram.T)
    ev = symmetric_eigenvalues(gram)
    return np.sqrt(np.clip(ev, 0.0, None))
