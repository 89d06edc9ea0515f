"""The sign system ``C = D^-1 A D - lam I`` with ``D = diag(|x|)``.

The true sign vector spans the null space of ``C``. Both recovery algorithms
work on this matrix only.
"""

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSystemError


def make_rng(seed=None):
    """Seedable random source (numpy PCG64). ``None`` seeds from the OS."""
    return np.random.default_rng(seed)


def derive_seed(master_seed, index):
    """Independent 63-bit seed for stream ``index`` under ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


@dataclass(frozen=True, eq=False)
class SignSystem:
    c: np.ndarray
    row_norms_sq: np.ndarray
    frob_sq: float
    cum_weights: np.ndarray
    # contiguous copy of C^T; Algorithm 2 reads one column per flip
    cols: np.ndarray
    last_row: int  # last row with nonzero norm

    @property
    def n(self):
        return self.c.shape[0]

    @property
    def frob(self):
        return float(np.sqrt(self.frob_sq))


def sign_matrix(problem):
    """``C`` itself: ``C[i, j] = a[i, j] * m[j] / m[i] - lam * [i == j]``."""
    m = problem.magnitudes
    c = problem.a * (m[None, :] / m[:, None])
    c[np.diag_indices_from(c)] -= problem.lam
    return c


def build_sign_system(problem):
    c = sign_matrix(problem)
    row_norms_sq = np.einsum("ij,ij->i", c, c)
    cum = np.cumsum(row_norms_sq)
    frob_sq = float(cum[-1])
    if not frob_sq > 0.0:
        raise DegenerateSystemError("C is identically zero; every sign vector solves it")
    for arr in (c, row_norms_sq, cum):
        arr.setflags(write=False)
    cols = np.ascontiguousarray(c.T)
    cols.setflags(write=False)
    return SignSystem(
        c=c,
        row_norms_sq=row_norms_sq,
        frob_sq=frob_sq,
        cum_weights=cum,
        cols=cols,
        last_row=int(np.flatnonzero(row_norms_sq)[-1]),
    )


def rows_for_uniforms(sys, u):
    """Map uniforms in [0, 1) to rows drawn with probability ``|c_j|^2 / |C|_F^2``.

    ``side='right'`` skips zero-norm rows, whose prefix sum equals the previous one.
    """
    idx = np.searchsorted(sys.cum_weights, np.asarray(u) * sys.frob_sq, side="right")
    return np.minimum(idx, sys.last_row)


def sample_row(sys, rng):
    u = rng.random() * sys.frob_sq
    j = bisect.bisect_right(sys.cum_weights, u)
    return min(j, sys.last_row)


def extract_signs(y):
    """Componentwise sign with sign(0) = +1 (also for -0.0)."""
    return np.where(np.asarray(y) < 0, -1.0, 1.0)


def residual(sys, s):
    """``C s`` for a sign vector ``s``."""
    return sys.c @ np.asarray(s, dtype=np.float64)
