"""Exhaustive ground truth for small sign systems."""

import math
from typing import NamedTuple

import numpy as np

from . import numkit
from .errors import AmbiguousSolutionError, OracleSizeError

MAX_N = 24
AMBIGUITY_RTOL = 1e-6
NULL_RTOL = 1e-8
GAP_RTOL = 1e-6
_CHUNK = 1 << 15


class BruteForceResult(NamedTuple):
    signs: np.ndarray
    residual: float
    runner_up: float

    @property
    def gap(self):
        return self.runner_up - self.residual


def _sign_block(start, stop, n):
    """Sign vectors with s[0] = +1 whose remaining entries encode ``start..stop-1`` in binary."""
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n - 1, dtype=np.int64)) & 1
    block = np.ones((codes.shape[0], n))
    block[:, 1:] = 1.0 - 2.0 * bits
    return block


def brute_force_signs(sys, check_ambiguity=True):
    """Minimize ``|C s|`` over all ``2^(n-1)`` sign vectors with ``s[0] = +1``.

    Raises :class:`AmbiguousSolutionError` when the runner-up is within
    ``1e-6 * |C|_F`` of the minimum, i.e. the minimizer is not unique.
    """
    n = sys.n
    if n > MAX_N:
        raise OracleSizeError(f"n = {n} exceeds the brute-force limit of {MAX_N}")
    total = 1 << (n - 1)
    best, second = math.inf, math.inf
    best_code = 0
    ct = sys.c.T
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        res = np.linalg.norm(_sign_block(start, stop, n) @ ct, axis=1)
        order = np.argsort(res)[:2]
        for j in order:
            r = float(res[j])
            if r < best:
                best, second, best_code = r, best, start + int(j)
            elif r < second:
                second = r
    signs = _sign_block(best_code, best_code + 1, n)[0]
    result = BruteForceResult(signs=signs, residual=best, runner_up=second)
    if check_ambiguity and result.gap <= AMBIGUITY_RTOL * sys.frob:
        raise AmbiguousSolutionError(
            f"runner-up residual {second:.3e} is within {AMBIGUITY_RTOL:g}*|C|_F "
            f"of the minimum {best:.3e}"
        )
    return result


def nullspace_unique(sys, sigma=None):
    """``(sigma_n, sigma_{n-1}, unique)`` for ``C``.

    Unique means a one-dimensional null space: the smallest singular value is
    numerically zero and the next one is not.
    """
    if sigma is None:
        sigma = numkit.singular_values(sys.c)
    fro = sys.frob
    s_n = float(sigma[-1])
    s_n1 = float(sigma[-2]) if len(sigma) > 1 else math.inf
    unique = s_n <= NULL_RTOL * fro and s_n1 > GAP_RTOL * fro
    return s_n, s_n1, bool(unique)
