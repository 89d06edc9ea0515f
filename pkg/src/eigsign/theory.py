"""Quantities from the convergence analysis of Algorithm 1, plus the residual
diagnostic that explains when Algorithm 2 works.

Sign vectors have entries +-1, so ``|eps|^2 = n`` is used in closed form.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import numkit
from .errors import DegenerateGapError, DimensionError
from .signsys import extract_signs

GAP_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralStats:
    sigma_n: float
    sigma_n_minus_1: float
    frob_sq: float
    contraction: float
    predicted_iters: int
    n: int

    @property
    def nlogn_floor(self):
        """``(n - 1) log n``: the iteration count no system can beat, since
        ``sigma_{n-1}^2 <= |C|_F^2 / (n - 1)``."""
        return (self.n - 1) * math.log(self.n)


def spectral_stats(sys, sigma=None):
    """Singular-value summary of ``C``; raises if the second-smallest
    singular value is numerically zero."""
    if sigma is None:
        sigma = numkit.singular_values(sys.c)
    n = sys.n
    if n < 2:
        raise DegenerateGapError("a 1x1 system has no second singular value")
    s_n, s_n1 = float(sigma[-1]), float(sigma[-2])
    frob_sq = sys.frob_sq
    if s_n1 <= GAP_RTOL * math.sqrt(frob_sq):
        raise DegenerateGapError(
            f"sigma_(n-1) = {s_n1:.3e} is not separated from zero (|C|_F^2 = {frob_sq:.3e})"
        )
    ratio = s_n1 ** 2 / frob_sq
    return SpectralStats(
        sigma_n=s_n,
        sigma_n_minus_1=s_n1,
        frob_sq=frob_sq,
        contraction=max(0.0, 1.0 - ratio),
        predicted_iters=math.ceil(math.log(n) / ratio),
        n=n,
    )


def _same_length(a, b):
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")


def mismatch_min(candidate, truth):
    """``min(#S, n - #S)`` where S is the set of disagreeing entries."""
    _same_length(candidate, truth)
    n = len(truth)
    bad = int(np.count_nonzero(np.asarray(candidate) != np.asarray(truth)))
    return min(bad, n - bad)


def theorem_bound(stats, k, y0_norm_sq, n):
    """Upper bound on ``E[mismatch * |y_k|^2]``: ``n * contraction^k * |y_0|^2``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return n * stats.contraction ** k * y0_norm_sq


def decompose(y, truth):
    """Split ``y`` into its component along ``truth`` and the orthogonal rest."""
    _same_length(y, truth)
    y = np.asarray(y, dtype=np.float64)
    eps = np.asarray(truth, dtype=np.float64)
    pi = (y @ eps) / len(eps) * eps
    return pi, y - pi


def expected_step_decay(sys, r):
    """Exact ``E|r_{k+1}|^2`` given ``r_k = r``: ``|r|^2 - |C r|^2 / |C|_F^2``."""
    r = np.asarray(r, dtype=np.float64)
    cr = sys.c @ r
    return float(r @ r - (cr @ cr) / sys.frob_sq)


def lemma2_gap(y, truth):
    """``(|r|^2, mismatch / n * |y|^2)``; the first always dominates the second."""
    _, r = decompose(y, truth)
    y = np.asarray(y, dtype=np.float64)
    lhs = float(r @ r)
    rhs = mismatch_min(extract_signs(y), truth) / len(y) * float(y @ y)
    return lhs, rhs


@dataclass(frozen=True)
class ResidualSplit:
    mean_abs_correct: Optional[float]
    mean_abs_incorrect: Optional[float]

    @property
    def separation(self):
        """``mean_abs_incorrect / mean_abs_correct``; None if either side is absent."""
        if self.mean_abs_correct is None or self.mean_abs_incorrect is None:
            return None
        if self.mean_abs_correct == 0.0:
            return math.inf
        return self.mean_abs_incorrect / self.mean_abs_correct


def residual_split(sys, candidate, truth, lam=None):
    """Mean ``|(C s)_i|`` over the entries ``s`` gets right and over those it gets wrong.

    ``truth`` is first re-oriented to whichever global sign disagrees with
    ``candidate`` in fewer places. A side with no entries is reported as None.
    Wrong entries are expected near ``2|lam|`` and right ones near 0 when
    ``|lam|`` dominates; ``lam`` is accepted for that comparison but unused.
    """
    _same_length(candidate, truth)
    s = np.asarray(candidate, dtype=np.float64)
    eps = np.asarray(truth, dtype=np.float64)
    if np.count_nonzero(s != eps) > len(eps) / 2:
        eps = -eps
    v = np.abs(sys.c @ s)
    right = s == eps
    mean_right = float(v[right].mean()) if right.any() else None
    mean_wrong = float(v[~right].mean()) if (~right).any() else None
    return ResidualSplit(mean_right, mean_wrong)
