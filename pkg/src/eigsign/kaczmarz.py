"""Algorithm 1: randomized Kaczmarz projections onto the rows of C.

Each step projects ``y`` onto the hyperplane orthogonal to a row ``c_i``
drawn with probability ``|c_i|^2 / |C|_F^2``. The component of ``y`` along
the sign vector never changes while the rest decays, so the signs of ``y``
eventually match the hidden ones up to a global flip.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import numkit, theory
from ._kernels import project_rows_checked, sign_residual_sq
from .runs import BUDGET_EXHAUSTED, RECOVERED, RunReport, TracePoint
from .signsys import extract_signs, rows_for_uniforms, sample_row

MAX_BLOCK = 1 << 16


@dataclass
class KaczmarzState:
    y: np.ndarray
    k: int = 0


def init_state(n, mode="random_sphere", y0=None, radius=1.0, rng=None):
    if mode == "given":
        if y0 is None:
            raise ValueError("mode='given' needs y0")
        y = numkit.as_vector(y0).copy()
        if y.shape[0] != n:
            raise ValueError(f"y0 has length {y.shape[0]}, expected {n}")
        if not np.any(y):
            raise ValueError("y0 must be nonzero")
        return KaczmarzState(y=y)
    if mode == "random_sphere":
        rng = np.random.default_rng() if rng is None else rng
        return KaczmarzState(y=radius * numkit.unit_vector(rng, n))
    raise ValueError(f"unknown init mode {mode!r}")


def project_row(y, sys, i):
    """``y - <y, c_i> / |c_i|^2 * c_i`` (returns a new vector)."""
    c = sys.c[i]
    return y - (c @ y) / sys.row_norms_sq[i] * c


def kaczmarz_step(state, sys, rng, row=None):
    """One projection step; ``row`` forces the row instead of sampling it."""
    i = sample_row(sys, rng) if row is None else row
    return KaczmarzState(y=project_row(state.y, sys, i), k=state.k + 1)


def default_max_iters(sys, stats=None):
    n = sys.n
    if stats is not None:
        return math.ceil(10.0 * sys.frob_sq / stats.sigma_n_minus_1 ** 2 * math.log(n))
    return math.ceil(100.0 * n * math.log(n))


def signs_pass(sys, y, tol):
    """Residual test on ``sign(y)``: ``|C sign(y)| <= tol * |C|_F``."""
    return sign_residual_sq(sys.c, np.ascontiguousarray(y, dtype=np.float64)) <= (tol * sys.frob) ** 2


def run_algorithm1(sys, cfg, rng, truth=None, y0=None, stats=None):
    """Run Algorithm 1 under ``cfg``.

    ``y0`` defaults to a uniform point on the unit sphere drawn from ``rng``.
    With ``truth`` the trace carries the mismatch and the weighted objective
    ``mismatch * |y_k|^2``; with ``stats`` it also carries the expected-value
    bound at each recorded k.
    """
    n = sys.n
    state = init_state(n, "random_sphere", rng=rng) if y0 is None else init_state(n, "given", y0)
    y = state.y
    y0_norm_sq = float(y @ y)
    check_every = cfg.check_interval(n)
    stride = cfg.record_interval() if cfg.record_trace else cfg.max_iters
    truth = None if truth is None else np.asarray(truth, dtype=np.float64)
    y0_along_truth = None if truth is None else float(y @ truth)

    trace = []

    def record(k):
        nsq = float(y @ y)
        p = TracePoint(k=k, norm_sq=nsq)
        if truth is not None:
            p.mismatch = theory.mismatch_min(extract_signs(y), truth)
            p.weighted_obj = p.mismatch * nsq
        if stats is not None:
            p.bound = theory.theorem_bound(stats, k, y0_norm_sq, n)
        trace.append(p)

    if cfg.record_trace:
        record(0)
    thresh = (cfg.success_tol * sys.frob) ** 2
    k = 0
    recovered_at = None
    while k < cfg.max_iters:
        # uniforms are drawn per block, which yields the same stream as one
        # draw per step; blocks end on record boundaries
        block = min(stride - k % stride, cfg.max_iters - k, MAX_BLOCK)
        rows = rows_for_uniforms(sys, rng.random(block))
        done, passed_at = project_rows_checked(
            sys.c, sys.row_norms_sq, rows, y, k, check_every, thresh,
            recovered_at is None, cfg.stop_on_success,
        )
        k += done
        if passed_at >= 0:
            recovered_at = passed_at
        if cfg.record_trace and k % stride == 0:
            record(k)
        if recovered_at is not None and cfg.stop_on_success:
            break
    if recovered_at is None and k % check_every != 0 and signs_pass(sys, y, cfg.success_tol):
        recovered_at = k
    if cfg.record_trace and trace[-1].k != k:
        record(k)

    return RunReport(
        algorithm=1,
        status=RECOVERED if signs_pass(sys, y, cfg.success_tol) else BUDGET_EXHAUSTED,
        iters_used=k,
        final_signs=extract_signs(y),
        trace=trace,
        recovered_at=recovered_at,
        y0_norm_sq=y0_norm_sq,
        y0_along_truth=y0_along_truth,
    )
