"""Algorithm 2: random single-entry sign flips weighted by the residual.

Entry ``i`` of the current guess is flipped with probability proportional to
``(C s)_i^2``. The residual is updated in O(n) per flip from one column of C.
"""

from dataclasses import dataclass

import numpy as np

from . import theory
from .errors import AlreadyConverged
from ._kernels import flip_block
from .runs import BUDGET_EXHAUSTED, RECOVERED, RunReport, TracePoint
from .signsys import residual


@dataclass
class FlipState:
    s: np.ndarray
    v: np.ndarray
    k: int = 0


def init_flip(n, mode="random", s0=None, sys=None, rng=None):
    if mode == "given":
        s = np.asarray(s0, dtype=np.float64).copy()
        if s.shape != (n,) or not np.all(np.abs(s) == 1.0):
            raise ValueError("s0 must be a length-n vector of +-1")
    elif mode == "random":
        rng = np.random.default_rng() if rng is None else rng
        s = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    else:
        raise ValueError(f"unknown init mode {mode!r}")
    return FlipState(s=s, v=residual(sys, s))


def apply_flip(state, sys, i):
    """Flip entry ``i`` in place: ``v <- v - 2 s_i C[:, i]``."""
    state.v -= 2.0 * state.s[i] * sys.cols[i]
    state.s[i] = -state.s[i]
    state.k += 1


def _draw_index(w, rng):
    cum = np.cumsum(w)
    i = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(i, int(np.flatnonzero(w)[-1]))


def flip_step(state, sys, rng, tol=1e-8):
    """Sample an entry with probability ``v_i^2 / |v|^2`` and flip it.

    Returns a new state; raises :class:`AlreadyConverged` if ``|v|`` is at or
    below ``tol * |C|_F``.
    """
    w = state.v * state.v
    if float(w.sum()) <= (tol * sys.frob) ** 2:
        raise AlreadyConverged("residual is already zero")
    new = FlipState(s=state.s.copy(), v=state.v.copy(), k=state.k)
    apply_flip(new, sys, _draw_index(w, rng))
    return new


def run_algorithm2(sys, cfg, rng, truth=None, s0=None):
    """Run Algorithm 2 until ``|C s| <= success_tol * |C|_F`` or ``max_iters`` flips."""
    n = sys.n
    state = init_flip(n, "random" if s0 is None else "given", s0=s0, sys=sys, rng=rng)
    check_every = cfg.check_interval(n)
    stride = cfg.record_interval() if cfg.record_trace else 4096
    thresh = (cfg.success_tol * sys.frob) ** 2
    truth = None if truth is None else np.asarray(truth, dtype=np.float64)
    trace = []

    def record():
        p = TracePoint(k=state.k, norm_sq=float(state.v @ state.v))
        if truth is not None:
            p.mismatch = theory.mismatch_min(state.s, truth)
        trace.append(p)

    converged = False
    while True:
        if cfg.record_trace and state.k % stride == 0:
            record()
        block = min(stride - state.k % stride, cfg.max_iters - state.k)
        # uniforms left over after convergence are simply discarded
        done, converged = flip_block(
            state.s, state.v, sys.cols, sys.c, rng.random(block), thresh, state.k, check_every
        )
        state.k += done
        if converged or state.k >= cfg.max_iters:
            break
    if cfg.record_trace and trace[-1].k != state.k:
        record()
    return RunReport(
        algorithm=2,
        status=RECOVERED if converged else BUDGET_EXHAUSTED,
        iters_used=state.k,
        final_signs=state.s.copy(),
        trace=trace,
        recovered_at=state.k if converged else None,
    )
