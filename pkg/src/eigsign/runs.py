"""Run configuration and per-run reports shared by both algorithms."""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

RECOVERED = "recovered"
BUDGET_EXHAUSTED = "budget_exhausted"
MAX_TRACE_POINTS = 512


@dataclass
class RunConfig:
    max_iters: int
    check_every: Optional[int] = None  # None -> n
    success_tol: float = 1e-8
    record_trace: bool = True
    record_every: Optional[int] = None  # None -> ceil(max_iters / 512)
    stop_on_success: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.check_every is not None and self.check_every < 1:
            raise ValueError("check_every must be >= 1")
        if self.record_every is not None and self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    def check_interval(self, n):
        return self.check_every or n

    def record_interval(self):
        return self.record_every or max(1, math.ceil(self.max_iters / MAX_TRACE_POINTS))


@dataclass
class TracePoint:
    k: int
    norm_sq: float  # |y_k|^2 for Algorithm 1, |C eps_k|^2 for Algorithm 2
    mismatch: Optional[int] = None
    weighted_obj: Optional[float] = None
    bound: Optional[float] = None


@dataclass
class RunReport:
    algorithm: int
    status: str
    iters_used: int
    final_signs: np.ndarray
    trace: List[TracePoint] = field(default_factory=list)
    recovered_at: Optional[int] = None
    y0_norm_sq: Optional[float] = None
    y0_along_truth: Optional[float] = None  # <y_0, eps>, conserved along the run

    @property
    def recovered(self):
        return self.status == RECOVERED

    def first_exact_k(self):
        """First recorded k with zero mismatch, or None."""
        for p in self.trace:
            if p.mismatch == 0:
                return p.k
        return None
