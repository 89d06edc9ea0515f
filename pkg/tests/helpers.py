"""Independent oracles and shared fixtures for the test suite.

Nothing here calls the package routine it is used to check.
"""

import itertools
import math
from functools import lru_cache

import numpy as np

from eigsign import harness

HAND_A = np.array([[0.0, 2.0], [0.5, 0.0]])
HAND_M = np.array([2.0, 1.0])
HAND_C = np.array([[-1.0, 1.0], [1.0, -1.0]])

SEEDS = tuple(range(10))

# acceptance lines collected for the terminal summary
ACCEPTANCE_LINES = []


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def enumerate_signs(c):
    """Exhaustive minimizer of |C s| over s with s[0] = +1, by plain iteration."""
    n = c.shape[0]
    best, best_s = math.inf, None
    for tail in itertools.product((1.0, -1.0), repeat=n - 1):
        s = np.array((1.0,) + tail)
        r = float(np.linalg.norm(c @ s))
        if r < best:
            best, best_s = r, s
    return best_s, best


def enumerated_step_decay(c, y, eps):
    """E|r_{k+1}|^2 by summing over every row, each projection done by hand."""
    row_sq = [float(sum(v * v for v in row)) for row in c]
    total = sum(row_sq)
    eps = np.asarray(eps, dtype=float)
    acc = 0.0
    for i, row in enumerate(c):
        if row_sq[i] == 0.0:
            continue
        dot = sum(a * b for a, b in zip(row, y))
        y_new = [a - dot / row_sq[i] * b for a, b in zip(y, row)]
        along = sum(a * b for a, b in zip(y_new, eps)) / len(eps)
        r = [a - along * e for a, e in zip(y_new, eps)]
        acc += row_sq[i] / total * sum(v * v for v in r)
    return acc


def hadamard_secular_roots(order=256, corner=2.0):
    """The two eigenvalues of ``H/sqrt(order)`` with ``A[0,0] = corner`` that move.

    A rank-one change ``delta e1 e1^T`` of a matrix with spectrum +-1 leaves
    every other eigenvalue at +-1; the two moved ones solve
    ``lam^2 - delta*lam - (1 + delta*h11) = 0`` with ``h11 = 1/sqrt(order)``.
    """
    h11 = 1.0 / math.sqrt(order)
    delta = corner - h11
    disc = math.sqrt(delta * delta + 4.0 * (1.0 + delta * h11))
    return (delta + disc) / 2.0, (delta - disc) / 2.0


def plant_errors(truth, count, rng):
    s = np.array(truth, dtype=float)
    s[rng.choice(len(s), count, replace=False)] *= -1.0
    return s


@lru_cache(maxsize=None)
def figure_batch(which):
    """``figure_runs`` over the ten fixed seeds, computed once per session."""
    return tuple(harness.figure_runs(which, seed) for seed in SEEDS)
