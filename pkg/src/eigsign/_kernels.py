"""Compiled inner loops for both algorithms.

The loops are inherently sequential (each step reads the previous iterate),
so they are compiled with numba rather than vectorized.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def project_rows_checked(c, row_norms_sq, rows, y, k, check_every, thresh, check, stop):
    """``project_rows`` that also runs the sign-residual test every
    ``check_every`` steps (counted from the global counter ``k``) if ``check``.

    Returns ``(steps_done, passed_at)`` where ``passed_at`` is the global step
    of the first passing check, or -1. Checks stop after the first pass; with
    ``stop`` the block also ends there.
    """
    n = y.shape[0]
    passed_at = -1
    for t in range(rows.shape[0]):
        i = rows[t]
        dot = 0.0
        for j in range(n):
            dot += c[i, j] * y[j]
        coef = dot / row_norms_sq[i]
        for j in range(n):
            y[j] -= coef * c[i, j]
        if check and passed_at < 0 and (k + t + 1) % check_every == 0:
            if sign_residual_sq(c, y) <= thresh:
                passed_at = k + t + 1
                if stop:
                    return t + 1, passed_at
    return rows.shape[0], passed_at


@numba.njit(cache=True)
def sign_residual_sq(c, y):
    """``|C sign(y)|^2`` with sign(0) = +1."""
    n = y.shape[0]
    total = 0.0
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if y[j] < 0.0:
                acc -= c[i, j]
            else:
                acc += c[i, j]
        total += acc * acc
    return total


@numba.njit(cache=True)
def flip_block(s, v, cols, c, uniforms, thresh, k, check_every):
    """Run up to ``len(uniforms)`` flips in place.

    Returns ``(flips_done, converged)``. Every ``check_every`` flips (counted
    from the global counter ``k``) the residual is recomputed from scratch.
    """
    n = s.shape[0]
    w = np.empty(n)
    done = 0
    for t in range(uniforms.shape[0]):
        total = 0.0
        for j in range(n):
            w[j] = v[j] * v[j]
            total += w[j]
        if total <= thresh:
            return done, True
        target = uniforms[t] * total
        acc = 0.0
        i = -1
        for j in range(n):
            acc += w[j]
            if w[j] > 0.0:
                i = j
                if acc > target:
                    break
        si = s[i]
        for j in range(n):
            v[j] -= 2.0 * si * cols[i, j]
        s[i] = -si
        done += 1
        if (k + done) % check_every == 0:
            for r in range(n):
                acc = 0.0
                for j in range(n):
                    acc += c[r, j] * s[j]
                v[r] = acc
    total = 0.0
    for j in range(n):
        total += v[j] * v[j]
    return done, total <= thresh
