"""Problem instances: the matrix, the known eigenvalue, entry magnitudes and
(optionally) the hidden sign pattern.

Generators cover synthetic planted instances with exact ground truth, the
perturbed Sylvester-Hadamard matrix and the spiked symmetric Gaussian matrix.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import numkit
from .errors import DegenerateInstanceError, ProblemValidationError

RESIDUAL_RTOL = 1e-8
ZERO_MAGNITUDE_RTOL = 1e-12
EIGEN_TOL = 1e-13
MAGNITUDE_LAWS = ("unit", "folded_gaussian", "decaying")


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EigenPhaseProblem:
    """A sign-recovery instance ``A x = lam x`` with ``|x|`` known.

    Arrays are copied and made read-only on construction, and every invariant
    is checked there, so a constructed problem is always valid.
    """

    a: np.ndarray
    lam: float
    magnitudes: np.ndarray
    truth_signs: Optional[np.ndarray] = None

    def __post_init__(self):
        try:
            a = numkit.as_matrix(self.a)
            m = numkit.as_vector(self.magnitudes)
        except ValueError as exc:
            raise ProblemValidationError(str(exc)) from exc
        n = m.shape[0]
        if a.shape != (n, n):
            raise ProblemValidationError(f"matrix shape {a.shape} does not match {n} magnitudes")
        if not math.isfinite(self.lam):
            raise ProblemValidationError("eigenvalue must be finite")
        if np.any(m <= 0.0):
            raise ProblemValidationError("all magnitudes must be strictly positive")
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "magnitudes", _frozen(m))
        object.__setattr__(self, "lam", float(self.lam))
        if self.truth_signs is None:
            return
        s = np.asarray(self.truth_signs, dtype=np.float64)
        if s.shape != (n,) or not np.all(np.abs(s) == 1.0):
            raise ProblemValidationError("truth_signs must be a length-n vector of +-1")
        if s[0] != 1.0:
            raise ProblemValidationError("truth_signs must be canonical (first entry +1)")
        x = s * m
        res = np.linalg.norm(a @ x - self.lam * x)
        bound = RESIDUAL_RTOL * math.sqrt(numkit.frobenius_sq(a)) * np.linalg.norm(m)
        if res > bound:
            raise ProblemValidationError(
                f"truth_signs do not give an eigenvector: residual {res:.3e} > {bound:.3e}"
            )
        object.__setattr__(self, "truth_signs", _frozen(s))

    @property
    def n(self):
        return self.magnitudes.shape[0]

    @property
    def has_truth(self):
        return self.truth_signs is not None

    def eigenvector(self):
        """The signed eigenvector ``x``; only available with ground truth."""
        if self.truth_signs is None:
            raise ProblemValidationError("blind instance has no ground truth")
        return self.truth_signs * self.magnitudes

    def equals(self, other, atol=0.0):
        if self.n != other.n or self.has_truth != other.has_truth:
            return False
        same = (
            np.allclose(self.a, other.a, rtol=0, atol=atol)
            and abs(self.lam - other.lam) <= atol
            and np.allclose(self.magnitudes, other.magnitudes, rtol=0, atol=atol)
        )
        if self.has_truth:
            same = same and np.array_equal(self.truth_signs, other.truth_signs)
        return bool(same)


def canonical_signs(v):
    """Signs of ``v`` (sign(0) = +1), globally flipped so the first is +1."""
    s = np.where(np.asarray(v) < 0, -1.0, 1.0)
    return s if s[0] > 0 else -s


def from_eigenpair(a, lam, x):
    """Build a problem from a (numerically) exact eigenpair ``a x = lam x``."""
    x = np.asarray(x, dtype=np.float64)
    s = canonical_signs(x)
    return EigenPhaseProblem(a=a, lam=lam, magnitudes=np.abs(x), truth_signs=s)


def _magnitudes(law, n, rng):
    if law == "unit":
        return np.ones(n)
    if law == "folded_gaussian":
        return np.abs(rng.standard_normal(n)) + 0.1
    if law == "decaying":
        return 2.0 ** (-np.arange(n) / 4.0) + 0.05
    raise ValueError(f"unknown magnitude law {law!r}; expected one of {MAGNITUDE_LAWS}")


def planted_problem(n, lam, magnitude_law="unit", rng=None, max_retries=10):
    """Random instance with the eigenpair ``(lam, eps * m)`` planted exactly.

    ``A = lam * x x^T / |x|^2 + P M P`` with ``P`` the projector orthogonal to
    ``x`` and ``M`` a symmetric Gaussian matrix (unit-variance off-diagonal).
    Draws whose sign system has a near-degenerate second-smallest singular
    value are rejected and ``M`` is redrawn.
    """
    from .signsys import build_sign_system

    if n < 2:
        raise ValueError("planted problems need n >= 2")
    rng = np.random.default_rng() if rng is None else rng
    eps = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    eps = eps if eps[0] > 0 else -eps
    m = _magnitudes(magnitude_law, n, rng)
    x = eps * m
    xx = np.outer(x, x) / (x @ x)
    proj = np.eye(n) - xx
    for _ in range(max_retries + 1):
        g = rng.standard_normal((n, n))
        bulk = (g + g.T) / math.sqrt(2.0)
        a = lam * xx + proj @ bulk @ proj
        a = 0.5 * (a + a.T)
        problem = EigenPhaseProblem(a=a, lam=lam, magnitudes=m, truth_signs=eps)
        sys = build_sign_system(problem)
        sigma = numkit.singular_values(sys.c)
        if sigma[-2] > 1e-6 * math.sqrt(sys.frob_sq):
            return problem
    raise DegenerateInstanceError(f"no non-degenerate draw after {max_retries} retries")


def sylvester_hadamard(order):
    """Sylvester construction ``H_{2k} = [[H, H], [H, -H]]``; ``order`` a power of 2."""
    if order < 1 or order & (order - 1):
        raise ValueError("Sylvester Hadamard order must be a power of two")
    h = np.ones((1, 1))
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h


def hadamard_matrix(order=256, corner=2.0):
    """``H / sqrt(order)`` (symmetric orthogonal, spectrum +-1) with ``A[0, 0] = corner``."""
    a = sylvester_hadamard(order) / math.sqrt(order)
    a[0, 0] = corner
    return a


@lru_cache(maxsize=4)
def hadamard_perturbed(which="top", order=256):
    """Perturbed normalized Hadamard instance.

    ``which="top"`` takes the largest eigenvalue (about 2.40 for order 256),
    ``which="bottom"`` the one nearest zero (about -0.47), by inverse
    iteration at shift 0. The eigensolver start vector is seeded, so the
    result is deterministic and cached.
    """
    a = hadamard_matrix(order)
    rng = np.random.default_rng(order)
    if which == "top":
        lam, x = numkit.power_iteration(a, tol=EIGEN_TOL, rng=rng)
    elif which == "bottom":
        lam, x = numkit.inverse_iteration(a, 0.0, tol=EIGEN_TOL, rng=rng)
    else:
        raise ValueError(f"which must be 'top' or 'bottom', got {which!r}")
    return from_eigenpair(a, lam, x)


def gaussian_spiked(rng=None, n=100, corner=50.0):
    """``A0 + A0^T`` for i.i.d. N(0,1) ``A0``, with the (0, 0) entry set to ``corner``;
    the instance is the top eigenpair."""
    rng = np.random.default_rng() if rng is None else rng
    a0 = rng.standard_normal((n, n))
    a = a0 + a0.T
    a[0, 0] = corner
    lam, x = numkit.power_iteration(a, tol=EIGEN_TOL, max_iters=50_000, rng=rng)
    return from_eigenpair(a, lam, x)


def strip_zero_magnitudes(a, lam, magnitudes, truth_signs=None):
    """Drop coordinates whose magnitude is (relatively) zero.

    Zero entries of ``x`` contribute nothing to ``A x``, so deleting those
    rows and columns keeps the eigen-relation on the remaining ones.
    """
    a = numkit.as_matrix(a)
    m = numkit.as_vector(magnitudes)
    top = float(np.max(np.abs(m)))
    if top == 0.0:
        raise ProblemValidationError("all magnitudes are zero")
    keep = np.flatnonzero(np.abs(m) > ZERO_MAGNITUDE_RTOL * top)
    sub = a[np.ix_(keep, keep)]
    signs = None
    if truth_signs is not None:
        s = np.asarray(truth_signs, dtype=np.float64)[keep]
        signs = s if s[0] > 0 else -s
    return EigenPhaseProblem(a=sub, lam=lam, magnitudes=m[keep], truth_signs=signs)


def problem_to_dict(problem):
    d = {
        "n": problem.n,
        "a": problem.a.ravel().tolist(),
        "lambda": problem.lam,
        "magnitudes": problem.magnitudes.tolist(),
    }
    if problem.has_truth:
        d["truth_signs"] = [int(v) for v in problem.truth_signs]
    return d


def problem_from_dict(d):
    if not isinstance(d, dict):
        raise ProblemValidationError("problem file must hold a JSON object")
    missing = [k for k in ("n", "a", "lambda", "magnitudes") if k not in d]
    if missing:
        raise ProblemValidationError(f"problem file is missing keys: {', '.join(missing)}")
    n = d["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ProblemValidationError(f"'n' must be a positive integer, got {n!r}")
    try:
        a = np.asarray(d["a"], dtype=np.float64)
        m = np.asarray(d["magnitudes"], dtype=np.float64)
        lam = float(d["lambda"])
        signs = d.get("truth_signs")
        if signs is not None:
            signs = np.asarray(signs, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ProblemValidationError(f"non-numeric field in problem file: {exc}") from exc
    if a.shape != (n * n,):
        raise ProblemValidationError(f"'a' must hold n*n = {n * n} numbers, got shape {a.shape}")
    if m.shape != (n,):
        raise ProblemValidationError(f"'magnitudes' must hold n = {n} numbers")
    return EigenPhaseProblem(a=a.reshape(n, n), lam=lam, magnitudes=m, truth_signs=signs)


def save_problem(problem, path):
    # json writes floats with repr(), the shortest string that round-trips exactly
    with open(path, "w") as fh:
        json.dump(problem_to_dict(problem), fh)
        fh.write("\n")
    return path


def load_problem(path):
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemValidationError(f"malformed JSON in {path}: {exc}") from exc
    return problem_from_dict(d)
