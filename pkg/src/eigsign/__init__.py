"""Recover the signs of a real eigenvector from the magnitudes of its entries."""

from .errors import EigSignError
from .flipper import run_algorithm2
from .kaczmarz import run_algorithm1
from .oracle import brute_force_signs
from .problems import EigenPhaseProblem, load_problem, planted_problem, save_problem
from .runs import RunConfig, RunReport
from .signsys import build_sign_system, make_rng
from .theory import spectral_stats

__all__ = [
    "EigSignError",
    "EigenPhaseProblem",
    "RunConfig",
    "RunReport",
    "brute_force_signs",
    "build_sign_system",
    "load_problem",
    "make_rng",
    "planted_problem",
    "run_algorithm1",
    "run_algorithm2",
    "save_problem",
    "spectral_stats",
]

__version__ = "0.1.0"
