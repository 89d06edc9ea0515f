"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime or numerical failure,
3 (``run`` only) no recovery within the iteration budget.
"""

import argparse
import math
import os
import sys

from . import harness, problems, theory
from .errors import DegenerateGapError, EigSignError
from .flipper import run_algorithm2
from .kaczmarz import default_max_iters, run_algorithm1
from .runs import RunConfig
from .signsys import build_sign_system, make_rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_NOT_RECOVERED = 3

KINDS = ("planted", "hadamard-top", "hadamard-bottom", "gaussian")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(**kv):
    for key, value in kv.items():
        if isinstance(value, float):
            value = format(value, ".17g")
        print(f"{key}={value}")


def cmd_generate(args):
    if args.kind == "planted":
        if args.n is None or args.n < 2:
            raise UsageError("--kind planted needs --n >= 2")
        if args.lam is None:
            raise UsageError("--kind planted needs --lambda")
        problem = problems.planted_problem(args.n, args.lam, args.law, make_rng(args.seed))
    elif args.kind == "gaussian":
        problem = problems.gaussian_spiked(make_rng(args.seed))
    else:
        problem = problems.hadamard_perturbed(args.kind.split("-")[1])
    problems.save_problem(problem, args.out)
    _emit(kind=args.kind, n=problem.n, **{"lambda": problem.lam}, out=args.out)
    return EXIT_OK


def _stats_or_none(sys_):
    try:
        return theory.spectral_stats(sys_)
    except DegenerateGapError:
        return None


def cmd_run(args):
    problem = problems.load_problem(args.problem)
    sys_ = build_sign_system(problem)
    stats = _stats_or_none(sys_) if args.alg == 1 else None
    iters = args.iters
    if iters is None:
        iters = default_max_iters(sys_, stats)
    cfg = RunConfig(
        max_iters=iters,
        check_every=args.check_every,
        success_tol=args.tol,
        record_trace=True,
    )
    rng = make_rng(args.seed)
    truth = problem.truth_signs
    if args.alg == 1:
        report = run_algorithm1(sys_, cfg, rng, truth=truth, stats=stats)
    else:
        report = run_algorithm2(sys_, cfg, rng, truth=truth)
    out = dict(
        algorithm=args.alg,
        status=report.status,
        iters_used=report.iters_used,
        max_iters=iters,
    )
    if truth is not None:
        out["mismatch_min"] = theory.mismatch_min(report.final_signs, truth)
    out["signs"] = "".join("+" if s > 0 else "-" for s in report.final_signs)
    if args.trace:
        harness.write_trace_csv(report, args.trace)
        out["trace"] = args.trace
    _emit(**out)
    return EXIT_OK if report.recovered else EXIT_NOT_RECOVERED


def cmd_spectrum(args):
    problem = problems.load_problem(args.problem)
    sys_ = build_sign_system(problem)
    n = problem.n
    try:
        st = theory.spectral_stats(sys_)
    except DegenerateGapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _emit(
        n=n,
        sigma_n=st.sigma_n,
        sigma_n_minus_1=st.sigma_n_minus_1,
        frob_sq=st.frob_sq,
        contraction=st.contraction,
        predicted_iters=st.predicted_iters,
        nlogn_floor=st.nlogn_floor,
    )
    return EXIT_OK


def cmd_bench(args):
    os.makedirs(args.out, exist_ok=True)
    if args.figure:
        paths = harness.reproduce_figure(args.figure, args.out, args.seed)
        _emit(figure=args.figure, seed=args.seed, traces=",".join(paths))
        return EXIT_OK
    if args.n is None or args.n < 2:
        raise UsageError("--theorem needs --n >= 2")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    problem = problems.planted_problem(args.n, args.lam, args.law, make_rng(args.seed))
    st = theory.spectral_stats(build_sign_system(problem))
    iters = args.iters or 2 * st.predicted_iters
    ens = harness.monte_carlo_algorithm1(problem, args.trials, RunConfig(iters), args.seed, stats=st)
    path = os.path.join(args.out, f"theorem_n{args.n}_seed{args.seed}.csv")
    harness.write_ensemble_csv(ens, path)
    _emit(
        n=args.n,
        trials=args.trials,
        max_iters=iters,
        contraction=st.contraction,
        recovery_rate=ens.recovery_rate,
        bound_violations=len(ens.bound_violations()),
        norm_violations=len(ens.norm_violations()),
        pathwise_violations=ens.pathwise_violations,
        csv=path,
    )
    return EXIT_OK


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _finite_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def build_parser():
    p = _Parser(prog="eigsign", description="Recover eigenvector signs from entry magnitudes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a problem JSON file")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--lambda", dest="lam", type=_finite_float)
    g.add_argument("--law", choices=problems.MAGNITUDE_LAWS, default="unit")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run Algorithm 1 or 2 on a problem file")
    r.add_argument("--alg", type=int, choices=(1, 2), required=True)
    r.add_argument("--problem", required=True)
    r.add_argument("--iters", type=_positive_int)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--tol", type=_finite_float, default=1e-8)
    r.add_argument("--check-every", type=_positive_int)
    r.add_argument("--trace")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("spectrum", help="print spectral statistics of the sign system")
    s.add_argument("--problem", required=True)
    s.set_defaults(func=cmd_spectrum)

    b = sub.add_parser("bench", help="reproduce a figure or run a theorem ensemble")
    mode = b.add_mutually_exclusive_group(required=True)
    mode.add_argument("--figure", choices=harness.FIGURES)
    mode.add_argument("--theorem", action="store_true")
    b.add_argument("--out", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--n", type=int)
    b.add_argument("--trials", type=int, default=200)
    b.add_argument("--lambda", dest="lam", type=_finite_float, default=3.0)
    b.add_argument("--law", choices=problems.MAGNITUDE_LAWS, default="unit")
    b.add_argument("--iters", type=_positive_int)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"eigsign: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EigSignError, OSError) as exc:
        print(f"eigsign: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
