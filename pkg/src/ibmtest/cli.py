"""Command-line entry point: ``ibmtest <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 degenerate statistic, 4 numeric
failure.  Errors go to stderr as a single ``ERROR <code>: <detail>`` line.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dcmm import calibrate
from .errors import DegenerateDenominatorError, InvalidInputError, NumericError
from .experiment import ExperimentSpec, export, load_edge_lists, load_manifest, read_bytes, run_monte_carlo, scan_pairwise
from .oracle import MAX_ORACLE_N, brute_u
from .rng import generator
from .stats import compare, q2_dense, q2_sparse, q3

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_NUMERIC = 0, 2, 3, 4
_Q3_ORACLE_MAX_N = 7


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _real(text: str) -> float:
    value = float(text)
    if not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ibmtest", description="Two-sample network testing with interlacing balance statistics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compare", help="test whether two networks share a Bernoulli matrix")
    p.add_argument("--a", required=True, metavar="PATH")
    p.add_argument("--b", required=True, metavar="PATH")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--order", type=int, choices=(2, 3), default=2)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("scan", help="pairwise comparisons over a sequence of networks")
    p.add_argument("--manifest", required=True, metavar="PATH")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--order", type=int, choices=(2, 3), default=2)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("simulate", help="Monte Carlo null/alternative study for a model case")
    _case_args(p)
    level = p.add_mutually_exclusive_group(required=True)
    level.add_argument("--b", type=_real)
    level.add_argument("--target-snr", type=_real)
    p.add_argument("--reps", type=_positive_int, required=True)
    p.add_argument("--alpha", type=_real, default=0.05)
    p.add_argument("--order", type=int, choices=(2, 3), default=2)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("calibrate", help="find b so the model pair has a given SNR")
    _case_args(p)
    p.add_argument("--target-snr", type=_real, required=True)
    p.add_argument("--tol", type=_real, default=1e-3)
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("oracle-check", help="cross-check fast kernels against brute-force enumeration")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--trials", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    return parser


def _case_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--case", type=int, choices=range(1, 7), required=True, metavar="{1..6}")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--beta", type=_real, required=True)


def _json_line(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, allow_nan=False) + "\n").encode()


def _cmd_compare(args) -> bytes:
    a, b = load_edge_lists([read_bytes(args.a), read_bytes(args.b)], args.directed)
    rep = compare(a, b, args.order)
    if args.format == "text":
        return "".join(f"{k}={v}\n" for k, v in rep.to_dict().items()).encode()
    return _json_line(rep.to_dict())


def _cmd_scan(args) -> bytes:
    graphs = load_manifest(args.manifest, args.directed)
    return export(scan_pairwise(graphs, args.order), args.format)


def _cmd_simulate(args) -> bytes:
    spec = ExperimentSpec(args.case, args.n, args.k, args.beta, args.reps, b=args.b,
                          target_snr=args.target_snr, alpha=args.alpha, order=args.order, seed=args.seed)
    return export(run_monte_carlo(spec, workers=args.workers), "json")


def _cmd_calibrate(args) -> bytes:
    cal = calibrate(args.case, args.n, args.k, args.beta, args.target_snr, args.seed, tol=args.tol)
    return _json_line({"b": cal.b, "snr": cal.snr, "bisection_steps": cal.steps, "bracket": list(cal.bracket)})


def _random_instance(rng: np.random.Generator, n: int, symmetric: bool) -> np.ndarray:
    x = rng.integers(-1, 2, size=(n, n))
    if symmetric:
        x = np.triu(x, 1)
        x = x + x.T
    np.fill_diagonal(x, 0)
    return x


def oracle_check(n_max: int, trials: int, seed: int) -> dict:
    """Compare q2 (dense and sparse) and q3 with brute-force enumeration on random signed matrices."""
    if not 2 <= n_max <= MAX_ORACLE_N:
        raise InvalidInputError(f"--n-max must lie in [2, {MAX_ORACLE_N}], got {n_max}")
    n_min = min(4, n_max)
    q2_ok = q3_ok = q3_trials = 0
    mismatches = []
    for t in range(trials):
        rng = generator(seed, "oracle-check", t)
        n = int(rng.integers(n_min, n_max + 1))
        symmetric = bool(rng.integers(0, 2))
        x = _random_instance(rng, n, symmetric)
        want = brute_u(x, 2)
        if q2_dense(x) == want == q2_sparse(x):
            q2_ok += 1
        else:
            mismatches.append({"trial": t, "order": 2, "n": n})
        if symmetric and n <= _Q3_ORACLE_MAX_N:
            q3_trials += 1
            if q3(x) == brute_u(x, 3):
                q3_ok += 1
            else:
                mismatches.append({"trial": t, "order": 3, "n": n})
    return {
        "trials": trials,
        "q2_matches": q2_ok,
        "q3_trials": q3_trials,
        "q3_matches": q3_ok,
        "mismatches": mismatches,
    }


def _cmd_oracle(args) -> bytes:
    report = oracle_check(args.n_max, args.trials, args.seed)
    if report["mismatches"]:
        raise NumericError(f"{len(report['mismatches'])} oracle mismatches: {report['mismatches'][:5]}")
    return _json_line(report)


_COMMANDS = {
    "compare": _cmd_compare,
    "scan": _cmd_scan,
    "simulate": _cmd_simulate,
    "calibrate": _cmd_calibrate,
    "oracle-check": _cmd_oracle,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout.buffer
    stderr = stderr if stderr is not None else sys.stderr

    def fail(code: int, detail: str) -> int:
        stderr.write(f"ERROR {code}: {' '.join(str(detail).split())}\n")
        return code

    try:
        args = build_parser().parse_args(argv)
        out = _COMMANDS[args.command](args)
    except _UsageError as exc:
        return fail(EXIT_INPUT, exc)
    except (InvalidInputError, UnicodeDecodeError) as exc:
        return fail(EXIT_INPUT, exc)
    except DegenerateDenominatorError as exc:
        return fail(EXIT_DEGENERATE, exc)
    except (NumericError, ArithmeticError) as exc:
        return fail(EXIT_NUMERIC, exc)
    stdout.write(out)
    stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
