"""
Command line entry point: python -m app.cli <command> ...

Exit codes: 0 ok, 2 config error, 3 numerical failure. `check` also uses
0 satisfied, 1 not satisfied, 2 grid-only pass.
"""
import argparse
import os
import sys
from typing import List, Optional

import pandas as pd
import structlog
from pydantic import ValidationError

from app.config.constants import CHECK_COLUMNS, EIG_COLUMNS, U_RANGE, U_SAMPLES
from app.conditions import check_condition, hierarchy_check, search_admissible
from app.domain.errors import ConfigError, NumericalError
from app.domain.models import ConditionReport
from app.domain.schemas import ConditionParams
from app.infrastructure.logging import configure_logging
from app.infrastructure.storage import frame_to_csv, load_config, write_field_csv, write_frame
from app.numerics.eigen import first_eigenpair
from app.numerics.grid import build_grid
from app.services import ExperimentService, ReportService, SweepService, cached_eigenpair, parse_sweep
from app.sources import needs_eigenvalue, osgood_test, parse_source

logger = structlog.get_logger()

CHECK_EXIT = {"yes": 0, "no": 1, "grid-only": 2}


def _emit(df: pd.DataFrame) -> None:
    sys.stdout.write(frame_to_csv(df))


def _parse_domain(text: str):
    """'dim:L:n', L may be '1' or '1x2'."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--domain expects dim:L:n, got {text!r}")
    try:
        dim, n = int(parts[0]), int(parts[2])
        lengths = tuple(float(v) for v in parts[1].replace("x", ",").split(","))
    except ValueError as e:
        raise ConfigError(f"Bad --domain {text!r}: {e}") from e
    if len(lengths) == 1:
        lengths = lengths * dim
    return dim, lengths, n


def _eigenvalue(args):
    """(lambda, residual) from --lambda or an eigensolve on --domain."""
    if args.lam is not None:
        return args.lam, 0.0
    if args.domain:
        dim, lengths, n = _parse_domain(args.domain)
        eig = cached_eigenpair(dim, lengths, n, float(args.p))
        return eig.lam, eig.residual
    return None, 0.0


def _report_frame(report: ConditionReport) -> pd.DataFrame:
    params = report.params
    row = [report.condition, report.satisfied, report.residual_min, report.worst_u, report.certificate,
           report.u_range[0], report.u_range[1], report.samples,
           params.alpha, params.beta, params.gamma, params.lambda1p]
    return pd.DataFrame([row], columns=CHECK_COLUMNS)


def cmd_eig(args) -> int:
    grid = build_grid(args.dim, args.L[0] if len(args.L) == 1 else args.L, args.n)
    result = first_eigenpair(grid, args.p, tol=args.tol, normalization=args.norm)
    _emit(pd.DataFrame([[result.lam, args.p, args.n, result.residual, result.iterations]], columns=EIG_COLUMNS))
    if args.phi:
        write_field_csv(result.phi, args.phi)
    return 0


def cmd_check(args) -> int:
    lam, residual = _eigenvalue(args)
    if lam is None and (args.cond == "C" or needs_eigenvalue(args.f)):
        raise ConfigError("This check needs lambda_{1,p}: pass --lambda or --domain dim:L:n")
    source = parse_source(args.f, args.p, lam)
    u_range = (args.u_min, args.u_max)
    if args.auto:
        # A and B never read lambda
        report = search_admissible(source, args.p, lam if lam is not None else 1.0, args.cond, residual,
                                   u_range, args.samples)
    else:
        if args.alpha is None:
            raise ConfigError("--alpha is required unless --auto is given")
        params = ConditionParams(p=args.p, alpha=args.alpha, beta=args.beta, gamma=args.gamma,
                                 lambda1p=lam if lam is not None else 1.0, lambda_residual=residual)
        report = check_condition(source, params, args.cond, u_range, args.samples)
    _emit(_report_frame(report))
    return CHECK_EXIT[report.satisfied]


def cmd_hierarchy(args) -> int:
    lam, residual = _eigenvalue(args)
    if lam is None:
        raise ConfigError("hierarchy needs lambda_{1,p}: pass --lambda or --domain dim:L:n")
    source = parse_source(args.f, args.p, lam)
    result = hierarchy_check(source, args.p, lam, (args.u_min, args.u_max), args.samples, residual)
    df = pd.concat([_report_frame(result.reports[t]) for t in ("A", "B", "C")], ignore_index=True)
    df["chain_ok"] = result.chain_ok
    _emit(df)
    return 0 if result.chain_ok else 1


def cmd_osgood(args) -> int:
    lam, _ = _eigenvalue(args)
    result = osgood_test(parse_source(args.f, args.p, lam), args.m)
    _emit(pd.DataFrame([[result.divergent, result.estimate, result.method]],
                       columns=["divergent", "estimate", "method"]))
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    if args.out:
        config = config.model_copy(update={"output": args.out})
    result = ExperimentService(config).simulate()
    traj = result.trajectory
    _emit(pd.DataFrame([[result.run_dir, traj.outcome, traj.T_num, traj.T_num_low_confidence]],
                       columns=["run_dir", "outcome", "T_num", "low_confidence"]))
    return 0


def cmd_bound(args) -> int:
    exp = ExperimentService(load_config(args.config))
    _emit(ReportService.bound_frame(exp.bound()))
    return 0


def cmd_sweep(args) -> int:
    if not os.path.exists(args.spec):
        raise ConfigError(f"Sweep file not found: {args.spec}")
    with open(args.spec) as fh:
        spec = parse_sweep(fh.read())
    df = SweepService(spec, workers=args.workers).run()
    if args.out:
        write_frame(df, args.out)
    else:
        _emit(df)
    return 0


def cmd_report(args) -> int:
    service = ReportService.from_run_dir(args.run)
    _emit(service.regenerate(args.run))
    return 0


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--f", required=True, help='e.g. "powersum: 1*u^3", "eigscaled: c=2", "table: f.csv"')
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--domain", default=None, help="dim:L:n, eigensolve for lambda_{1,p}")


def _add_range_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--u-min", type=float, default=U_RANGE[0])
    p.add_argument("--u-max", type=float, default=U_RANGE[1])
    p.add_argument("--samples", type=int, default=U_SAMPLES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plap", description="p-Laplacian blow-up laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="first Dirichlet eigenpair")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--L", type=float, nargs="+", default=[1.0])
    p.add_argument("--n", type=int, default=99)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--norm", choices=["sup", "lp"], default="sup")
    p.add_argument("--phi", default=None, help="write the eigenfunction as a Field CSV")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("check", help="check a blow-up condition")
    _add_source_args(p)
    _add_range_args(p)
    p.add_argument("--cond", choices=["A", "B", "C", "Cprime"], default="C")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--auto", action="store_true", help="search admissible alpha, beta, gamma")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hierarchy", help="satisfiability of A, B, C and the implication chain")
    _add_source_args(p)
    _add_range_args(p)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("osgood", help="convergence of int_m^inf ds/f(s)")
    _add_source_args(p)
    p.add_argument("--m", type=float, default=1.0)
    p.set_defaults(func=cmd_osgood)

    p = sub.add_parser("simulate", help="run one experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", help="M, sigma and the blow-up time bound")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="cartesian parameter sweep")
    p.add_argument("--spec", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="recompute run.csv from a stored trajectory")
    p.add_argument("--run", required=True, help="run directory written by simulate")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as e:
        logger.error("Configuration error", command=args.command, error=str(e))
        sys.stderr.write(f"error: {e}\n")
        return 2
    except NumericalError as e:
        logger.error("Numerical failure", command=args.command, error=str(e))
        sys.stderr.write(f"numerical failure: {e}\n")
        return 3
