"""Command line interface.

Subcommands: `symbol`, `check`, `h`, `simulate` and `verify` (`doob-meyer`, `tanaka`,
`resolvent-id`, `killed`, `hitting-laplace`). Numeric results are written as CSV, reports as
JSON, and every run writes a `manifest.json` next to them.

Exit status: 0 on success or a PASS verdict, 1 on a FAIL or INCONCLUSIVE verdict or a numerical
failure, 2 on a usage or configuration error, 3 when a required condition is violated.
"""

from importlib import metadata
from pathlib import Path
from typing import Any, Callable, Iterator, Optional, Sequence
import argparse
import json
import logging
import sys

from .conditions import Verdict, condition_report
from .decomposition import (
    verify_doob_meyer,
    verify_hitting_laplace,
    verify_killed_invariance,
    verify_resolvent_identity,
    verify_tanaka,
)
from .exceptions import ConditionViolation, ConfigError, ZrtError
from .levy_models import LevyModel, symbol_eval
from .model_spec import load_model, spec_hash
from .output import RunManifest, prepare_output_directory, write_csv, write_json
from .pathsim import SimConfig, iter_path_batches
from .quadrature import QuadratureSpec
from .resolvent import DEFAULT_SPEC, h_q_convergence_scan, renormalized_zero_resolvent
from .verifier import DecompositionReport, VerifyConfig

logger = logging.getLogger("zrt.cli")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CONDITION = 3

DEFAULT_U_GRID = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
DEFAULT_X_GRID = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def tool_version() -> str:
    try:
        return metadata.version("zrt")
    except metadata.PackageNotFoundError:
        from . import __version__

        return __version__


def _quadrature_spec(args: argparse.Namespace) -> QuadratureSpec:
    if args.tol is None:
        return DEFAULT_SPEC
    return QuadratureSpec(abs_tol=args.tol * 1e-2, rel_tol=args.tol)


def _sim_config(args: argparse.Namespace, *, x0: Optional[float] = None) -> SimConfig:
    return SimConfig(
        n_steps=args.steps,
        horizon=args.horizon,
        n_paths=args.paths,
        x0=args.x0 if x0 is None else x0,
        seed=args.seed,
        small_jump_cutoff=args.small_jump_cutoff,
        workers=args.workers,
    )


def _verify_config(args: argparse.Namespace, *, x0: Optional[float] = None) -> VerifyConfig:
    return VerifyConfig(
        sim=_sim_config(args, x0=x0),
        eps=args.eps,
        z_threshold=args.z_threshold,
        grid_nodes=args.grid_nodes,
        force=args.force,
        spec=_quadrature_spec(args),
    )


def cmd_symbol(model: LevyModel, args: argparse.Namespace, out: Path) -> tuple[int, list[Path]]:
    grid = args.u if args.u else list(DEFAULT_U_GRID)
    rows = []
    for u in grid:
        value = symbol_eval(model, u)
        rows.append((u, value.re, value.im))
    return EXIT_OK, [write_csv(out / "symbol.csv", ["u", "re_eta", "im_eta"], rows)]


def cmd_check(model: LevyModel, args: argparse.Namespace, out: Path) -> tuple[int, list[Path]]:
    report = condition_report(model, probe=args.probe or None)
    payload = report.as_dict()
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    return EXIT_OK, [write_json(out / "conditions.json", payload)]


def cmd_h(model: LevyModel, args: argparse.Namespace, out: Path) -> tuple[int, list[Path]]:
    grid = args.x if args.x else list(DEFAULT_X_GRID)
    spec = _quadrature_spec(args)
    rows = []
    for x in grid:
        value = renormalized_zero_resolvent(model, x, force=args.force, spec=spec)
        rows.append((x, value.h, value.error_estimate))
    outputs = [write_csv(out / "h.csv", ["x", "h", "error_estimate"], rows)]
    if args.q:
        scan_rows = []
        for x in grid:
            for row in h_q_convergence_scan(model, x, args.q, force=args.force, spec=spec):
                scan_rows.append((x, row.q, row.h_q, row.gap))
        outputs.append(write_csv(out / "h_q.csv", ["x", "q", "h_q", "gap"], scan_rows))
    return EXIT_OK, outputs


def cmd_simulate(model: LevyModel, args: argparse.Namespace, out: Path) -> tuple[int, list[Path]]:
    cfg = _sim_config(args)

    def terminal_rows() -> Iterator[tuple[int, float]]:
        for batch in iter_path_batches(model, cfg):
            yield from zip(batch.path_ids, batch.terminal.tolist())

    outputs = [write_csv(out / "terminal.csv", ["path_id", "x_T"], terminal_rows())]
    if args.dump_paths:

        def path_rows() -> Iterator[tuple[int, float, float]]:
            for batch in iter_path_batches(model, cfg):
                times = batch.t_grid.tolist()
                for path_id, row in zip(batch.path_ids, batch.states):
                    yield from ((path_id, t, x) for t, x in zip(times, row.tolist()))

        outputs.append(write_csv(out / "paths.csv", ["path_id", "t", "x"], path_rows()))
    return EXIT_OK, outputs


def _single(values: Optional[list[float]], name: str, default: Optional[float] = None) -> float:
    if not values:
        if default is None:
            raise ConfigError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise ConfigError(f"--{name} takes a single value here, got {values}")
    return values[0]


def _run_verify(args: argparse.Namespace, model: LevyModel) -> DecompositionReport:
    check = args.check
    if check == "doob-meyer":
        return verify_doob_meyer(
            model=model,
            q=_single(args.q, "q"),
            x=_single(args.x, "x", 0.0),
            config=_verify_config(args),
            keep_samples=True,
        )
    if check == "tanaka":
        return verify_tanaka(
            model=model, x=_single(args.x, "x", 0.0), config=_verify_config(args),
            keep_samples=True,
        )
    if check == "resolvent-id":
        return verify_resolvent_identity(
            model=model,
            q=_single(args.q, "q"),
            x=_single(args.x, "x", 0.0),
            y=args.x0,
            config=_verify_config(args),
        )
    if check == "killed":
        return verify_killed_invariance(
            model=model, x0=args.x0, kill_radius=args.kill_radius, config=_verify_config(args)
        )
    return verify_hitting_laplace(
        model=model,
        q=_single(args.q, "q"),
        x0=args.x0,
        kill_radius=args.kill_radius,
        config=_verify_config(args),
    )


def cmd_verify(model: LevyModel, args: argparse.Namespace, out: Path) -> tuple[int, list[Path]]:
    report = _run_verify(args, model)
    outputs = [write_json(out / "report.json", report.as_dict())]
    if report.samples:
        outputs.append(
            write_csv(
                out / "samples.csv",
                ["path_id", "x", "q", "M_q", "N_tilde", "L_hat", "h_terminal", "h_initial"],
                (
                    (s.path_id, s.x, s.q if s.q is not None else "", s.m_q, s.n_tilde, s.l_hat,
                     s.h_terminal, s.h_initial)
                    for s in report.samples
                ),
            )
        )
    print(f"{report.operation}: {report.verdict.name}")
    return (EXIT_OK if report.verdict == Verdict.PASS else EXIT_FAIL), outputs


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", type=Path, required=True, help="JSON model spec file")
    parser.add_argument("--out", type=Path, default=Path("zrt-out"), help="output directory")
    parser.add_argument("--tol", type=float, default=None, help="quadrature relative tolerance")
    parser.add_argument("--force", action="store_true",
                        help="compute although a condition is only numerically unverified")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])


def _add_simulation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--paths", type=int, default=1000)
    parser.add_argument("--steps", type=int, default=1000)
    parser.add_argument("--horizon", type=float, default=1.0)
    parser.add_argument("--x0", type=float, default=0.0, help="starting point")
    parser.add_argument("--small-jump-cutoff", type=float, default=1e-3)
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zrt", description="Renormalized zero resolvents of Lévy processes."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    symbol = sub.add_parser("symbol", help="tabulate the Lévy symbol")
    _add_common(symbol)
    symbol.add_argument("--u", type=float, nargs="+", help="frequencies")

    check = sub.add_parser("check", help="report conditions (A), (B), (A1)-(A4), (L1)-(L3)")
    _add_common(check)
    check.add_argument("--probe", action="store_true", help="run numeric probes for presets too")

    h = sub.add_parser("h", help="tabulate h, and h_q when --q is given")
    _add_common(h)
    h.add_argument("--x", type=float, nargs="+", help="points")
    h.add_argument("--q", type=float, nargs="+", help="descending q grid for the h_q scan")

    simulate = sub.add_parser("simulate", help="simulate paths")
    _add_common(simulate)
    _add_simulation(simulate)
    simulate.add_argument("--dump-paths", action="store_true", help="also write every path")

    verify = sub.add_parser("verify", help="Monte Carlo checks of the decompositions")
    verify.add_argument(
        "check", choices=["doob-meyer", "tanaka", "resolvent-id", "killed", "hitting-laplace"]
    )
    _add_common(verify)
    _add_simulation(verify)
    verify.add_argument("--q", type=float, nargs="+", help="discount rate")
    verify.add_argument("--x", type=float, nargs="+", help="level")
    verify.add_argument("--eps", type=float, default=None, help="occupation half-width")
    verify.add_argument("--z-threshold", type=float, default=4.0)
    verify.add_argument("--grid-nodes", type=int, default=2048)
    verify.add_argument("--kill-radius", type=float, default=0.05)
    return parser


_COMMANDS: dict[str, Callable[[LevyModel, argparse.Namespace, Path], tuple[int, list[Path]]]] = {
    "symbol": cmd_symbol,
    "check": cmd_check,
    "h": cmd_h,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def _config_echo(args: argparse.Namespace) -> dict[str, Any]:
    return {
        key: str(value) if isinstance(value, Path) else value
        for key, value in vars(args).items()
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        model = load_model(args.model)
        out = prepare_output_directory(args.out)
        manifest = RunManifest(
            tool_version=tool_version(),
            command=args.command if args.command != "verify" else f"verify {args.check}",
            model_spec_hash=spec_hash(args.model),
            config=_config_echo(args),
            seed=getattr(args, "seed", None),
            tolerances={
                "quadrature_rel_tol": _quadrature_spec(args).rel_tol,
                "z_threshold": getattr(args, "z_threshold", 4.0),
            },
        )
        status, outputs = _COMMANDS[args.command](model, args, out)
    except ConditionViolation as e:
        report = e.report.as_dict() if hasattr(e.report, "as_dict") else str(e.report)
        print(json.dumps({"error": str(e), "condition": report}, indent=2, default=str),
              file=sys.stderr)
        return EXIT_CONDITION
    except ConfigError as e:
        print(f"zrt: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ZrtError as e:
        logger.error("Run failed: %s", e)
        print(f"zrt: failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    for path in outputs:
        manifest.add_output(path)
    manifest.write(out)
    return status
