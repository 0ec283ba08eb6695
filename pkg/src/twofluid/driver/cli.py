"""Command line: ``twofluid {run,converge,audit,presets}``.

Exit codes: 0 success, 1 numerical failure (or audit breach), 2 usage,
configuration or I/O error.  Diagnostics go to standard error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from ..integrate import RunFailure, run
from ..verify import conservation_audit, convergence_study, default_test_functions
from .config import ConfigError, RunConfig, load_config
from .output import AUDIT_NAME, load_run, write_run
from .scenarios import RiemannScenario, preset, preset_names, riemann_on_torus


EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twofluid", description="Semi-discrete six-equation two-fluid solver")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="simulate a configured scenario")
    r.add_argument("config")
    r.add_argument("--output", help="output directory (overrides output_dir)")
    r.add_argument("--time", type=_float_list,
                   help="write only the snapshots nearest these times (final time always kept)")
    r.add_argument("--strict", action="store_true",
                   help="treat conservation-audit breaches as numerical failures")

    c = sub.add_parser("converge", help="weak-residual refinement study")
    c.add_argument("config")
    c.add_argument("--eps-list", type=_float_list, required=True,
                   help="decreasing eps values, comma or space separated")
    c.add_argument("--output", help="output directory (overrides output_dir)")
    c.add_argument("--strict", action="store_true",
                   help="fail unless every residual decreases strictly with eps")

    a = sub.add_parser("audit", help="re-run the conservation audit on a run directory")
    a.add_argument("directory")

    sub.add_parser("presets", help="list scenario presets")
    return p


def _load(path) -> RunConfig:
    try:
        return load_config(path)
    except OSError as exc:
        raise _UsageError(f"cannot read config: {exc}") from None
    except ConfigError as exc:
        raise _UsageError(f"{path}: {exc}") from None


class _UsageError(Exception):
    pass


def cmd_run(args) -> int:
    cfg = _load(args.config)
    out = Path(args.output) if args.output else cfg.output_dir
    state0 = riemann_on_torus(cfg.scenario.left, cfg.scenario.right, cfg.grid(), cfg.eos,
                              cfg.smoothing_cells)
    status = EXIT_OK
    try:
        traj = run(state0, cfg.t_end, cfg.eos, cfg.params, cfg.snapshot_every)
    except RunFailure as exc:
        print(f"twofluid: run failed: {exc}", file=sys.stderr)
        traj = exc.trajectory
        status = EXIT_NUMERIC
    times = None
    if args.time:
        times = [t for t in args.time if 0 <= t <= traj.times[-1]] + [traj.times[-1]]
    resolved = cfg.resolved()
    resolved["output_dir"] = str(out)
    write_run(traj, out, resolved, times)
    report = conservation_audit(traj)
    report.write_csv(out / AUDIT_NAME)
    print(report.summary(), file=sys.stderr)
    if args.strict and not report.passed:
        status = EXIT_NUMERIC
    print(f"wrote {out}", file=sys.stderr)
    return status


def cmd_converge(args) -> int:
    cfg = _load(args.config)
    out = Path(args.output) if args.output else cfg.output_dir
    p = cfg.params
    scen = RiemannScenario(
        cfg.scenario, cfg.t_end, cells_per_eps=round(cfg.cells_per_eps), lam=p.lam,
        kappa1=cfg.raw.get("kappa1"), kappa2=cfg.raw.get("kappa2"), cfl=p.cfl,
        smoothing_cells=cfg.smoothing_cells, kernel=p.kernel.shape, snapshot_every=None,
        eos=cfg.eos)
    table = convergence_study(scen, args.eps_list, default_test_functions())
    out.mkdir(parents=True, exist_ok=True)
    table.write_csv(out / "residual_table.csv")
    for row in table.rows:
        res = "  ".join(f"{k}={v:.3e}" for k, v in row.residuals.items())
        print(f"eps={row.eps:g} n={row.n_cells}  {res}" + (f"  ERROR {row.error}" if row.error else ""),
              file=sys.stderr)
    status = EXIT_OK
    if any(r.error for r in table.rows):
        status = EXIT_NUMERIC
    dec = table.strictly_decreasing()
    print("strictly decreasing: " + ", ".join(f"{k}={v}" for k, v in dec.items()), file=sys.stderr)
    if args.strict and not all(dec.values()):
        status = EXIT_NUMERIC
    return status


def cmd_audit(args) -> int:
    try:
        traj = load_run(args.directory)
    except (OSError, ConfigError, ValueError) as exc:
        raise _UsageError(f"cannot load run directory: {exc}") from None
    report = conservation_audit(traj)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_NUMERIC


def cmd_presets(args) -> int:
    for name in preset_names():
        pr = preset(name)
        t = "" if pr.t_end is None or math.isnan(pr.t_end) else f" (t_end={pr.t_end:g})"
        print(f"{name}{t}: {pr.description}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "converge": cmd_converge, "audit": cmd_audit, "presets": cmd_presets}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"twofluid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"twofluid: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
