"""Command line entry point.

    dynpgg simulate --scenario nash_highest --out runs/
    dynpgg optimize --step 0.01 --out runs/
    dynpgg verify-nash --config profile.json
    dynpgg fit samples.csv
    dynpgg sweep --out runs/
    dynpgg emit-figures --out figures/

Configs are single JSON documents with optional "params", "profile",
"scenario" and "ranges" keys. Command line flags take precedence over config
fields, which take precedence over defaults. Exit status is 0 only when every
check the command performs passes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import astuple
from pathlib import Path

from .equilibria import SCENARIOS, deviation_gains, scenario, scenario_profile
from .game import GameError, GameParams, fmt, run_game
from .optimizer import closed_form_optimum, grid_search
from .regression import RegressionError, fit_quadratic, vertex
from .strategies import StrategyProfile
from .sweep import SweepRow, run_sweep


class ConfigError(Exception):
    pass


FIGURES = {
    "fig1_lowest": "lowest",
    "fig2_nash_highest": "nash_highest",
    "fig3_nash_no_invest": "nash_no_invest",
    "fig4_nash_lowest": "nash_lowest",
    "fig6_social_optimal": "social_optimal",
}


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}:1:1: config must be a JSON object")
    return doc


def params_from(config: dict) -> GameParams:
    try:
        return GameParams.from_dict(config.get("params", {}))
    except (GameError, TypeError) as exc:
        raise ConfigError(f"params: {exc}") from None


def profile_from(config: dict, params: GameParams, scenario_flag: str | None):
    """Rules and profile from --scenario, then config "scenario", then "profile"."""
    name = scenario_flag or config.get("scenario")
    try:
        if name:
            return scenario_profile(params, name)
        if "profile" in config:
            return params, StrategyProfile.from_dict(config["profile"])
    except (GameError, TypeError) as exc:
        raise ConfigError(f"profile: {exc}") from None
    raise ConfigError("no profile given: pass --scenario or a config with a profile")


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return fmt(v)
    return str(v)


def _write(outdir: str | None, name: str, text: str) -> None:
    if outdir is None:
        return
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)


# -- subcommands --------------------------------------------------------------

def cmd_simulate(args, config) -> int:
    params = params_from(config)
    rules, profile = profile_from(config, params, args.scenario)
    traj = run_game(rules, profile)
    _write(args.out, "trajectory.csv", traj.to_csv())
    _write(args.out, "trajectory.json", traj.to_json())
    if args.format == "json":
        print(traj.to_json())
    else:
        print(" ".join(fmt(v) for v in traj.total_payoffs))
    return 0


def cmd_optimize(args, config) -> int:
    params = params_from(config)
    step = args.step if args.step is not None else config.get("step", 0.01)
    result = grid_search(params, step)
    opt = closed_form_optimum(params)
    samples_csv = _csv_text(["x", "payoff"], result.samples)
    _write(args.out, "switch_payoffs.csv", samples_csv)
    ok = abs(result.x_best - opt.x_max) <= step + 1e-9
    if args.format == "json":
        print(json.dumps({
            "x_best": float(fmt(result.x_best)),
            "payoff_best": float(fmt(result.payoff_best)),
            "closed_form_x": float(fmt(opt.x_max)),
            "closed_form_payoff": float(fmt(opt.f_max)),
            "clamped": opt.clamped,
            "agree": ok,
            "samples": [[float(fmt(x)), float(fmt(y))] for x, y in result.samples],
        }, indent=2))
    else:
        print(f"x_best {fmt(result.x_best)}")
        print(f"payoff_best {fmt(result.payoff_best)}")
        print(f"closed_form_x {fmt(opt.x_max)}")
        print(f"closed_form_payoff {fmt(opt.f_max)}")
        print(f"clamped {_cell(opt.clamped)}")
        if args.out is None:
            print()
            print(samples_csv, end="")
    return 0 if ok else 1


def cmd_verify_nash(args, config) -> int:
    params = params_from(config)
    rules, profile = profile_from(config, params, args.scenario)
    step = args.step if args.step is not None else config.get("step", 1.0)
    eps = args.epsilon if args.epsilon is not None else config.get("epsilon", 1e-9)
    try:
        gains = deviation_gains(rules, profile, step, args.workers)
    except GameError as exc:
        raise ConfigError(str(exc)) from None
    verdict = all(g <= eps for g in gains)
    if args.format == "json":
        print(json.dumps({
            "gains": [float(fmt(g)) for g in gains],
            "epsilon": eps,
            "is_nash": verdict,
        }, indent=2))
    else:
        print(f"{'player':>6}  {'gain':>14}  profitable")
        for i, g in enumerate(gains):
            print(f"{i + 1:>6}  {fmt(g):>14}  {'no' if g <= eps else 'yes'}")
        print(f"is_nash {_cell(verdict)}")
    return 0 if verdict else 1


def read_xy_csv(path: str) -> list[tuple[float, float]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    samples = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip():
            continue
        try:
            x, y = float(row[0]), float(row[1])
        except (ValueError, IndexError):
            if lineno == 1:
                continue  # header
            raise ConfigError(f"{path}:{lineno}: expected two numbers, got {row!r}") from None
        samples.append((x, y))
    return samples


def cmd_fit(args, config) -> int:
    samples = read_xy_csv(args.input)
    try:
        model = fit_quadratic(samples)
    except RegressionError as exc:
        raise ConfigError(f"{args.input}: {exc}") from None
    doc = {k: (float(fmt(v)) if isinstance(v, float) else v)
           for k, v in model.to_dict().items()}
    if model.a != 0:
        xv, yv = vertex(model)
        doc["vertex_x"], doc["vertex_y"] = float(fmt(xv)), float(fmt(yv))
    text = json.dumps(doc, indent=2)
    _write(args.out, "fit.json", text + "\n")
    print(text)
    return 0


def cmd_sweep(args, config) -> int:
    step = args.step if args.step is not None else config.get("step", 0.01)
    try:
        rows = run_sweep(config.get("ranges"), step, args.workers)
    except ValueError as exc:
        raise ConfigError(f"ranges: {exc}") from None
    if args.format == "json":
        text = json.dumps(
            [dict(zip(SweepRow.columns(), map(_json_cell, astuple(r)))) for r in rows],
            indent=2,
        ) + "\n"
        name = "sweep.json"
    else:
        text = _csv_text(SweepRow.columns(), (astuple(r) for r in rows))
        name = "sweep.csv"
    _write(args.out, name, text)
    if args.out is None:
        print(text, end="")
    bad = sum(not r.agree for r in rows)
    print(f"rows {len(rows)} agree {len(rows) - bad} disagree {bad}", file=sys.stderr)
    return 0 if bad == 0 else 1


def _json_cell(v):
    if isinstance(v, float):
        return None if v != v else float(fmt(v))
    return v


def emit_figures(outdir: str, params: GameParams, step: float = 0.01) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, name in FIGURES.items():
        traj = scenario(params, name)
        cum = traj.cumulative_payoffs(0)
        rows = [(r.period, r.payoffs[0], c) for r, c in zip(traj.records, cum)]
        path = out / f"{stem}.csv"
        path.write_text(_csv_text(["period", "payoff", "cumulative_payoff"], rows))
        written.append(path)
    curve = grid_search(params, step).samples
    path = out / "fig5_switch_payoff.csv"
    path.write_text(_csv_text(["x", "payoff"], curve))
    written.append(path)
    return sorted(written)


def cmd_emit_figures(args, config) -> int:
    params = params_from(config)
    step = args.step if args.step is not None else config.get("step", 0.01)
    try:
        paths = emit_figures(args.out or "figures", params, step)
    except GameError as exc:
        raise ConfigError(str(exc)) from None
    for p in paths:
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynpgg",
        description="Dynamic public good game: simulation, optimum and equilibrium checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON config document")
    common.add_argument("--out", metavar="DIR", help="directory for output files")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="play one game")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", parents=[common], help="switch-stage grid search")
    p.add_argument("--step", type=float)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify-nash", parents=[common], help="unilateral deviation check")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--step", type=float, help="contribution grid step (default 1)")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_verify_nash)

    p = sub.add_parser("fit", parents=[common], help="least-squares quadratic fit")
    p.add_argument("input", metavar="CSV", help="file of x,y rows")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sweep", parents=[common], help="robustness sweep")
    p.add_argument("--step", type=float)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("emit-figures", parents=[common], help="figure data as CSV")
    p.add_argument("--step", type=float)
    p.set_defaults(func=cmd_emit_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GameError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
