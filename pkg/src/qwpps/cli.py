"""Command-line interface.

Commands:
  simulate      spatial distributions of line walks (quantum / classical)
  pps           pre/post-selection report for a scenario (JSON schema v1)
  trajectories  stream counterfactual trajectories with leap flags
  verify        run every built-in bundle against its expectation table

Exit codes: 0 success, 1 runtime failure (including failed verification),
2 usage or parameter error. Identical invocations produce byte-identical
output; ANSI color is used only on a terminal and is disabled entirely by
the QWPPS_NO_COLOR environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .distributions import (
    COIN_INITS,
    classical_rw_distribution,
    comparison_rows,
    hadamard_walk_distribution,
)
from .pps import (
    TwoStateSystem,
    detect_paradox,
    enumerate_trajectories,
    trajectory_has_leap,
)
from .scenarios import (
    build_scenario,
    list_scenarios,
    system_from_dict,
    verify_all,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

REPORT_SCHEMA = "qwpps-pps-report"
REPORT_SCHEMA_VERSION = 1


class UsageFailure(Exception):
    pass


class RuntimeFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation. Defaults: format=table, cap=100."""

    command: str
    walk: str | None = None
    coin_init: str = "plus-i"
    steps: int | None = None
    s: int | None = None
    scenario: str | None = None
    scenario_file: str | None = None
    fmt: str = "table"
    output: str | None = None
    cap: int = 100
    timeseries: bool = False
    with_classical: bool = False
    only: tuple[str, ...] = ()

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        values = {k: v for k, v in vars(ns).items() if v is not None}
        unknown = set(values) - known
        if unknown:
            raise UsageFailure(f"unknown option key(s): {sorted(unknown)}")
        if isinstance(values.get("only"), list):
            values["only"] = tuple(values["only"])
        return cls(**values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwpps",
        description="Quantum walk simulator with pre/post-selection analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="spatial distribution of a line walk")
    sim.add_argument("--walk", choices=["hadamard-line", "classical-line"], required=True)
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--coin-init", dest="coin_init", choices=sorted(COIN_INITS), default="plus-i")
    sim.add_argument("--with-classical", dest="with_classical", action="store_true",
                     help="emit quantum and classical series side by side")
    sim.add_argument("--timeseries", action="store_true",
                     help="emit every intermediate step, not just the final one")
    sim.add_argument("--format", dest="fmt", choices=["table", "csv", "json"], default="table")
    sim.add_argument("--output", default=None)

    def add_scenario_options(p, with_format=True):
        p.add_argument("--scenario", default=None,
                       help="built-in scenario name (see `verify --help` epilog)")
        p.add_argument("--scenario-file", dest="scenario_file", default=None,
                       help="path to a scenario JSON document")
        p.add_argument("--steps", type=int, default=None, help="horizon T, where applicable")
        p.add_argument("--s", type=int, default=None, help="scenario2's site parameter")
        if with_format:
            p.add_argument("--format", dest="fmt", choices=["table", "json"], default="table")
        p.add_argument("--cap", type=int, default=100)
        p.add_argument("--output", default=None)

    pps = sub.add_parser("pps", help="certainty scan, paradox witnesses, trajectory count")
    add_scenario_options(pps)

    trj = sub.add_parser("trajectories", help="stream counterfactual trajectories")
    add_scenario_options(trj, with_format=False)

    ver = sub.add_parser(
        "verify",
        help="regression-check every built-in bundle",
        epilog="scenarios: " + ", ".join(name for name, _ in list_scenarios()),
    )
    ver.add_argument("--only", action="append", default=None,
                     help="restrict to one scenario (repeatable)")
    ver.add_argument("--output", default=None)
    return parser


def _write_text(cfg: RunConfig, text: str):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _use_color() -> bool:
    return sys.stdout.isatty() and "QWPPS_NO_COLOR" not in os.environ


def _status(passed: bool) -> str:
    word = "PASS" if passed else "FAIL"
    if _use_color():
        return f"\x1b[32m{word}\x1b[0m" if passed else f"\x1b[31m{word}\x1b[0m"
    return word


def _resolve_system(cfg: RunConfig):
    """Returns (name, system). Builder parameter problems are usage errors;
    scenario-file problems are runtime errors."""
    if (cfg.scenario is None) == (cfg.scenario_file is None):
        raise UsageFailure("exactly one of --scenario / --scenario-file is required")
    if cfg.scenario_file:
        try:
            with open(cfg.scenario_file, "r", encoding="utf-8") as handle:
                doc = json.load(handle)
            return system_from_dict(doc)
        except (OSError, json.JSONDecodeError) as exc:
            raise RuntimeFailure(f"cannot load scenario file: {exc}")
        except (ValueError, KeyError, TypeError) as exc:
            raise RuntimeFailure(f"invalid scenario document: {exc}")
    params = {}
    if cfg.steps is not None:
        params["T"] = cfg.steps
    if cfg.s is not None:
        params["s"] = cfg.s
    try:
        bundle = build_scenario(cfg.scenario, **params)
    except ValueError as exc:
        raise UsageFailure(str(exc))
    return bundle.name, bundle.system


# ---------------------------------------------------------------------------
# simulate

def _format_float_csv(value: float) -> str:
    return format(float(value), ".17g")


def _rows_to_csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            str(cell) if isinstance(cell, int) else _format_float_csv(cell)
            for cell in row
        ))
    return "\n".join(lines) + "\n"


def _rows_to_table(header: list[str], rows: list[tuple]) -> str:
    lines = ["  ".join(f"{name:>12}" for name in header)]
    for row in rows:
        lines.append("  ".join(
            f"{cell:>12}" if isinstance(cell, int) else f"{cell:>12.10g}"
            for cell in row
        ))
    return "\n".join(lines) + "\n"


def _rows_to_json(meta: dict, header: list[str], rows: list[tuple]) -> str:
    doc = dict(meta)
    doc["columns"] = header
    doc["rows"] = [list(row) for row in rows]
    return json.dumps(doc, indent=2) + "\n"


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.steps is None or cfg.steps < 0:
        raise UsageFailure(f"--steps must be >= 0, got {cfg.steps}")
    if cfg.with_classical and (cfg.walk != "hadamard-line" or cfg.timeseries):
        raise UsageFailure("--with-classical applies to the final hadamard-line distribution")

    if cfg.with_classical:
        header = ["x", "p_quantum", "p_classical"]
        rows = comparison_rows(cfg.steps, cfg.coin_init)
    elif cfg.timeseries:
        header = ["t", "x", "p"]
        rows = []
        for t in range(cfg.steps + 1):
            dist = (classical_rw_distribution(t) if cfg.walk == "classical-line"
                    else hadamard_walk_distribution(t, cfg.coin_init))
            rows.extend((t, x, p) for x, p in dist.items_sorted())
    else:
        header = ["x", "p"]
        dist = (classical_rw_distribution(cfg.steps) if cfg.walk == "classical-line"
                else hadamard_walk_distribution(cfg.steps, cfg.coin_init))
        rows = dist.items_sorted()

    meta = {
        "schema": "qwpps-distribution",
        "schema_version": 1,
        "walk": cfg.walk,
        "steps": cfg.steps,
        "coin_init": cfg.coin_init if cfg.walk == "hadamard-line" else None,
    }
    if cfg.fmt == "csv":
        _write_text(cfg, _rows_to_csv(header, rows))
    elif cfg.fmt == "json":
        _write_text(cfg, _rows_to_json(meta, header, rows))
    else:
        _write_text(cfg, _rows_to_table(header, rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# pps

def report_to_dict(name: str, system: TwoStateSystem, report) -> dict:
    topology = system.space.topology
    fmt = topology.format_position
    return {
        "schema": REPORT_SCHEMA,
        "schema_version": REPORT_SCHEMA_VERSION,
        "scenario": name,
        "horizon": report.horizon,
        "exclusivity_scope": report.exclusivity_scope,
        "postselection_probability": report.postselection_probability,
        "paradox_found": report.paradox_found,
        "times": [
            {
                "t": t,
                "certain": [fmt(x) for x in report.certain_positions[t]],
                "impossible": [fmt(x) for x in report.impossible_positions[t]],
            }
            for t in range(report.horizon + 1)
        ],
        "witnesses": [
            {
                "t1": w.t1,
                "x1": fmt(w.x1),
                "t2": w.t2,
                "x2": fmt(w.x2),
                "same_time": w.same_time,
                "scope": w.scope,
                "velocity": w.velocity,
            }
            for w in report.paradox_witnesses
        ],
        "trajectory_count": report.trajectory_count,
    }


def _report_to_table(name: str, system: TwoStateSystem, report) -> str:
    fmt = system.space.topology.format_position
    lines = [
        f"scenario: {name}",
        f"horizon: {report.horizon}",
        f"postselection probability: {report.postselection_probability!r}",
        f"paradox found: {'yes' if report.paradox_found else 'no'} "
        f"({len(report.paradox_witnesses)} witness pair(s), "
        f"exclusivity scope: {report.exclusivity_scope})",
        f"trajectory count: {report.trajectory_count}",
        "",
        f"{'t':>4}  {'certain':<24} impossible",
    ]
    for t in range(report.horizon + 1):
        certain = ",".join(fmt(x) for x in report.certain_positions[t]) or "-"
        impossible = ",".join(fmt(x) for x in report.impossible_positions[t]) or "-"
        lines.append(f"{t:>4}  {certain:<24} {impossible}")
    same_time = [w for w in report.paradox_witnesses if w.same_time]
    if same_time:
        lines.append("")
        lines.append("same-time witnesses:")
        lines.extend(f"  t={w.t1}: {fmt(w.x1)} and {fmt(w.x2)}" for w in same_time)
    cross = [w for w in report.paradox_witnesses if not w.same_time]
    if cross:
        lines.append("")
        lines.append("cross-time witnesses (first 10):")
        for w in cross[:10]:
            velocity = f", implied velocity {w.velocity:g}" if w.velocity else ""
            lines.append(
                f"  (t={w.t1}, {fmt(w.x1)}) vs (t={w.t2}, {fmt(w.x2)}){velocity}"
            )
    return "\n".join(lines) + "\n"


def cmd_pps(cfg: RunConfig) -> int:
    name, system = _resolve_system(cfg)
    report = detect_paradox(system)
    if cfg.fmt == "json":
        _write_text(cfg, json.dumps(report_to_dict(name, system, report), indent=2) + "\n")
    else:
        _write_text(cfg, _report_to_table(name, system, report))
    return EXIT_OK


# ---------------------------------------------------------------------------
# trajectories

def cmd_trajectories(cfg: RunConfig) -> int:
    if cfg.cap < 0:
        raise UsageFailure(f"--cap must be >= 0, got {cfg.cap}")
    name, system = _resolve_system(cfg)
    fmt = system.space.topology.format_position
    enum = enumerate_trajectories(system, cfg.cap)
    lines = []
    for trajectory in enum.sample:
        flag = "  [leap]" if trajectory_has_leap(system, trajectory) else ""
        lines.append(" ".join(fmt(x) for x in trajectory.positions) + flag)
    lines.append(
        f"total={enum.count} any-leap={'yes' if enum.any_leap else 'no'} "
        f"all-leap={'yes' if enum.all_leap else 'no'}"
    )
    _write_text(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def cmd_verify(cfg: RunConfig) -> int:
    known = {name for name, _ in list_scenarios()}
    for name in cfg.only:
        if name not in known:
            raise UsageFailure(f"unknown scenario {name!r} in --only")
    results = verify_all(list(cfg.only) or None)
    lines = []
    for r in results:
        lines.append(f"{r.scenario:<16} {r.check:<44} {_status(r.passed)}  {r.detail}")
    passed = sum(1 for r in results if r.passed)
    lines.append(f"{passed}/{len(results)} checks passed")
    _write_text(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if passed == len(results) else EXIT_RUNTIME


COMMANDS = {
    "simulate": cmd_simulate,
    "pps": cmd_pps,
    "trajectories": cmd_trajectories,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed the message
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = RunConfig.from_namespace(namespace)
        return COMMANDS[cfg.command](cfg)
    except UsageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except BrokenPipeError:
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
