"""Command-line surface: run a scenario, sweep an axis, inspect intermediates.

Configs are flat ``key = value`` text files with ``#`` comments; any key can
be overridden on the command line with ``--key value``. All output is CSV
with LF line endings, reproducible byte-for-byte from the master seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import sim
from .classify import classify_and_weigh, classweights_to_csv
from .coloring import coloring_to_csv
from .netgraph import graph_to_edge_list, placement_to_csv
from .sim import ScenarioConfig

RUN_CSV_HEADER = (
    "policy,mean_hit_rate,std_hit_rate,mean_mbs_load,mean_colors_used,replications,master_seed"
)

_INT_KEYS = (
    "n_sbs",
    "n_users",
    "file_count",
    "memory",
    "n_rounds",
    "requests_per_round",
    "replications",
    "master_seed",
    "exact_solver_limit",
    "max_matern_iterations",
)
_FLOAT_KEYS = ("cell_radius", "sbs_range", "sbs_range_min", "sbs_range_max", "alpha", "r_class")
_STR_KEYS = ("policy", "threshold_mode", "coloring_mode", "survivor_counting")

# Config file key order; also the canonical serialization order.
CONFIG_KEYS = (
    "cell_radius",
    "n_sbs",
    "sbs_range",
    "sbs_range_min",
    "sbs_range_max",
    "n_users",
    "file_count",
    "memory",
    "alpha",
    "n_rounds",
    "requests_per_round",
    "policy",
    "threshold_mode",
    "coloring_mode",
    "r_class",
    "replications",
    "master_seed",
    "exact_solver_limit",
    "max_matern_iterations",
    "survivor_counting",
)

_POLICY_ALIASES = {"threshold": "threshold_coloring", "matern": "matern_coloring"}

RECIPES = {
    # axis, values, policy tokens, config presets
    "fig3": ("n_sbs", [16, 32, 48, 64],
             ["baseline", "threshold_coloring", "matern_coloring"],
             {"alpha": 0.6}),
    "fig4": ("alpha", [0.2, 0.4, 0.6, 0.8, 1.0, 1.2],
             ["baseline", "threshold_coloring", "matern_coloring"],
             {"n_sbs": 48}),
    "fig5": ("n_sbs", [16, 32, 48, 64],
             ["baseline", "threshold_individual", "threshold_universal"],
             {"sbs_range": None, "sbs_range_min": 50.0, "sbs_range_max": 100.0}),
}


class ConfigError(ValueError):
    """Malformed config file or invalid key/value."""


def _cast(key: str, raw: str, where: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _STR_KEYS:
            value = raw
            if key == "policy":
                value = _POLICY_ALIASES.get(value, value)
            return value
    except ValueError:
        raise ConfigError(f"{where}: invalid value {raw!r} for key '{key}'") from None
    raise ConfigError(f"{where}: unknown key '{key}'")


def parse_config_text(text: str, overrides: dict[str, str] | None = None) -> ScenarioConfig:
    """Parse ``key = value`` lines into a validated ScenarioConfig.

    Raises ConfigError naming the offending line for unknown keys, bad
    values, duplicates, missing required keys, or constraint violations.
    """
    values: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line.rstrip()!r}")
        key, raw_value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        values[key] = _cast(key, raw_value, f"line {lineno}")
    for key, raw_value in (overrides or {}).items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"override: unknown key '{key}'")
        values[key] = _cast(key, raw_value, f"override --{key}")
    if "n_sbs" not in values:
        raise ConfigError("missing required key 'n_sbs'")
    if ("sbs_range_min" in values or "sbs_range_max" in values) and "sbs_range" not in values:
        values["sbs_range"] = None
    cfg = ScenarioConfig(**values)
    try:
        cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def parse_config_file(path: str, overrides: dict[str, str] | None = None) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, overrides)


def config_to_text(cfg: ScenarioConfig) -> str:
    """Serialize so that parsing the result reproduces an equal config."""
    lines = []
    for key in CONFIG_KEYS:
        value = getattr(cfg, key)
        if value is None:
            continue
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    return str(float(x))


def run_result_csv(cfg: ScenarioConfig, result: sim.SimResult) -> str:
    row = ",".join(
        (
            cfg.policy,
            _fmt(result.mean_hit_rate),
            _fmt(result.std_hit_rate),
            _fmt(result.mbs_load),
            _fmt(result.mean_colors_used),
            str(cfg.replications),
            str(cfg.master_seed),
        )
    )
    return RUN_CSV_HEADER + "\n" + row + "\n"


def _collect_overrides(ns: argparse.Namespace) -> dict[str, str]:
    return {key: getattr(ns, key) for key in CONFIG_KEYS if getattr(ns, key, None) is not None}


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("config overrides")
    for key in CONFIG_KEYS:
        group.add_argument(f"--{key}", metavar="VALUE", help=argparse.SUPPRESS)


def cmd_run(ns: argparse.Namespace) -> int:
    cfg = parse_config_file(ns.config, _collect_overrides(ns))
    result = sim.run_scenario(cfg, workers=ns.workers)
    sys.stdout.write(run_result_csv(cfg, result))
    return 0


def cmd_sweep(ns: argparse.Namespace) -> int:
    cfg = parse_config_file(ns.config, _collect_overrides(ns))
    if ns.recipe:
        if ns.axis or ns.values or ns.policies:
            raise ConfigError("--recipe and explicit --axis/--values/--policies are mutually exclusive")
        axis, values, policies, presets = RECIPES[ns.recipe]
        cfg = dataclasses.replace(cfg, **presets)
        cfg.validate()
    else:
        if not (ns.axis and ns.values and ns.policies):
            raise ConfigError("either --recipe or all of --axis/--values/--policies are required")
        axis = ns.axis
        caster = int if axis == "n_sbs" else float
        try:
            values = [caster(v) for v in ns.values.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"invalid --values list {ns.values!r}") from None
        policies = [p.strip() for p in ns.policies.split(",") if p.strip()]
    cells = sim.sweep(cfg, axis, values, policies, workers=ns.workers)
    csv_text = sim.sweep_to_csv(cells)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_inspect(ns: argparse.Namespace) -> int:
    cfg = parse_config_file(ns.config, _collect_overrides(ns))
    seed0 = sim.replication_seeds(cfg.master_seed, 1)[0]
    stage = "network"
    try:
        sbs, ranges = sim.build_network(cfg, seed0)
        policy_seed = sim._substreams(seed0, 4)[2]
        stage = ns.emit
        if ns.emit == "classes":
            cw = classify_and_weigh(
                sbs,
                cfg.r_class,
                policy_seed,
                max_iterations=cfg.max_matern_iterations,
                survivor_counting=cfg.survivor_counting,
            )
            text = classweights_to_csv(cw)
        else:
            art = sim.build_policy_artifacts(cfg, sbs, ranges, policy_seed)
            if ns.emit == "graph":
                if art.conflict_graph is None:
                    raise ValueError(f"policy '{cfg.policy}' builds no conflict graph")
                text = graph_to_edge_list(art.conflict_graph)
            elif ns.emit == "coloring":
                if art.coloring is None:
                    raise ValueError(f"policy '{cfg.policy}' builds no coloring")
                text = coloring_to_csv(art.coloring)
            else:
                text = placement_to_csv(art.placement)
    except Exception as exc:
        raise RuntimeError(f"stage '{stage}': {exc}") from exc
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbscache",
        description="Graph-coloring cache placement simulator for small-cell networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and print a result CSV row")
    p_run.add_argument("config", help="path to a key = value config file")
    p_run.add_argument("--workers", type=int, default=1, help="replication worker threads")
    _add_override_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep an axis over policies, write a CSV table")
    p_sweep.add_argument("config", help="path to a key = value config file")
    p_sweep.add_argument("--axis", choices=sim.SWEEP_AXES)
    p_sweep.add_argument("--values", help="comma-separated axis values")
    p_sweep.add_argument("--policies", help="comma-separated policy names")
    p_sweep.add_argument("--recipe", choices=sorted(RECIPES))
    p_sweep.add_argument("--out", help="output CSV path (default: stdout)")
    p_sweep.add_argument("--workers", type=int, default=1)
    _add_override_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_inspect = sub.add_parser("inspect", help="emit one replication's intermediate artifact")
    p_inspect.add_argument("config", help="path to a key = value config file")
    p_inspect.add_argument(
        "--emit", required=True, choices=("graph", "coloring", "placement", "classes")
    )
    p_inspect.add_argument("--out", help="output path (default: stdout)")
    _add_override_flags(p_inspect)
    p_inspect.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
