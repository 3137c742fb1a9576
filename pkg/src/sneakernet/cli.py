"""Command-line front end.

Subcommands:
  estimate   stage-by-stage failure rates for one network
  sweep      figure data (rtot-vs-nm, t3-vs-nm, trucks-vs-target, qldpc-vs-surface)
  solve-t3   longest transport time meeting a failure target
  solve-nm   smallest patch meeting a failure target
  fleet      vehicle count and cost per bit
  compare    qLDPC and surface-code networks side by side
  validate   additive vs exact vs Monte-Carlo failure probability

Settings are layered: named parameter set, then an optional JSON config file
with sections "physical", "network", "economics" and "run", then flags.

Exit status: 0 success, 2 invalid input, 3 infeasible target.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings
from typing import Any, Sequence

from . import sweeps
from .logistics import dollars, fleet_qldpc, fleet_surface
from .pipeline_qldpc import Scenario, evaluate, stage_spec
from .pipeline_surface import SurfaceScenario, evaluate_sc, stage_spec_sc
from .qec_models import (
    PARAMETER_SETS,
    HgpConfig,
    IdlingMode,
    PhysicalParams,
    SurfaceConfig,
    ThresholdWarning,
)
from .solvers import (
    HGP_BRACKET,
    SURFACE_BRACKET,
    max_transport_time,
    min_hgp_patch,
    min_surface_patch,
)
from .validation import approx_failure_prob, exact_failure_prob, monte_carlo_failure

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_INFEASIBLE = 3

DEFAULT_SURFACE_TARGET = 0.08

_NUM = (int, float)
SCHEMA: dict[str, dict[str, tuple]] = {
    "physical": {
        "parameter_set": (str,), "tau_t": _NUM, "a_p": _NUM, "d_p": _NUM,
        "t_g": _NUM, "T_c": _NUM, "p_g": _NUM, "idling": (str,),
    },
    "network": {
        "code": (str,), "n_m": _NUM, "n_ms": _NUM, "t3": _NUM, "S": (int,),
        "truck_capacity": _NUM, "r_e": _NUM, "device_qubits": _NUM, "target": _NUM,
    },
    "economics": {"rent": _NUM, "maintenance": _NUM},
    "run": {"format": (str,), "out": (str,), "seed": (int,), "trials": (int,), "jobs": (int,)},
}

# flag dest -> (section, key)
FLAG_KEYS = {
    "params": ("physical", "parameter_set"),
    "pg": ("physical", "p_g"),
    "idling": ("physical", "idling"),
    "code": ("network", "code"),
    "n_m": ("network", "n_m"),
    "n_ms": ("network", "n_ms"),
    "t3": ("network", "t3"),
    "s": ("network", "S"),
    "truck_capacity": ("network", "truck_capacity"),
    "re": ("network", "r_e"),
    "device_qubits": ("network", "device_qubits"),
    "target": ("network", "target"),
    "rent": ("economics", "rent"),
    "maintenance": ("economics", "maintenance"),
    "format": ("run", "format"),
    "out": ("run", "out"),
    "seed": ("run", "seed"),
    "trials": ("run", "trials"),
    "jobs": ("run", "jobs"),
}

DEFAULTS = {
    "physical": {"parameter_set": "paper-defaults"},
    "network": {"code": "qldpc", "n_m": 60_000, "t3": 5400, "S": 5,
                "truck_capacity": 1_000_000, "r_e": 2300},
    "economics": {"rent": 150, "maintenance": 2_000_000},
    "run": {"seed": 0, "trials": 100_000, "jobs": 1},
}


class ConfigError(ValueError):
    pass


class Infeasible(RuntimeError):
    pass


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    check_config(data)
    return data


def check_config(data: Any) -> None:
    """Reject unknown sections/keys and wrongly typed values."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    for section, values in data.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"config section {section!r} must be an object")
        for key, value in values.items():
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            types = SCHEMA[section][key]
            if isinstance(value, bool) or not isinstance(value, types):
                expected = "/".join(t.__name__ for t in types)
                raise ConfigError(f"{section}.{key} must be {expected}, got {value!r}")


def resolve(args: argparse.Namespace) -> dict[str, dict]:
    """Merge defaults, config file and flags into one nested settings dict."""
    merged = {section: dict(values) for section, values in DEFAULTS.items()}
    if getattr(args, "config", None):
        for section, values in load_config_file(args.config).items():
            merged[section].update(values)
    for dest, (section, key) in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            merged[section][key] = value
    physical = merged["physical"]
    # per-patch idling without an explicit gate error starts from the 0.0008 near-term value
    if physical.get("idling") == IdlingMode.PER_PATCH.value and "p_g" not in physical \
            and physical["parameter_set"] == "paper-defaults":
        physical["parameter_set"] = "paper-idling"
    check_config(merged)
    return merged


def physical_params(cfg: dict) -> PhysicalParams:
    phys = cfg["physical"]
    name = phys["parameter_set"]
    if name not in PARAMETER_SETS:
        raise ConfigError(f"unknown parameter set {name!r}; choose from {sorted(PARAMETER_SETS)}")
    changes = {k: float(phys[k]) for k in ("tau_t", "a_p", "d_p", "t_g", "T_c") if k in phys}
    if "p_g" in phys:
        changes["p_g_base"] = float(phys["p_g"])
    if "idling" in phys:
        changes["idling_mode"] = IdlingMode(phys["idling"])
    return PARAMETER_SETS[name].replace(**changes)


def qldpc_scenario(cfg: dict, n_m: float | None = None) -> Scenario:
    net, eco = cfg["network"], cfg["economics"]
    return Scenario(
        code=HgpConfig(float(n_m if n_m is not None else net["n_m"])),
        params=physical_params(cfg),
        T_3=float(net["t3"]),
        S=net["S"],
        truck_capacity_qubits=float(net["truck_capacity"]),
        r_e=float(net["r_e"]),
        R_h=float(eco["rent"]),
        C_m=float(eco["maintenance"]),
    )


def surface_scenario(cfg: dict, n_ms: float) -> SurfaceScenario:
    net, eco = cfg["network"], cfg["economics"]
    return SurfaceScenario(
        code=SurfaceConfig(float(n_ms)),
        params=physical_params(cfg),
        T_3s=float(net["t3"]),
        device_qubits=float(net.get("device_qubits", net["n_m"])),
        S=net["S"],
        truck_capacity_qubits=float(net["truck_capacity"]),
        r_e=float(net["r_e"]),
        R_h=float(eco["rent"]),
        C_m=float(eco["maintenance"]),
    )


def surface_patch(cfg: dict) -> tuple[float, dict]:
    """Surface patch size: the configured n_ms, or the smallest whole-qubit patch meeting the target."""
    net = cfg["network"]
    if "n_ms" in net:
        return float(net["n_ms"]), {}
    target = float(net.get("target", DEFAULT_SURFACE_TARGET))
    res = min_surface_patch(float(net["t3"]), physical_params(cfg), target)
    if not res.feasible:
        raise Infeasible(f"surface target {target}: {res.message}")
    return float(math.ceil(res.value)), {"target": target, "n_ms_continuous": res.value}


# ---------------------------------------------------------------- output


def _cell(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        rounded = float(f"{value:.6g}")
        return int(rounded) if rounded.is_integer() and abs(rounded) < 1e15 else rounded
    if isinstance(value, (list, tuple)):
        return [_cell(v) for v in value]
    if hasattr(value, "value"):  # enums
        return value.value
    return value


def _csv_cell(value: Any) -> str:
    value = _cell(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list):
        return "; ".join(str(v) for v in value)
    return str(value)


def render(rows: list[dict], fmt: str, single: bool = False) -> str:
    if fmt == "json":
        body = [{k: _cell(v) for k, v in row.items()} for row in rows]
        return json.dumps(body[0] if single else body, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header: list[str] = []
    for row in rows:
        header += [k for k in row if k not in header]
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row.get(k)) for k in header])
    return buf.getvalue()


def emit(text: str, cfg: dict) -> None:
    out = cfg["run"].get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _inputs(cfg: dict) -> dict:
    params = physical_params(cfg)
    return {"p_g_base": params.p_g_base, "idling": params.idling_mode.value}


# ---------------------------------------------------------------- commands


def cmd_estimate(cfg: dict) -> tuple[list[dict], int]:
    net = cfg["network"]
    if net["code"] == "surface":
        n_ms, extra = surface_patch(cfg)
        bd = evaluate_sc(surface_scenario(cfg, n_ms))
        row = {"code": "surface", "n_ms": n_ms, **extra, **_inputs(cfg), **bd.as_dict()}
    else:
        bd = evaluate(qldpc_scenario(cfg))
        row = {"code": "qldpc", "n_m": float(net["n_m"]), **_inputs(cfg), **bd.as_dict()}
    return [row], 0


def cmd_solve_t3(cfg: dict) -> tuple[list[dict], int]:
    net = cfg["network"]
    target = float(net.get("target", 0.1))
    sc = qldpc_scenario(cfg)
    res = max_transport_time(sc.code, sc.params, target, scenario=sc)
    row = {"n_m": sc.code.n_m, "target": target, "T_3": res.value, **res.as_dict()}
    del row["value"]
    return [row], 0 if res.feasible else EXIT_INFEASIBLE


def cmd_solve_nm(cfg: dict, bracket: tuple[float, float] | None) -> tuple[list[dict], int]:
    net = cfg["network"]
    T_3 = float(net["t3"])
    params = physical_params(cfg)
    kwargs = {"bracket": bracket} if bracket else {}
    if net["code"] == "surface":
        target = float(net.get("target", DEFAULT_SURFACE_TARGET))
        res = min_surface_patch(T_3, params, target, **kwargs)
        row = {"code": "surface", "T_3": T_3, "target": target, "n_ms": res.value}
    else:
        target = float(net.get("target", 0.1))
        res = min_hgp_patch(T_3, params, target, **kwargs)
        row = {"code": "qldpc", "T_3": T_3, "target": target, "n_m": res.value}
    row.update(feasible=res.feasible, residual=res.residual, iterations=res.iterations, message=res.message)
    return [row], 0 if res.feasible else EXIT_INFEASIBLE


def _fleet_row(report, fidelity_field: str, R: float, extra: dict) -> dict:
    row = {**report.as_dict(), **extra, fidelity_field: R, "C_o_display": dollars(report.C_o)}
    return row


def qldpc_fleet_row(cfg: dict, n_m: float | None = None) -> dict:
    sc = qldpc_scenario(cfg, n_m)
    bd = evaluate(sc)
    return _fleet_row(fleet_qldpc(sc, bd), "R_tot", bd.R_tot, {})


def surface_fleet_row(cfg: dict) -> dict:
    n_ms, extra = surface_patch(cfg)
    ss = surface_scenario(cfg, n_ms)
    bd = evaluate_sc(ss)
    return _fleet_row(fleet_surface(ss, bd), "R_tot", bd.R_tots, extra)


def cmd_fleet(cfg: dict) -> tuple[list[dict], int]:
    if cfg["network"]["code"] == "surface":
        return [surface_fleet_row(cfg)], 0
    return [qldpc_fleet_row(cfg)], 0


def cmd_compare(cfg: dict) -> tuple[list[dict], int]:
    net = cfg["network"]
    n_m = None
    if "target" in net:
        target = float(net["target"])
        res = min_hgp_patch(float(net["t3"]), physical_params(cfg), target,
                            scenario=qldpc_scenario(cfg))
        if not res.feasible:
            raise Infeasible(f"qLDPC target {target}: {res.message}")
        n_m = res.value
    columns = ("code_family", "patch_qubits", "R_tot", "N_truck_tot", "C_t", "C_q", "C_o", "C_o_display")
    rows = [qldpc_fleet_row(cfg, n_m), surface_fleet_row(cfg)]
    return [{k: row[k] for k in columns} for row in rows], 0


def cmd_validate(cfg: dict) -> tuple[list[dict], int]:
    net, run = cfg["network"], cfg["run"]
    if net["code"] == "surface":
        n_ms, _ = surface_patch(cfg)
        spec = stage_spec_sc(surface_scenario(cfg, n_ms))
    else:
        spec = stage_spec(qldpc_scenario(cfg))
    exact = exact_failure_prob(spec)
    approx = approx_failure_prob(spec)
    estimate, stderr = monte_carlo_failure(spec, run["trials"], run["seed"], workers=run["jobs"])
    row = {
        "code": net["code"], "stages": len(spec), "trials": run["trials"], "seed": run["seed"],
        "approx": approx, "exact": exact, "approx_minus_exact": approx - exact,
        "second_order_bound": approx**2 / 2, "mc_estimate": estimate, "mc_std_error": stderr,
        "mc_within_3sigma": abs(estimate - exact) <= 3 * stderr,
    }
    return [row], 0


def cmd_sweep(cfg: dict, args: argparse.Namespace) -> tuple[list[dict], int]:
    figure = sweeps.ALIASES.get(args.figure, args.figure)
    _, curve_var, (start, stop, num), default_curves = sweeps.FIGURES[figure]
    start = args.start if args.start is not None else start
    stop = args.stop if args.stop is not None else stop
    num = args.num if args.num is not None else num
    values = sweeps.grid(start, stop, num)
    if args.curves:
        curves = [c.strip() for c in args.curves.split(",") if c.strip()]
        if curve_var != "code":
            try:
                curves = [float(c) for c in curves]
            except ValueError as exc:
                raise ConfigError(f"curves must be numbers: {args.curves!r}") from exc
        elif any(c not in ("qldpc", "surface") for c in curves):
            raise ConfigError(f"curves must be qldpc/surface: {args.curves!r}")
    elif figure in ("rtot-vs-nm", "trucks-vs-target") and args.t3 is not None:
        curves = [float(args.t3)]
    else:
        curves = list(default_curves)
    if figure == "qldpc-vs-surface":
        qldpc = qldpc_scenario(cfg)
        surface = surface_scenario(cfg, 1.0)
    else:
        qldpc, surface = qldpc_scenario(cfg), None
    rows = sweeps.run_sweep(figure, values, curves, qldpc, surface, jobs=cfg["run"]["jobs"])
    if args.fields:
        wanted = [f.strip() for f in args.fields.split(",") if f.strip()]
        unknown = [f for f in wanted if f not in rows[0]]
        if unknown:
            raise ConfigError(f"unknown fields {unknown}; available: {list(rows[0])}")
        keep = list(dict.fromkeys([sweeps.FIGURES[figure][0], curve_var, *wanted]))
        rows = [{k: row[k] for k in keep} for row in rows]
    return rows, 0


# ---------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON config file")
    shared.add_argument("--params", help=f"named parameter set ({', '.join(PARAMETER_SETS)})")
    shared.add_argument("--code", choices=("qldpc", "surface"))
    shared.add_argument("--n-m", dest="n_m", type=float, help="HGP memory size, physical qubits")
    shared.add_argument("--n-ms", dest="n_ms", type=float, help="surface patch size, physical qubits")
    shared.add_argument("--t3", type=float, help="one-way transport time, seconds")
    shared.add_argument("--pg", type=float, help="two-qubit gate error before idling adjustment")
    shared.add_argument("--idling", choices=[m.value for m in IdlingMode])
    shared.add_argument("--re", type=float, help="bits per second per destination")
    shared.add_argument("--s", type=int, help="number of qATM destinations")
    shared.add_argument("--truck-capacity", dest="truck_capacity", type=float,
                        help="physical qubits per vehicle")
    shared.add_argument("--device-qubits", dest="device_qubits", type=float,
                        help="qubits per priced memory device (default: n_m)")
    shared.add_argument("--rent", type=float, help="vehicle rent, dollars per hour")
    shared.add_argument("--maintenance", type=float, help="device upkeep, dollars per year")
    shared.add_argument("--target", type=float, help="tolerable total failure rate")
    shared.add_argument("--format", choices=("csv", "json"))
    shared.add_argument("--out", help="output path (default: stdout)")
    shared.add_argument("--seed", type=int)
    shared.add_argument("--trials", type=_positive_int)
    shared.add_argument("--jobs", type=_positive_int, help="parallel workers")
    shared.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="sneakernet",
        description="Resource estimates for delayed-choice entanglement sneakernets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("estimate", parents=[shared], help="stage failure rates and durations")
    sweep = sub.add_parser("sweep", parents=[shared], help="figure data as CSV")
    sweep.add_argument("--figure", required=True,
                       choices=sorted([*sweeps.FIGURES, *sweeps.ALIASES]))
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--num", type=int)
    sweep.add_argument("--curves", help="comma-separated curve values")
    sweep.add_argument("--fields", help="comma-separated output columns")
    sub.add_parser("solve-t3", parents=[shared], help="longest tolerable transport time")
    solve_nm = sub.add_parser("solve-nm", parents=[shared], help="smallest patch meeting a target")
    solve_nm.add_argument("--n-lo", dest="n_lo", type=float)
    solve_nm.add_argument("--n-hi", dest="n_hi", type=float)
    sub.add_parser("fleet", parents=[shared], help="vehicle count and cost per bit")
    sub.add_parser("compare", parents=[shared], help="qLDPC vs surface-code networks")
    sub.add_parser("validate", parents=[shared], help="check additive failure propagation")
    return parser


DEFAULT_FORMAT = {"sweep": "csv", "compare": "csv"}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    # threshold notes travel in the output rows instead
    warnings.simplefilter("ignore", ThresholdWarning)
    warnings.simplefilter("ignore", RuntimeWarning)
    try:
        cfg = resolve(args)
        cfg["run"].setdefault("format", DEFAULT_FORMAT.get(args.command, "json"))
        if cfg["run"]["format"] not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {cfg['run']['format']!r}")
        if cfg["network"]["code"] not in ("qldpc", "surface"):
            raise ConfigError(f"code must be qldpc or surface, got {cfg['network']['code']!r}")
        command = args.command
        if command == "estimate":
            rows, status = cmd_estimate(cfg)
        elif command == "sweep":
            rows, status = cmd_sweep(cfg, args)
        elif command == "solve-t3":
            rows, status = cmd_solve_t3(cfg)
        elif command == "solve-nm":
            bracket = None
            if args.n_lo is not None or args.n_hi is not None:
                lo, hi = SURFACE_BRACKET if cfg["network"]["code"] == "surface" else HGP_BRACKET
                bracket = (args.n_lo if args.n_lo is not None else lo,
                           args.n_hi if args.n_hi is not None else hi)
            rows, status = cmd_solve_nm(cfg, bracket)
        elif command == "fleet":
            rows, status = cmd_fleet(cfg)
        elif command == "compare":
            rows, status = cmd_compare(cfg)
        else:
            rows, status = cmd_validate(cfg)
    except Infeasible as exc:
        print(f"sneakernet: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        print(f"sneakernet: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    single = args.command not in ("sweep", "compare")
    emit(render(rows, cfg["run"]["format"], single=single), cfg)
    if status == EXIT_INFEASIBLE:
        print("sneakernet: infeasible: target not met", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
