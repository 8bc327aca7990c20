"""Command-line front end.

Every subcommand echoes its fully resolved configuration (effective seed and
derived quantities included) as comment lines at the top of stdout, then
emits the requested table in CSV or JSON.  Progress goes to stderr only, so
stdout stays machine readable and byte-identical across reruns and across
--jobs settings.

Option values resolve in precedence order: command-line flag, then a
LCSLAB_-prefixed environment variable, then a `key = value` config file line,
then the built-in default.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Callable, Sequence

from . import __version__
from .errors import InputError
from .estimators import (
    check_condition3,
    check_curve_concavity,
    check_curve_symmetry,
    curve_to_csv,
    estimate_curve,
    estimate_gamma,
)
from .experiments import (
    EVENTS,
    ExperimentConfig,
    run_delta_trials,
    run_event_trials,
    run_gap_trials,
    table_row_to_json,
    table_rows_to_csv,
    to_json_text,
    trial_records_to_csv,
    trial_records_to_json,
)
from .generators import block_length_for, round_half_up
from .oracles import run_oracle_suites
from .sequences import SymbolSequence

ENV_PREFIX = "LCSLAB_"

_OPTIONS: dict[str, Callable[[str], Any]] = {
    "k": int,
    "n": int,
    "d": int,
    "ell": int,
    "beta": float,
    "alpha": float,
    "p": float,
    "trials": int,
    "seed": int,
    "jobs": int,
    "format": str,
    "config": str,
    "block_mode": str,
    "objective": str,
    "gamma_a": float,
    "c_h": float,
    "h_p": float,
    "p_grid": str,
    "block_symbol": int,
    "event": str,
    "x": str,
    "y": str,
    "per_trial": lambda v: v.lower() in ("1", "true", "yes"),
    "progress_every": int,
}

_DEFAULTS: dict[str, Any] = {
    "k": 2,
    "n": None,
    "d": 500,
    "ell": None,
    "beta": 0.8,
    "alpha": 0.6,
    "p": 0.0,
    "trials": 100,
    "seed": 0,
    "jobs": 1,
    "format": "csv",
    "config": None,
    "block_mode": "inserted",
    "objective": "maximize-gaps",
    "gamma_a": None,
    "c_h": 0.15,
    "h_p": 0.02,
    "p_grid": "-0.4:0.4:0.1",
    "block_symbol": 0,
    "event": None,
    "x": None,
    "y": None,
    "per_trial": False,
    "progress_every": 10,
}

# Knobs that change execution but never the computed output; excluded from
# the echoed configuration so stdout is identical across them.
_EXECUTION_ONLY = {"jobs", "progress_every", "config"}


class UsageError(Exception):
    pass


def _parse_config_file(path: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown config key '{key}'")
        try:
            values[key] = _OPTIONS[key](value)
        except ValueError:
            raise UsageError(
                f"{path}:{lineno}: invalid value {value!r} for key '{key}'"
            ) from None
    return values


def _env_values() -> dict[str, Any]:
    values: dict[str, Any] = {}
    for key, parse in _OPTIONS.items():
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            try:
                values[key] = parse(raw)
            except ValueError:
                raise UsageError(
                    f"invalid value {raw!r} in environment variable "
                    f"{ENV_PREFIX + key.upper()}"
                ) from None
    return values


class _Resolved:
    """Layered option lookup: flags over env over file over built-ins."""

    def __init__(self, args: argparse.Namespace):
        self._flags = {
            k: v for k, v in vars(args).items() if k in _OPTIONS and v is not None
        }
        env = _env_values()
        config_path = self._flags.get("config", env.get("config"))
        self._file = _parse_config_file(config_path) if config_path else {}
        self._env = env

    def __getitem__(self, key: str) -> Any:
        for layer in (self._flags, self._env, self._file):
            if key in layer:
                return layer[key]
        return _DEFAULTS[key]

    def resolved(self, keys: Sequence[str]) -> dict[str, Any]:
        return {k: self[k] for k in keys if k not in _EXECUTION_ONLY}


def _fmt_value(v: Any) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _header(subcommand: str, resolved: dict[str, Any]) -> list[str]:
    pairs = " ".join(f"{k}={_fmt_value(v)}" for k, v in resolved.items() if v is not None)
    return [f"# lcslab {subcommand}", f"# {pairs}"]


def _estimate_csv_row(label: str, est) -> str:
    return (
        f"{label},{est.value:.6f},{est.trials},"
        f"{est.hoeffding_ci[0]:.6f},{est.hoeffding_ci[1]:.6f},"
        f"{est.normal_ci[0]:.6f},{est.normal_ci[1]:.6f}"
    )


def _estimate_json(est) -> dict:
    return {
        "value": est.value,
        "trials": est.trials,
        "hoeff_lo": est.hoeffding_ci[0],
        "hoeff_hi": est.hoeffding_ci[1],
        "norm_lo": est.normal_ci[0],
        "norm_hi": est.normal_ci[1],
    }


def _parse_p_grid(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"p-grid range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise UsageError(f"invalid p-grid {text!r}") from None
        if step <= 0:
            raise UsageError("p-grid step must be positive")
        grid = []
        q = 0
        while True:
            p = start + q * step
            if p > stop + 1e-12:
                break
            grid.append(round(p, 12))
            q += 1
        return grid
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"invalid p-grid {text!r}") from None


def _progress_printer(every: int, label: str):
    def progress(done: int, total: int) -> None:
        if every > 0 and (done % every == 0 or done == total):
            print(f"{label}: trial {done}/{total}", file=sys.stderr, flush=True)

    return progress


def _experiment_config(r: _Resolved, k: int) -> ExperimentConfig:
    n = r["n"]
    d = n // 2 if n is not None else r["d"]
    return ExperimentConfig(
        k=k,
        d=d,
        beta=r["beta"],
        alpha=r["alpha"],
        trials=r["trials"],
        seed=r["seed"],
        gamma_a=r["gamma_a"],
        c_h=r["c_h"],
        block_mode=r["block_mode"],
        block_symbol=r["block_symbol"],
        objective=r["objective"],
    )


def _cmd_lcs(r: _Resolved, out) -> int:
    if r["x"] is None or r["y"] is None:
        raise UsageError("lcs requires --x and --y")
    k = r["k"]
    x_raw, y_raw = SymbolSequence.from_text(r["x"]), SymbolSequence.from_text(r["y"])
    k = max(k, x_raw.k, y_raw.k)
    x = SymbolSequence.from_text(r["x"], k)
    y = SymbolSequence.from_text(r["y"], k)
    from .lcs import lcs_length

    value = lcs_length(x, y)
    resolved = {"x": r["x"], "y": r["y"], "k": k}
    if r["format"] == "json":
        out.write(to_json_text({"config": resolved, "lcs_length": value}))
    else:
        out.write("\n".join(_header("lcs", resolved)) + "\n")
        out.write(f"{value}\n")
    return 0


_EST_COLUMNS = "label,value,trials,hoeff_lo,hoeff_hi,norm_lo,norm_hi"


def _cmd_gamma(r: _Resolved, out) -> int:
    n = r["n"] if r["n"] is not None else 1000
    resolved = {"k": r["k"], "n": n, "p": r["p"], "trials": r["trials"], "seed": r["seed"]}
    est = estimate_gamma(r["k"], n, r["p"], r["trials"], seed=r["seed"])
    if r["format"] == "json":
        out.write(to_json_text({"config": resolved, "gamma": _estimate_json(est)}))
    else:
        out.write("\n".join(_header("gamma", resolved)) + "\n")
        out.write(_EST_COLUMNS + "\n")
        out.write(_estimate_csv_row(f"{r['p']:.6f}", est) + "\n")
    return 0


def _cmd_curve(r: _Resolved, out) -> int:
    n = r["n"] if r["n"] is not None else 1000
    grid = _parse_p_grid(r["p_grid"])
    resolved = {
        "k": r["k"],
        "n": n,
        "p_grid": ",".join(f"{p:g}" for p in grid),
        "trials": r["trials"],
        "seed": r["seed"],
    }
    curve = estimate_curve(r["k"], n, grid, r["trials"], seed=r["seed"])
    sym = check_curve_symmetry(curve)
    conc = check_curve_concavity(curve)
    if r["format"] == "json":
        payload = {
            "config": resolved,
            "points": [
                dict(p=p, **_estimate_json(est)) for p, est in curve.grid
            ],
            "p_m_hat": curve.p_m_hat,
            "symmetry_ok": sym.ok,
            "concavity_ok": conc.ok,
        }
        out.write(to_json_text(payload))
    else:
        out.write("\n".join(_header("curve", resolved)) + "\n")
        out.write(curve_to_csv(curve))
        out.write(f"# p_m_hat={curve.p_m_hat:.6f}\n")
        out.write(f"# symmetry_ok={int(sym.ok)} concavity_ok={int(conc.ok)}\n")
    return 0


def _cmd_gaps(r: _Resolved, out, delta_only: bool = False) -> int:
    cfg = _experiment_config(r, r["k"])
    n = r["n"]
    ell = r["ell"]
    eff_n = n if n is not None else 2 * cfg.d
    eff_ell = ell if ell is not None else block_length_for(eff_n // 2, cfg.beta)
    name = "delta" if delta_only else "gaps"
    resolved = {
        "k": cfg.k,
        "n": eff_n,
        "ell": eff_ell,
        "trials": cfg.trials,
        "seed": cfg.seed.master,
        "block_mode": cfg.block_mode,
        "block_symbol": cfg.block_symbol,
        "objective": cfg.objective,
    }
    progress = _progress_printer(r["progress_every"], name)
    runner = run_delta_trials if delta_only else run_gap_trials
    run = runner(cfg, n_override=n, ell_override=ell, jobs=r["jobs"], progress=progress)
    if r["format"] == "json":
        payload = {
            "config": resolved,
            "summary": table_row_to_json(run.row),
            "trials": trial_records_to_json(run.records),
            "natural_resamples": run.natural_resamples,
        }
        out.write(to_json_text(payload))
        return 0
    out.write("\n".join(_header(name, resolved)) + "\n")
    if cfg.block_mode != "inserted":
        out.write(f"# natural_resamples={run.natural_resamples}\n")
    out.write(table_rows_to_csv([run.row]))
    if r["per_trial"]:
        out.write("# per-trial\n")
        out.write(trial_records_to_csv(run.records))
    return 0


def _cmd_events(r: _Resolved, out) -> int:
    event = r["event"]
    if event is not None and event.upper() not in EVENTS:
        raise UsageError(f"--event must be one of {EVENTS}, got {event!r}")
    cfg = _experiment_config(r, r["k"])
    progress = _progress_printer(r["progress_every"], "events")
    run = run_event_trials(cfg, jobs=r["jobs"], progress=progress)
    resolved = {
        "k": cfg.k,
        "d": cfg.d,
        "beta": cfg.beta,
        "alpha": cfg.alpha,
        "trials": cfg.trials,
        "seed": cfg.seed.master,
        "gamma_a": cfg.resolved_gamma_a(),
        "c_h": cfg.c_h,
        "ell": run.ell,
        "d_alpha": run.m_alpha,
    }
    wanted = [event.upper()] if event else list(EVENTS)
    if r["format"] == "json":
        payload = {
            "config": resolved,
            "events": {ev: _estimate_json(run.estimates[ev]) for ev in wanted},
            "trials": trial_records_to_json(run.records),
        }
        out.write(to_json_text(payload))
        return 0
    out.write("\n".join(_header("events", resolved)) + "\n")
    out.write("event,frequency,trials,hoeff_lo,hoeff_hi,norm_lo,norm_hi\n")
    for ev in wanted:
        out.write(_estimate_csv_row(ev, run.estimates[ev]) + "\n")
    if r["per_trial"]:
        out.write("# per-trial\n")
        out.write(trial_records_to_csv(run.records))
    return 0


def _cmd_condition3(r: _Resolved, out) -> int:
    n = r["n"] if r["n"] is not None else 1000
    resolved = {
        "k": r["k"],
        "n": n,
        "trials": r["trials"],
        "seed": r["seed"],
        "h_p": r["h_p"],
    }
    res = check_condition3(r["k"], n, r["trials"], seed=r["seed"], h_p=r["h_p"])
    if r["format"] == "json":
        payload = {
            "config": resolved,
            "verdict": res.verdict,
            "p_m_hat": res.p_m_hat,
            "margin": _estimate_json(res.margin),
            "derivative_term": _estimate_json(res.derivative_term),
            "gamma0": _estimate_json(res.gamma0),
        }
        out.write(to_json_text(payload))
        return 0
    out.write("\n".join(_header("condition3", resolved)) + "\n")
    out.write("verdict,p_m_hat," + _EST_COLUMNS.replace("label", "side") + "\n")
    out.write(f"{res.verdict},{res.p_m_hat:.6f}," + _estimate_csv_row("margin", res.margin) + "\n")
    out.write(f"{res.verdict},{res.p_m_hat:.6f}," + _estimate_csv_row("derivative", res.derivative_term) + "\n")
    out.write(f"{res.verdict},{res.p_m_hat:.6f}," + _estimate_csv_row("gamma0", res.gamma0) + "\n")
    return 0


def _cmd_oracle_check(r: _Resolved, out) -> int:
    report = run_oracle_suites(instances=r["trials"], seed=r["seed"])
    resolved = {"trials": r["trials"], "seed": r["seed"]}
    out.write("\n".join(_header("oracle-check", resolved)) + "\n")
    ok = True
    for suite in report:
        status = "PASS" if suite.mismatches == 0 else "FAIL"
        ok = ok and suite.mismatches == 0
        out.write(
            f"{status} {suite.name}: {suite.checked} instances, "
            f"{suite.mismatches} mismatches\n"
        )
    if not ok:
        raise RuntimeError("oracle check found mismatches")
    return 0


_COMMANDS = {
    "lcs": _cmd_lcs,
    "gamma": _cmd_gamma,
    "curve": _cmd_curve,
    "gaps": _cmd_gaps,
    "delta": lambda r, out: _cmd_gaps(r, out, delta_only=True),
    "events": _cmd_events,
    "condition3": _cmd_condition3,
    "oracle-check": _cmd_oracle_check,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcslab",
        description="LCS microstructure laboratory: exact kernels, gap-extremal "
        "alignments, and seeded Monte Carlo experiments.",
    )
    parser.add_argument("--version", action="version", version=f"lcslab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    help_text = {
        "lcs": "LCS length of two explicit strings",
        "gamma": "Monte Carlo estimate of the normalized mean LCS length",
        "curve": "mean-LCS curve over a p grid, with symmetry/concavity checks",
        "gaps": "extremal gap counts of a block over seeded trials",
        "delta": "LCS gain from resampling the block, over seeded trials",
        "events": "frequencies of the block-alignment events E, K, G, H",
        "condition3": "derivative-versus-margin verdict at the curve maximum",
        "oracle-check": "cross-check fast kernels against the small-instance oracles",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=help_text[name])
        for key, parse in _OPTIONS.items():
            flag = "--" + key.replace("_", "-")
            if key == "per_trial":
                p.add_argument(flag, dest=key, action="store_const", const=True, default=None)
            else:
                p.add_argument(flag, dest=key, type=parse, default=None)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        resolved = _Resolved(args)
        return _COMMANDS[args.subcommand](resolved, out)
    except (UsageError, InputError) as exc:
        print(f"lcslab: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"lcslab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
