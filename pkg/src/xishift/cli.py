"""Command-line front end.

Subcommands cover every verification the library offers; outputs are CSV or
JSON files that are byte-identical across repeated runs.  Exit codes:
0 all tolerances met, 2 a tolerance gate failed, 3 config or parse error,
4 numeric error.

Config files are flat JSON with exactly these keys:

    {"coefficients": [1.0], "shifts": [0.0], "z_re": 0.0, "z_im": 0.0,
     "tail_bound": 0.0}

tail_bound is optional and defaults to 0.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import integral, region, theta, zeroscan
from . import shifts as shifts_mod
from .errors import ConfigError, ParseError, XishiftError
from .settings import DEFAULT_SETTINGS, EvalSettings

__all__ = ["RunManifest", "parse_config", "run", "main"]

SUBCOMMANDS = (
    "eval", "scan", "theta-check", "integral-check", "region", "moments", "limits",
)

EXIT_OK = 0
EXIT_TOLERANCE = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4

_CONFIG_KEYS = {"coefficients", "shifts", "z_re", "z_im", "tail_bound"}
_DECAY_DELTAS = (0.2, 0.1, 0.05, 0.02, 0.01)


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    output_path: str
    config_path: str | None = None
    output_format: str = "csv"
    workers: int = 1
    settings: EvalSettings = field(default_factory=lambda: DEFAULT_SETTINGS)
    t_min: float | None = None
    t_max: float | None = None
    step: float | None = None
    tol: float | None = None
    m_max: int = 1
    alpha: float = 0.2

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output_format must be csv or json, got {self.output_format!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


def parse_config(path: str) -> shifts_mod.ShiftConfig:
    """Read and validate a shift configuration from flat JSON."""
    p = Path(path)
    if not p.is_file():
        raise ParseError(f"config file not found: {path}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
    for key in ("coefficients", "shifts", "z_re", "z_im"):
        if key not in raw:
            raise ParseError(f"{path}: missing required key '{key}'")
    for key in ("coefficients", "shifts"):
        if not isinstance(raw[key], list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw[key]
        ):
            raise ParseError(f"{path}: '{key}' must be an array of reals")
    for key in ("z_re", "z_im"):
        if not isinstance(raw[key], (int, float)) or isinstance(raw[key], bool):
            raise ParseError(f"{path}: '{key}' must be a real number")
    tail = raw.get("tail_bound", 0.0)
    if not isinstance(tail, (int, float)) or isinstance(tail, bool):
        raise ParseError(f"{path}: 'tail_bound' must be a real number")
    return shifts_mod.make_config(
        raw["coefficients"], raw["shifts"], complex(raw["z_re"], raw["z_im"]), tail
    )


# ---------------------------------------------------------------------------
# Subcommand implementations: each returns (fieldnames, rows, passed, params)
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _cmd_eval(man: RunManifest, cfg: shifts_mod.ShiftConfig):
    t_lo = 0.0 if man.t_min is None else man.t_min
    t_hi = 40.0 if man.t_max is None else man.t_max
    step = 0.5 if man.step is None else man.step
    ts = zeroscan._grid(t_lo, t_hi, step)
    re, im, err = shifts_mod.fz_line_vec(ts, cfg, man.settings)
    rows = [
        {"t": float(t), "f": float(v), "im_residual": float(r), "abs_err_est": float(e)}
        for t, v, r, e in zip(ts, re, im, err)
    ]
    passed = bool(np.all(np.abs(im) <= 1e-9 * (1.0 + np.hypot(re, im))))
    return ["t", "f", "im_residual", "abs_err_est"], rows, passed, {
        "t_min": t_lo, "t_max": t_hi, "step": step,
    }


def _cmd_scan(man: RunManifest, cfg: shifts_mod.ShiftConfig):
    t_lo = 10.0 if man.t_min is None else man.t_min
    t_hi = 30.0 if man.t_max is None else man.t_max
    step = 0.02 if man.step is None else man.step
    tol = 1e-8 if man.tol is None else man.tol
    report = zeroscan.scan_fz(cfg, t_lo, t_hi, step, tol, man.workers, man.settings)
    rows = [
        {
            "t_lo": br.t_lo, "t_hi": br.t_hi, "t_zero": hit.t,
            "f_residual": hit.residual, "iterations": hit.iterations,
        }
        for br, hit in zip(report.brackets, report.zeros)
    ]
    # workers is execution metadata, not result data: the report is identical
    # for any worker count, so the output must not mention it
    params = {
        "t_min": t_lo, "t_max": t_hi, "step": step, "tol": tol,
        "config_digest": report.config_digest,
        "settings": {
            "rel_tol": man.settings.rel_tol,
            "max_terms": man.settings.max_terms,
            "em_terms": man.settings.em_terms,
            "quad_abs_tol": man.settings.quad_abs_tol,
        },
    }
    return ["t_lo", "t_hi", "t_zero", "f_residual", "iterations"], rows, True, params


_THETA_A_SWEEP = (1.0, 0.8, 1.5, math.sqrt(2.0),
                  cmath.exp(0.2j), cmath.exp(0.4j), cmath.exp(-0.3j), cmath.exp(0.6j))
_THETA_Z_SWEEP = (0.0, 0.3, 1.0, 0.4 + 0.1j, 0.5 - 0.2j, 0.2 + 0.3j, 1.2 - 0.4j)
_THETA_X_SWEEP = (0.5, 2.0, 1.5, 0.9 + 0.3j, 0.8 + 0.1j, 1.1 - 0.2j)


def _cmd_theta_check(man: RunManifest, _cfg):
    gate_general = 1e-9 if man.tol is None else man.tol
    rows = []
    worst_jacobi = 0.0
    for i in range(50):
        x = 10.0 ** (-1.0 + 2.0 * i / 49.0)
        r = theta.jacobi_residual(x, man.settings)
        worst_jacobi = max(worst_jacobi, r)
        rows.append({"check": "jacobi", "p_re": x, "p_im": 0.0,
                     "z_re": 0.0, "z_im": 0.0, "residual": r})
    worst_general = 0.0
    for a in _THETA_A_SWEEP:
        for z in _THETA_Z_SWEEP:
            r = theta.general_theta_residual(a, z, man.settings)
            worst_general = max(worst_general, r)
            a_c = complex(a)
            rows.append({"check": "general", "p_re": a_c.real, "p_im": a_c.imag,
                         "z_re": complex(z).real, "z_im": complex(z).imag, "residual": r})
    for x in _THETA_X_SWEEP:
        for z in _THETA_Z_SWEEP:
            r = theta.psi_xz_transform_residual(x, z, man.settings)
            worst_general = max(worst_general, r)
            x_c = complex(x)
            rows.append({"check": "xz_transform", "p_re": x_c.real, "p_im": x_c.imag,
                         "z_re": complex(z).real, "z_im": complex(z).imag, "residual": r})
    passed = worst_jacobi < 1e-12 and worst_general < gate_general
    params = {"gate_jacobi": 1e-12, "gate_general": gate_general,
              "worst_jacobi": worst_jacobi, "worst_general": worst_general}
    return ["check", "p_re", "p_im", "z_re", "z_im", "residual"], rows, passed, params


_INTEGRAL_A = (1.0, 1.2, cmath.exp(0.2j))
_INTEGRAL_Z = (0.0, 0.4 + 0.1j, 0.5 - 0.2j)


def _cmd_integral_check(man: RunManifest, _cfg):
    gate = 1e-6 if man.tol is None else man.tol
    rows = []
    worst = 0.0
    for a in _INTEGRAL_A:
        for z in _INTEGRAL_Z:
            out = integral.xi_integral(a, z, man.settings)
            side_a = theta.series_side(a, z, man.settings).value
            side_b = theta.series_side(1.0 / a, 1j * z, man.settings).value
            resid = max(abs(out.value - side_a), abs(out.value - side_b))
            worst = max(worst, resid)
            rows.append({
                "a_re": complex(a).real, "a_im": complex(a).imag,
                "z_re": complex(z).real, "z_im": complex(z).imag,
                "integral_re": out.value.real, "integral_im": out.value.imag,
                "side_a_re": side_a.real, "side_a_im": side_a.imag,
                "side_b_re": side_b.real, "side_b_im": side_b.imag,
                "residual": resid,
            })
    params = {"gate": gate, "worst": worst}
    fields = ["a_re", "a_im", "z_re", "z_im", "integral_re", "integral_im",
              "side_a_re", "side_a_im", "side_b_re", "side_b_im", "residual"]
    return fields, rows, worst < gate, params


def _cmd_region(man: RunManifest, _cfg):
    lo = -3.0 if man.t_min is None else man.t_min
    hi = 3.0 if man.t_max is None else man.t_max
    step = 0.05 if man.step is None else man.step
    grid = region.region_grid(lo, hi, lo, hi, step)
    rows = [
        {"x": x, "y": y, "inside": inside, "label": label, "margin": margin}
        for x, y, inside, label, margin in region.grid_csv_rows(grid)
    ]
    params = {"x_min": lo, "x_max": hi, "y_min": lo, "y_max": hi, "step": step}
    return ["x", "y", "inside", "label", "margin"], rows, True, params


_SERIES_GATES = {0: 1e-5, 1: 1e-4, 2: 1e-3}
_LIMIT_GATES = {0: 5e-3, 1: 2e-2}


def _cmd_moments(man: RunManifest, cfg: shifts_mod.ShiftConfig):
    rows = []
    passed = True
    st = man.settings
    series_settings = EvalSettings(
        rel_tol=st.rel_tol, max_terms=st.max_terms, em_terms=st.em_terms,
        quad_abs_tol=min(st.quad_abs_tol, 1e-9),
    )
    for m in range(min(man.m_max, 2) + 1):
        numeric = shifts_mod.moment_numeric(m, man.alpha, cfg, series_settings)
        assembled = shifts_mod.moment_series_rhs(m, man.alpha, cfg, series_settings)
        diff = abs(numeric - assembled)
        gate = _SERIES_GATES[m]
        passed &= diff < gate
        rows.append({"kind": "series", "m": m, "alpha": man.alpha,
                     "numeric": numeric, "reference": assembled,
                     "discrepancy": diff, "gate": gate})
        if m in _LIMIT_GATES:
            rel = shifts_mod.moment_limit_check(m, cfg, st)
            closed = shifts_mod.moment_closed_form(m, cfg)
            gate = _LIMIT_GATES[m]
            passed &= rel < gate
            rows.append({"kind": "limit", "m": m, "alpha": math.pi / 4.0,
                         "numeric": rel, "reference": closed,
                         "discrepancy": rel, "gate": gate})
    fields = ["kind", "m", "alpha", "numeric", "reference", "discrepancy", "gate"]
    return fields, rows, passed, {"alpha": man.alpha, "m_max": man.m_max}


def _cmd_limits(man: RunManifest, cfg: shifts_mod.ShiftConfig):
    rows = []
    passed = True
    z = cfg.z
    for scale, name in ((4.0, "quarter"), (1.0, "unit")):
        seq = theta.axis_decay_sequence(z, list(_DECAY_DELTAS), man.settings, scale=scale)
        ok = all(b < a for a, b in zip(seq, seq[1:])) and seq[-1] < 1e-8
        passed &= ok
        for d, v in zip(_DECAY_DELTAS, seq):
            rows.append({"check": f"axis_decay_{name}", "shift": 0.0,
                         "order": 0, "param": d, "value": v,
                         "target": 1e-8, "ok": int(ok)})
    for lam in cfg.shifts:
        for m in (0, 1):
            lim = theta.psi1_limit_value(z, lam, 2 * m)
            res = []
            for k in (1, 2, 3):
                alpha = math.pi / 4.0 - 10.0 ** -k
                d = theta.psi1_alpha_derivative(alpha, z, lam, 2 * m, man.settings)
                res.append(abs(d - lim))
            ok = res[0] > res[1] > res[2] and res[2] < 1e-2
            passed &= ok
            for k, v in zip((1, 2, 3), res):
                rows.append({"check": "psi1_limit", "shift": lam, "order": 2 * m,
                             "param": float(k), "value": v, "target": 1e-2,
                             "ok": int(ok)})
    fields = ["check", "shift", "order", "param", "value", "target", "ok"]
    return fields, rows, passed, {"deltas": list(_DECAY_DELTAS)}


_NEEDS_CONFIG = {"eval", "scan", "moments", "limits"}
_DISPATCH = {
    "eval": _cmd_eval,
    "scan": _cmd_scan,
    "theta-check": _cmd_theta_check,
    "integral-check": _cmd_integral_check,
    "region": _cmd_region,
    "moments": _cmd_moments,
    "limits": _cmd_limits,
}


def _write_csv(path: str, fieldnames: list[str], rows: list[dict]) -> None:
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(str(_fmt(row[k])) for k in fieldnames))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode())


def _write_json(path: str, man: RunManifest, fieldnames, rows, passed, params) -> None:
    payload = {
        "schema_version": 1,
        "subcommand": man.subcommand,
        "params": params,
        "passed": passed,
        "fields": fieldnames,
        "rows": rows,
    }
    Path(path).write_bytes((json.dumps(payload, sort_keys=True, indent=2) + "\n").encode())


def run(manifest: RunManifest) -> int:
    """Execute one subcommand; returns the exit code of the contract."""
    try:
        cfg = None
        if manifest.subcommand in _NEEDS_CONFIG:
            if manifest.config_path is None:
                raise ConfigError(f"subcommand {manifest.subcommand!r} requires --config")
            cfg = parse_config(manifest.config_path)
        fieldnames, rows, passed, params = _DISPATCH[manifest.subcommand](manifest, cfg)
    except (ParseError, ConfigError) as exc:
        _emit_error(exc)
        return EXIT_CONFIG
    except XishiftError as exc:
        _emit_error(exc)
        return EXIT_NUMERIC
    if manifest.output_format == "csv":
        _write_csv(manifest.output_path, fieldnames, rows)
    else:
        _write_json(manifest.output_path, manifest, fieldnames, rows, passed, params)
    return EXIT_OK if passed else EXIT_TOLERANCE


def _emit_error(exc: XishiftError) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xishift",
        description="Completed-zeta / theta-transformation checks and "
                    "critical-line zero scans for shifted Xi-type combinations.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", dest="config_path", default=None,
                       help="path to a shift-config JSON file")
        p.add_argument("--out", dest="output_path", required=True)
        p.add_argument("--format", dest="output_format", choices=("csv", "json"),
                       default="csv")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--t-min", dest="t_min", type=float, default=None)
        p.add_argument("--t-max", dest="t_max", type=float, default=None)
        p.add_argument("--step", type=float, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--m", dest="m_max", type=int, default=1)
        p.add_argument("--alpha", type=float, default=0.2)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = RunManifest(
            subcommand=args.subcommand,
            output_path=args.output_path,
            config_path=args.config_path,
            output_format=args.output_format,
            workers=args.workers,
            t_min=args.t_min,
            t_max=args.t_max,
            step=args.step,
            tol=args.tol,
            m_max=args.m_max,
            alpha=args.alpha,
        )
    except ConfigError as exc:
        _emit_error(exc)
        return EXIT_CONFIG
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
