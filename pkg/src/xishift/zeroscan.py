"""Sign-change scanning and bisection refinement on the critical line.

A scan walks a fixed grid t_i = t_lo + i*step, records strict sign changes
between consecutive nodes as brackets, and reports zeros landing exactly on
nodes (|f| < 1e-13) as width-zero brackets.  scan_fz partitions the grid into
worker chunks overlapping by one node, so no boundary sign change can be
missed and the merged report is identical for any worker count: every node's
value depends only on its own abscissa, never on chunk mates.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, EvaluationError, MaxIterError, SymmetryError, XishiftError
from .settings import DEFAULT_SETTINGS, EvalSettings
from .shifts import ShiftConfig, fz_line_vec, validate_config

__all__ = ["ZeroBracket", "ZeroHit", "ScanReport", "scan", "bisect", "scan_fz",
           "report_csv_bytes", "report_json_bytes"]

ON_NODE_EPS = 1e-13


@dataclass(frozen=True)
class ZeroBracket:
    """A sign-change interval; width zero marks a zero sitting on a grid node."""

    t_lo: float
    t_hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        on_node = self.t_lo == self.t_hi and self.f_lo == self.f_hi
        proper = self.t_lo < self.t_hi and self.f_lo * self.f_hi < 0
        if not (on_node or proper):
            raise ConfigError(f"invalid bracket {self!r}")

    @property
    def is_on_node(self) -> bool:
        return self.t_lo == self.t_hi


@dataclass(frozen=True)
class ZeroHit:
    t: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class ScanReport:
    brackets: tuple[ZeroBracket, ...]
    zeros: tuple[ZeroHit, ...]
    grid_step: float
    t_range: tuple[float, float]
    config_digest: str


def _grid(t_lo: float, t_hi: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ConfigError(f"step must be positive, got {step}")
    if not t_lo < t_hi:
        raise ConfigError(f"need t_lo < t_hi, got [{t_lo}, {t_hi}]")
    n = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    ts = t_lo + step * np.arange(n)
    if ts[-1] < t_hi - 1e-9 * step:
        ts = np.append(ts, t_hi)
    return ts


def _brackets_from_values(
    ts: np.ndarray, fs: np.ndarray, errs: np.ndarray | None = None
) -> list[ZeroBracket]:
    """Sign-change extraction.

    A node counts as an on-node zero when |f| is indistinguishable from zero:
    below the per-node error bound when one is available, else below the
    absolute 1e-13 floor.  An absolute floor alone would misclassify genuine
    values of a function that itself decays below 1e-13.
    """
    if errs is None:
        on_node = np.abs(fs) < ON_NODE_EPS
    else:
        on_node = np.abs(fs) <= np.maximum(4.0 * errs, 5e-300)
    out: list[ZeroBracket] = []
    for i in range(len(ts)):
        if on_node[i]:
            out.append(ZeroBracket(float(ts[i]), float(ts[i]), float(fs[i]), float(fs[i])))
    for i in range(len(ts) - 1):
        if on_node[i] or on_node[i + 1]:
            continue
        if fs[i] * fs[i + 1] < 0:
            out.append(ZeroBracket(float(ts[i]), float(ts[i + 1]), float(fs[i]), float(fs[i + 1])))
    return out


def scan(
    t_lo: float, t_hi: float, step: float, f: Callable[[float], float]
) -> list[ZeroBracket]:
    """All strict sign changes of f on the grid, plus on-node zeros."""
    ts = _grid(t_lo, t_hi, step)
    fs = np.empty(len(ts))
    for i, t in enumerate(ts):
        try:
            v = f(float(t))
        except XishiftError as exc:
            raise EvaluationError(f"evaluator failed at t={float(t)!r}: {exc}") from exc
        if not math.isfinite(v):
            raise EvaluationError(f"evaluator returned {v!r} at t={float(t)!r}")
        fs[i] = v
    return _brackets_from_values(ts, fs)


def bisect(
    bracket: ZeroBracket, f: Callable[[float], float], tol: float
) -> tuple[float, float, int]:
    """Refine a bracket to width <= tol; returns (midpoint, |f(midpoint)|, iterations).

    The residual is reported, not required to be small: a flat function can
    hold a wide bracket to a tiny residual or vice versa.
    """
    if tol <= 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    if bracket.is_on_node:
        return bracket.t_lo, abs(bracket.f_lo), 0
    lo, hi, f_lo = bracket.t_lo, bracket.t_hi, bracket.f_lo
    for it in range(1, 201):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid, 0.0, it
        if (fm < 0) == (f_lo < 0):
            lo, f_lo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol:
            t = 0.5 * (lo + hi)
            return t, abs(f(t)), it
    raise MaxIterError(f"bisection did not reach width {tol:g} in 200 iterations")


def _chunk_bounds(n_nodes: int, workers: int) -> list[tuple[int, int]]:
    """Index ranges [a, b] inclusive, consecutive chunks sharing one node."""
    workers = min(workers, max(1, n_nodes - 1))
    cuts = [round(j * (n_nodes - 1) / workers) for j in range(workers + 1)]
    return [(cuts[j], cuts[j + 1]) for j in range(workers) if cuts[j] < cuts[j + 1]]


def scan_fz(
    cfg: ShiftConfig,
    t_lo: float,
    t_hi: float,
    step: float,
    tol: float,
    workers: int = 1,
    settings: EvalSettings = DEFAULT_SETTINGS,
) -> ScanReport:
    """Scan F_z(1/2+it) for sign changes and refine each bracket by bisection.

    The report is identical for any worker count: chunks overlap by exactly
    one grid node and every node value is a function of its own t alone.
    """
    validate_config(cfg)
    if not (isinstance(workers, int) and workers >= 1):
        raise ConfigError(f"workers must be a positive integer, got {workers}")
    ts = _grid(t_lo, t_hi, step)

    def eval_nodes(tarr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        re, im, err = fz_line_vec(tarr, cfg, settings)
        bound = 1e-9 * (1.0 + np.hypot(re, im))
        if (np.abs(im) > bound).any():
            worst = int(np.argmax(np.abs(im) - bound))
            raise SymmetryError(
                f"imaginary residue {im[worst]:.3e} at t={tarr[worst]!r} "
                f"exceeds its reality bound"
            )
        return re, err

    bounds = _chunk_bounds(len(ts), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunk_vals = list(pool.map(lambda ab: eval_nodes(ts[ab[0]:ab[1] + 1]), bounds))
    brackets: list[ZeroBracket] = []
    for (a, _b), (vals, errs) in zip(bounds, chunk_vals):
        brackets.extend(_brackets_from_values(ts[a:a + len(vals)], vals, errs))
    uniq = sorted(set(brackets), key=lambda b: (b.t_lo, b.t_hi))

    def point(t: float) -> float:
        return float(eval_nodes(np.array([t]))[0][0])

    zeros = []
    for br in uniq:
        t0, residual, iters = bisect(br, point, tol)
        zeros.append(ZeroHit(t0, residual, iters))
    zeros.sort(key=lambda h: h.t)
    return ScanReport(
        brackets=tuple(uniq),
        zeros=tuple(zeros),
        grid_step=step,
        t_range=(float(t_lo), float(t_hi)),
        config_digest=_digest(cfg, settings, t_lo, t_hi, step, tol),
    )


def _digest(
    cfg: ShiftConfig, settings: EvalSettings, t_lo: float, t_hi: float,
    step: float, tol: float
) -> str:
    payload = {
        "coefficients": list(cfg.coefficients),
        "shifts": list(cfg.shifts),
        "z_re": cfg.z.real,
        "z_im": cfg.z.imag,
        "tail_bound": cfg.tail_bound,
        "settings": {
            "rel_tol": settings.rel_tol,
            "max_terms": settings.max_terms,
            "em_terms": settings.em_terms,
            "quad_abs_tol": settings.quad_abs_tol,
        },
        "t_lo": t_lo,
        "t_hi": t_hi,
        "step": step,
        "tol": tol,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def report_csv_bytes(report: ScanReport) -> bytes:
    """CSV with one row per refined bracket: t_lo, t_hi, t_zero, f_residual, iterations.

    Brackets are disjoint and ascending, so they pair 1:1 with the zeros.
    """
    lines = ["t_lo,t_hi,t_zero,f_residual,iterations"]
    for br, hit in zip(report.brackets, report.zeros):
        lines.append(
            f"{br.t_lo!r},{br.t_hi!r},{hit.t!r},{hit.residual!r},{hit.iterations}"
        )
    return ("\n".join(lines) + "\n").encode()


def report_json_bytes(report: ScanReport, settings: EvalSettings = DEFAULT_SETTINGS) -> bytes:
    payload = {
        "schema_version": 1,
        "kind": "scan_report",
        "config_digest": report.config_digest,
        "grid_step": report.grid_step,
        "range": list(report.t_range),
        "settings": {
            "rel_tol": settings.rel_tol,
            "max_terms": settings.max_terms,
            "em_terms": settings.em_terms,
            "quad_abs_tol": settings.quad_abs_tol,
        },
        "brackets": [
            {"t_lo": b.t_lo, "t_hi": b.t_hi, "f_lo": b.f_lo, "f_hi": b.f_hi}
            for b in report.brackets
        ],
        "zeros": [
            {"t": h.t, "residual": h.residual, "iterations": h.iterations}
            for h in report.zeros
        ],
    }
    return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode()
