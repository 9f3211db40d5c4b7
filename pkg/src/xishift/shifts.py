"""The vertically shifted combination F_z and its moment bookkeeping.

For a finite list of nonzero weights c_j and distinct real shifts lam_j,

    F_z(s) = sum_j c_j eta(s + i lam_j) { 1F1((1-(s+i lam_j))/2; 1/2; z^2/4)
                                        + 1F1((1-(conj(s)-i lam_j))/2; 1/2; conj(z)^2/4) }

is real on the critical line: there the second confluent factor is the
conjugate of the first and eta reduces to the real function rho.  The moment
side computes both routes of the limit identity

    lim_{alpha->pi/4} Int t^(2m) e^(alpha t) F_z(1/2+it)/2 dt
        = -4 pi w_z sum_j c_j e^(-pi lam_j/4) r_j^(2m) cos(pi/8 + beta_z + 2m theta_j)

with r_j e^(i theta_j) = i/2 - lam_j and (w_z, beta_z) the polar form of
1 + e^(z^2/8) sinh(z^2/8).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DegenerateError, PoleError, SymmetryError
from .integral import moment_integral
from .region import classify_inequality
from .settings import DEFAULT_SETTINGS, EvalSettings, ValueWithError, require_finite
from .specfun import eta_completed, eta_line_vec, hyp1f1, hyp1f1_vec
from .theta import psi1_alpha_derivative

__all__ = [
    "ShiftConfig",
    "PolarShift",
    "MomentParams",
    "validate_config",
    "make_config",
    "f_z",
    "f_z_critical",
    "fz_line_vec",
    "polar_shift",
    "moment_params",
    "moment_closed_form",
    "moment_numeric",
    "moment_series_rhs",
    "moment_limit_check",
]


@dataclass(frozen=True)
class ShiftConfig:
    """Weights c_j, shifts lam_j, the z parameter, and a bound on the dropped
    tail of an originally infinite weight sequence."""

    coefficients: tuple[float, ...]
    shifts: tuple[float, ...]
    z: complex
    tail_bound: float = 0.0


@dataclass(frozen=True)
class PolarShift:
    """Polar form r e^(i theta) = i/2 - lam; theta always lies in (0, pi)."""

    r: float
    theta: float


@dataclass(frozen=True)
class MomentParams:
    """u = 1 + Re(e^(z^2/8) sinh(z^2/8)), v its imaginary part, w = |u + iv|,
    beta = atan2(v, u) normalized to [0, 2pi)."""

    u: float
    v: float
    w: float
    beta: float


def validate_config(cfg: ShiftConfig) -> ShiftConfig:
    """Check the standing hypotheses; returns cfg unchanged if they hold."""
    cs, lams = cfg.coefficients, cfg.shifts
    if len(cs) == 0:
        raise ConfigError("at least one coefficient is required")
    if len(cs) != len(lams):
        raise ConfigError(
            f"{len(cs)} coefficients but {len(lams)} shifts; lengths must match"
        )
    for c in cs:
        if not math.isfinite(c) or c == 0.0:
            raise ConfigError(f"coefficients must be finite and nonzero, got {c}")
    for lam in lams:
        if not math.isfinite(lam):
            raise ConfigError(f"shifts must be finite, got {lam}")
    if len(set(lams)) != len(lams):
        raise ConfigError(f"shifts must be pairwise distinct, got {lams}")
    if not (math.isfinite(cfg.tail_bound) and cfg.tail_bound >= 0.0):
        raise ConfigError(f"tail_bound must be finite and >= 0, got {cfg.tail_bound}")
    z = complex(cfg.z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(f"z must be finite, got {z!r}")
    verdict = classify_inequality(z)
    if not verdict.inside:
        raise ConfigError(
            f"z = {z!r} is {verdict.component_label} of the admissible region "
            f"(margin {verdict.margin:.3e})"
        )
    max_abs = max(abs(lam) for lam in lams)
    if sum(1 for lam in lams if abs(lam) == max_abs) != 1:
        raise ConfigError(
            f"the maximal |shift| {max_abs:g} must be attained by exactly one entry"
        )
    return cfg


def make_config(
    coefficients, shifts, z: complex, tail_bound: float = 0.0
) -> ShiftConfig:
    """Build and validate a ShiftConfig from plain sequences."""
    return validate_config(
        ShiftConfig(tuple(float(c) for c in coefficients),
                    tuple(float(x) for x in shifts),
                    complex(z), float(tail_bound))
    )


def dominant_index(cfg: ShiftConfig) -> int:
    """Index of the unique maximal |shift|."""
    return max(range(len(cfg.shifts)), key=lambda j: abs(cfg.shifts[j]))


# ---------------------------------------------------------------------------
# F_z itself
# ---------------------------------------------------------------------------

def f_z(
    s: complex, cfg: ShiftConfig, settings: EvalSettings = DEFAULT_SETTINGS
) -> ValueWithError:
    """The finite weighted sum defining F_z at a general complex point."""
    s = complex(s)
    z = complex(cfg.z)
    w_a = z * z / 4.0
    w_b = w_a.conjugate()
    total = 0.0 + 0.0j
    err = 0.0
    max_term = 0.0
    for c, lam in zip(cfg.coefficients, cfg.shifts):
        s_j = s + 1j * lam
        if s_j == 0 or s_j == 1:
            raise PoleError(f"shifted argument s + i*{lam:g} hits a pole of eta")
        ev = eta_completed(s_j, settings)
        f_a = hyp1f1((1.0 - s_j) / 2.0, 0.5, w_a, settings)
        f_b = hyp1f1((1.0 - (s.conjugate() - 1j * lam)) / 2.0, 0.5, w_b, settings)
        bracket = f_a.value + f_b.value
        total += c * ev.value * bracket
        err += abs(c) * (
            ev.abs_err_est * abs(bracket)
            + abs(ev.value) * (f_a.abs_err_est + f_b.abs_err_est)
        )
        max_term = max(max_term, abs(ev.value) * abs(bracket))
    err += cfg.tail_bound * max_term
    require_finite(total, "f_z")
    return ValueWithError(total, err)


def fz_line_vec(
    t: np.ndarray, cfg: ShiftConfig, settings: EvalSettings = DEFAULT_SETTINGS
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """F_z(1/2 + i t) on a real grid: (real part, imaginary residue, error).

    On the critical line the bracket equals twice the real part of the first
    confluent factor, so the imaginary residue comes from eta alone and
    measures how well the kernel preserves the reality symmetry.
    """
    t = np.asarray(t, dtype=float)
    z = complex(cfg.z)
    w_a = z * z / 4.0
    total = np.zeros(t.shape, dtype=complex)
    err = np.zeros(t.shape, dtype=float)
    max_term = np.zeros(t.shape, dtype=float)
    for c, lam in zip(cfg.coefficients, cfg.shifts):
        tau = t + lam
        eta_vals, eta_errs = eta_line_vec(tau, settings)
        f_a, f_errs = hyp1f1_vec((1.0 - 2j * tau) / 4.0, 0.5, w_a, settings)
        bracket = 2.0 * f_a.real
        total += c * eta_vals * bracket
        err += abs(c) * (eta_errs * np.abs(bracket) + np.abs(eta_vals) * 2.0 * f_errs)
        np.maximum(max_term, np.abs(eta_vals) * np.abs(bracket), out=max_term)
    err += cfg.tail_bound * max_term
    return total.real, total.imag, err


def f_z_critical(
    t: float, cfg: ShiftConfig, settings: EvalSettings = DEFAULT_SETTINGS
) -> float:
    """F_z(1/2 + i t) as a real number; SymmetryError if reality fails."""
    re, im, _ = fz_line_vec(np.array([float(t)]), cfg, settings)
    value, residue = float(re[0]), float(im[0])
    bound = 1e-9 * (1.0 + math.hypot(value, residue))
    if abs(residue) > bound:
        raise SymmetryError(
            f"f_z_critical(t={t}): imaginary residue {residue:.3e} exceeds {bound:.3e}"
        )
    return value


# ---------------------------------------------------------------------------
# Polar / moment bookkeeping
# ---------------------------------------------------------------------------

def polar_shift(lam: float) -> PolarShift:
    """r e^(i theta) = i/2 - lam with r = sqrt(1/4 + lam^2), theta in (0, pi)."""
    return PolarShift(math.hypot(0.5, lam), math.atan2(0.5, -lam))


def moment_params(z: complex) -> MomentParams:
    """The four reals (u, v, w, beta) entering the closed-form moments.

    beta uses atan2 rather than arccos so that w e^(i beta) = u + i v exactly;
    the arccos alone would lose the sign of v.
    """
    z = complex(z)
    sz = cmath.exp(z * z / 8.0) * cmath.sinh(z * z / 8.0)
    u = 1.0 + sz.real
    v = sz.imag
    w = math.hypot(u, v)
    if w < 1e-14:
        raise DegenerateError(f"moment modulus w degenerates at z = {z!r}")
    beta = math.atan2(v, u) % (2.0 * math.pi)
    if beta >= 2.0 * math.pi:  # a tiny negative atan2 can round up to 2 pi
        beta = 0.0
    return MomentParams(u, v, w, beta)


def moment_closed_form(m: int, cfg: ShiftConfig) -> float:
    """-4 pi w_z sum_j c_j e^(-pi lam_j/4) r_j^(2m) cos(pi/8 + beta_z + 2m theta_j)."""
    if m < 0:
        raise ConfigError(f"moment order must be >= 0, got {m}")
    params = moment_params(cfg.z)
    total = 0.0
    for c, lam in zip(cfg.coefficients, cfg.shifts):
        ps = polar_shift(lam)
        total += (
            c
            * math.exp(-math.pi * lam / 4.0)
            * ps.r ** (2 * m)
            * math.cos(math.pi / 8.0 + params.beta + 2 * m * ps.theta)
        )
    return -4.0 * math.pi * params.w * total


def moment_numeric(
    m: int, alpha: float, cfg: ShiftConfig, settings: EvalSettings = DEFAULT_SETTINGS
) -> float:
    """Weighted sum over shifts of the numeric moment integrals."""
    return sum(
        c * moment_integral(m, alpha, lam, cfg.z, settings)
        for c, lam in zip(cfg.coefficients, cfg.shifts)
    )


def moment_series_rhs(
    m: int, alpha: float, cfg: ShiftConfig, settings: EvalSettings = DEFAULT_SETTINGS
) -> float:
    """The assembled analytic side of the moment identity at finite alpha:

        sum_j c_j [ -4 pi e^(-alpha lam_j) r_j^(2m) cos(alpha/2 + 2m theta_j)
                    + 4 pi Re( e^(z^2/8) d^(2m)/d alpha^(2m) psi1 ) ].
    """
    z = complex(cfg.z)
    ez8 = cmath.exp(z * z / 8.0)
    total = 0.0
    for c, lam in zip(cfg.coefficients, cfg.shifts):
        ps = polar_shift(lam)
        deriv = psi1_alpha_derivative(alpha, z, lam, 2 * m, settings)
        total += c * (
            -4.0
            * math.pi
            * math.exp(-alpha * lam)
            * ps.r ** (2 * m)
            * math.cos(alpha / 2.0 + 2 * m * ps.theta)
            + 4.0 * math.pi * (ez8 * deriv).real
        )
    return total


_LIMIT_KS = (1.9, 2.0)


def moment_limit_check(
    m: int, cfg: ShiftConfig, settings: EvalSettings = DEFAULT_SETTINGS
) -> float:
    """Relative discrepancy between the extrapolated numeric moment limit and
    the closed form.

    The limit is approached along alpha_k = pi/4 - 10^(-k) with k in
    {1.9, 2.0} and linear extrapolation in 10^(-k).  Samples farther from
    the boundary sit inside a superexponential transient (it decays like
    exp(-c/(pi/4 - alpha))) and would poison the extrapolation, while
    k > 2 violates the quadrature's alpha margin; both samples therefore
    live on [1.9, 2].  The quadrature tolerance is floored at the rounding
    floor of these heavily cancelling oscillatory integrals.
    """
    if m not in (0, 1):
        raise ConfigError(f"limit check supports m in {{0, 1}}, got {m}")
    floor = 1e-5 if m == 0 else 1e-4
    eff = replace(settings, quad_abs_tol=max(settings.quad_abs_tol, floor))
    eps1, eps2 = (10.0**-k for k in _LIMIT_KS)
    v1 = moment_numeric(m, math.pi / 4.0 - eps1, cfg, eff)
    v2 = moment_numeric(m, math.pi / 4.0 - eps2, cfg, eff)
    extrap = v2 + (v2 - v1) * eps2 / (eps1 - eps2)
    closed = moment_closed_form(m, cfg)
    return abs(extrap - closed) / (1.0 + abs(closed))
