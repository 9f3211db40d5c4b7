"""Generalized Jacobi theta sums and their modular transformations.

The workhorse is the two-parameter series

    psi(x, z) = sum_{n>=1} exp(-pi n^2 x) cos(sqrt(pi x) n z),   Re(x) > 0,

summed term by term as half-sums of exponentials so that huge |Im| in the
cosine argument can never overflow: each term is
(exp(-pi n^2 x + i n w) + exp(-pi n^2 x - i n w))/2 with w = sqrt(pi x) z.
Truncation uses the rigorous majorant |term_n| <= exp(-pi n^2 Re x + n |Im w|)
and a geometric tail bound.

An optional log-prefactor is folded into the exponents, which keeps the
near-axis limit expressions finite even when the prefactor alone would
overflow and the theta sum alone would underflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import DivergenceError, DomainError, RegionError, UnsupportedOrderError
from .settings import DEFAULT_SETTINGS, EvalSettings, ValueWithError, require_finite

__all__ = [
    "ThetaEval",
    "theta_series",
    "psi_classical",
    "psi_general",
    "series_side",
    "jacobi_residual",
    "general_theta_residual",
    "psi_xz_transform_residual",
    "psi1",
    "psi1_alpha_derivative",
    "psi1_limit_value",
    "axis_decay_sequence",
    "psi_at_axis_combination",
]

SQRT_PI = math.sqrt(math.pi)
_EXP_GUARD = 700.0


@dataclass(frozen=True)
class ThetaEval:
    """A truncated theta sum: value, terms actually used, and a tail bound."""

    value: complex
    terms_used: int
    abs_err_est: float


def _folded_theta(
    x: complex, z: complex, log_prefactor: complex, settings: EvalSettings
) -> ThetaEval:
    """exp(log_prefactor) * psi(x, z) with the prefactor folded per term."""
    if x.real <= 0:
        raise DomainError(f"theta sum needs Re(x) > 0, got Re(x)={x.real:g}")
    w = cmath.sqrt(math.pi * x) * z
    decay = math.pi * x.real
    grow = abs(w.imag)
    p_re = log_prefactor.real
    acc = 0.0 + 0.0j
    noise = 0.0  # rounding: |term| * (phase size of its exponent) * eps
    tol = settings.quad_abs_tol
    n = 0
    tail = math.inf
    eps = 2.3e-16
    while n < settings.max_terms:
        n += 1
        base = log_prefactor - math.pi * n * n * x
        e_plus = base + 1j * n * w
        e_minus = base - 1j * n * w
        if e_plus.real > _EXP_GUARD or e_minus.real > _EXP_GUARD:
            raise DivergenceError(
                f"theta term n={n} overflows: cosh growth beats the Gaussian "
                f"factor at x={x!r}, z={z!r}"
            )
        t_plus = cmath.exp(e_plus)
        t_minus = cmath.exp(e_minus)
        acc += 0.5 * (t_plus + t_minus)
        noise += 0.5 * eps * (
            abs(t_plus) * (2.0 + 0.5 * abs(e_plus.imag))
            + abs(t_minus) * (2.0 + 0.5 * abs(e_minus.imag))
        )
        ratio = -decay * (2 * n + 3) + grow
        if ratio < -1e-3:  # geometric tail bound applies
            r = math.exp(ratio)
            mu_next = p_re - decay * (n + 1) * (n + 1) + grow * (n + 1)
            tail = math.exp(min(mu_next, _EXP_GUARD)) / (1.0 - r)
            if tail <= tol:
                break
    else:
        raise DivergenceError(
            f"theta sum at x={x!r}, z={z!r} missed tolerance {tol:g} after "
            f"{settings.max_terms} terms (tail bound {tail:g})"
        )
    require_finite(acc, "theta sum")
    return ThetaEval(acc, n, tail + noise)


def theta_series(
    x: complex, z: complex, settings: EvalSettings = DEFAULT_SETTINGS
) -> ThetaEval:
    """psi(x, z) = sum exp(-pi n^2 x) cos(sqrt(pi x) n z) for Re(x) > 0."""
    return _folded_theta(complex(x), complex(z), 0.0 + 0.0j, settings)


def psi_classical(x: float, settings: EvalSettings = DEFAULT_SETTINGS) -> ThetaEval:
    """psi(x) = sum exp(-pi n^2 x) for real x > 0."""
    if not x > 0:
        raise DomainError(f"psi requires x > 0, got {x}")
    return theta_series(complex(x), 0.0, settings)


def psi_general(
    x: complex, z: complex, settings: EvalSettings = DEFAULT_SETTINGS
) -> ThetaEval:
    """The two-parameter theta sum; reduces to psi_classical at z = 0."""
    return theta_series(x, z, settings)


def series_side(
    a: complex, z: complex, settings: EvalSettings = DEFAULT_SETTINGS
) -> ValueWithError:
    """One side of the modular transformation:

        sqrt(a) ( e^{-z^2/8} / (2a) - e^{z^2/8} sum e^{-pi a^2 n^2} cos(sqrt(pi) a n z) )

    The partner side at b = 1/a equals series_side(1/a, i z), because
    cos(i y) = cosh(y) swaps the two exponential prefactors.
    """
    a, z = complex(a), complex(z)
    if (a * a).real <= 0:
        raise DomainError(f"series side needs Re(a^2) > 0, got {(a*a).real:g}")
    th = theta_series(a * a, z, settings)
    ez8 = cmath.exp(z * z / 8.0)
    sqrt_a = cmath.sqrt(a)
    value = sqrt_a * (1.0 / (ez8 * 2.0 * a) - ez8 * th.value)
    require_finite(value, "series_side")
    err = abs(sqrt_a) * abs(ez8) * th.abs_err_est + 8e-16 * abs(value)
    return ValueWithError(value, err)


def _tightened(settings: EvalSettings) -> EvalSettings:
    """Residual checks sum both sides far below the comparison tolerance so
    the reported residual measures the identity, not the truncation."""
    return replace(settings, quad_abs_tol=max(settings.quad_abs_tol * 1e-4, 1e-15))


def jacobi_residual(x: float, settings: EvalSettings = DEFAULT_SETTINGS) -> float:
    """|sqrt(x)(2 psi(x) + 1) - (2 psi(1/x) + 1)| for real x > 0."""
    if not x > 0:
        raise DomainError(f"jacobi_residual requires x > 0, got {x}")
    tight = _tightened(settings)
    lhs = math.sqrt(x) * (2.0 * psi_classical(x, tight).value.real + 1.0)
    rhs = 2.0 * psi_classical(1.0 / x, tight).value.real + 1.0
    return abs(lhs - rhs)


def general_theta_residual(
    a: complex, z: complex, settings: EvalSettings = DEFAULT_SETTINGS
) -> float:
    """Absolute residual of the generalized transformation at b = 1/a."""
    a, z = complex(a), complex(z)
    tight = _tightened(settings)
    side_a = series_side(a, z, tight).value
    side_b = series_side(1.0 / a, 1j * z, tight).value
    return abs(side_a - side_b)


def psi_xz_transform_residual(
    x: complex, z: complex, settings: EvalSettings = DEFAULT_SETTINGS
) -> float:
    """Residual of psi(x,z) = e^{-z^2/4}/sqrt(x) psi(1/x, iz) + e^{-z^2/4}/(2 sqrt(x)) - 1/2."""
    x, z = complex(x), complex(z)
    tight = _tightened(settings)
    lhs = theta_series(x, z, tight).value
    ez4 = cmath.exp(-z * z / 4.0)
    sqrt_x = cmath.sqrt(x)
    rhs = ez4 / sqrt_x * theta_series(1.0 / x, 1j * z, tight).value + ez4 / (2.0 * sqrt_x) - 0.5
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# The shifted combination psi1 and its alpha-derivatives
# ---------------------------------------------------------------------------
#
# psi1 and its derivatives are computed on truncated Taylor jets in alpha
# (5 coefficients, enough for derivative orders through 4).  Away from the
# boundary the theta series is differentiated term by term.  Near alpha =
# pi/4 the argument e^{2 i alpha} approaches i and the direct series loses
# ~16 digits to cancellation and phase rounding, so there the even/odd split
# combined with the modular transformation is used instead:
#
#   psi(i+d, z) = -1/2 + d^{-1/2} e^{-(z^2/4)(1+i/d)} *
#                 [ psi(1/(4d), i z sqrt(1+i/d)) - psi(1/d, i z sqrt(1+i/d)) ]
#
# whose terms are superexponentially small, with no cancellation at all.

_JET_LEN = 5


def _j_const(v: complex) -> list[complex]:
    return [complex(v), 0j, 0j, 0j, 0j]


def _j_add(a, b):
    return [x + y for x, y in zip(a, b)]

def _j_scale(a, c):
    return [x * c for x in a]


def _j_mul(a, b):
    out = [0j] * _JET_LEN
    for i in range(_JET_LEN):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(_JET_LEN - i):
            out[i + j] += ai * b[j]
    return out


def _j_recip(a):
    r = [0j] * _JET_LEN
    r[0] = 1.0 / a[0]
    for k in range(1, _JET_LEN):
        r[k] = -sum(a[j] * r[k - j] for j in range(1, k + 1)) / a[0]
    return r


def _j_sqrt(a):
    s = [0j] * _JET_LEN
    s[0] = cmath.sqrt(a[0])
    for k in range(1, _JET_LEN):
        s[k] = (a[k] - sum(s[j] * s[k - j] for j in range(1, k))) / (2.0 * s[0])
    return s


def _j_log(a):
    out = [0j] * _JET_LEN
    out[0] = cmath.log(a[0])
    for k in range(1, _JET_LEN):
        out[k] = (a[k] - sum((j / k) * out[j] * a[k - j] for j in range(1, k))) / a[0]
    return out


def _j_exp(a):
    e = [0j] * _JET_LEN
    e[0] = cmath.exp(a[0])
    for k in range(1, _JET_LEN):
        e[k] = sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
    return e


def _check_alpha(alpha: float) -> None:
    if not -math.pi / 4 < alpha < math.pi / 4:
        raise DomainError(
            f"alpha={alpha:g} outside (-pi/4, pi/4); Re(e^(2 i alpha)) <= 0 there"
        )


def _strictly_inside(z: complex) -> bool:
    from .region import classify_inequality

    return classify_inequality(z).inside


def _psi1_jet(
    alpha: float, z: complex, lam: float, settings: EvalSettings
) -> list[complex]:
    """Taylor jet of psi1 in alpha through order 4."""
    _check_alpha(alpha)
    z = complex(z)
    c = 0.5j - lam
    ec = cmath.exp(c * alpha)
    ejet = [ec, ec * c, ec * c * c / 2.0, ec * c**3 / 6.0, ec * c**4 / 24.0]
    x = cmath.exp(2j * alpha)
    tol = settings.quad_abs_tol
    use_transform = x.real < 0.1 and alpha > 0 and _strictly_inside(z)
    if not use_transform:
        # direct theta series, differentiated term by term
        u = cmath.exp(1j * alpha)
        ujet = [u, 1j * u, -u / 2.0, -1j * u / 6.0, u / 24.0]
        u2 = _j_mul(ujet, ujet)
        acc = _j_const(0.0)
        decay = math.pi * x.real
        grow = abs((SQRT_PI * z * u).imag)
        streak = 0
        n = 0
        while n < settings.max_terms:
            n += 1
            a_part = _j_scale(u2, -math.pi * n * n)
            contrib = 0.0
            for sign in (1.0, -1.0):
                h = _j_add(a_part, _j_scale(ujet, sign * 1j * SQRT_PI * n * z))
                if h[0].real > _EXP_GUARD:
                    raise DivergenceError(f"psi1 series term n={n} overflows")
                e = _j_exp(h)
                acc = _j_add(acc, _j_scale(e, 0.5))
                contrib = max(contrib, max(abs(v) for v in e))
            if -decay * (2 * n + 3) + grow < -0.3:
                mu = math.exp(min(-decay * (n + 1) ** 2 + grow * (n + 1), _EXP_GUARD))
                amp = (16.0 * math.pi * (n + 1) ** 2 + 2.0 * SQRT_PI * (n + 1) * abs(z) + 1.0) ** 4
                if 5.0 * mu * amp <= 1e-2 * tol and contrib <= 1e-2 * tol:
                    streak += 1
                    if streak >= 2:
                        break
                else:
                    streak = 0
        else:
            raise DivergenceError(
                f"psi1 series unconverged after {settings.max_terms} terms"
            )
        base = _j_add(
            _j_const(cmath.exp(-z * z / 8.0) / 2.0),
            _j_scale(acc, cmath.exp(z * z / 8.0)),
        )
        return _j_mul(ejet, base)
    # transformed near-axis route; d = e^{2 i alpha} - i, computed without
    # cancellation from eps = pi/4 - alpha
    eps_b = math.pi / 4.0 - alpha
    d0 = complex(math.sin(2.0 * eps_b), -2.0 * math.sin(eps_b) ** 2)
    djet = [d0] + [x * (2j) ** k / math.factorial(k) for k in range(1, _JET_LEN)]
    inv = _j_recip(djet)
    nu = _j_sqrt(_j_add(_j_const(1j), djet))
    nuinv = _j_mul(nu, inv)
    pref = _j_add(
        _j_const(-z * z / 4.0),
        _j_add(_j_scale(inv, -1j * z * z / 4.0), _j_scale(_j_log(djet), -0.5)),
    )
    acc = _j_const(0.0)
    streak = 0
    m = 0
    while m < settings.max_terms:
        m += 1
        contrib = 0.0
        for kappa, weight, a3 in ((4.0, 1.0, SQRT_PI * z / 2.0), (1.0, -1.0, SQRT_PI * z)):
            base_j = _j_add(pref, _j_scale(inv, -math.pi * m * m / kappa))
            for sign in (1.0, -1.0):
                h = _j_add(base_j, _j_scale(nuinv, sign * m * a3))
                if h[0].real > _EXP_GUARD:
                    raise DivergenceError(
                        "transformed psi1 series grows; z too close to the "
                        "boundary of the admissible region"
                    )
                e = _j_exp(h)
                acc = _j_add(acc, _j_scale(e, 0.5 * weight))
                contrib = max(contrib, max(abs(v) for v in e))
        if contrib <= 1e-3 * tol:
            streak += 1
            if streak >= 2:
                break
        else:
            streak = 0
    else:
        raise DivergenceError(
            f"transformed psi1 series unconverged after {settings.max_terms} terms"
        )
    base = _j_add(_j_const(-cmath.sinh(z * z / 8.0)), _j_scale(acc, cmath.exp(z * z / 8.0)))
    return _j_mul(ejet, base)


def psi1(
    alpha: float, z: complex, lam: float, settings: EvalSettings = DEFAULT_SETTINGS
) -> complex:
    """e^{(i/2 - lam) alpha} ( e^{-z^2/8}/2 + e^{z^2/8} psi(e^{2 i alpha}, z) )."""
    value = _psi1_jet(alpha, z, lam, settings)[0]
    require_finite(value, "psi1")
    return value


def psi1_alpha_derivative(
    alpha: float,
    z: complex,
    lam: float,
    order: int,
    settings: EvalSettings = DEFAULT_SETTINGS,
) -> complex:
    """order-th alpha-derivative of psi1 by analytic (jet) differentiation.

    Orders through 4 are supported (the moment identities need 2m <= 4).
    Near alpha = pi/4 the transformed representation keeps orders <= 4
    noise-free; finite differences would be hopeless there.
    """
    if not 0 <= order <= 4:
        raise UnsupportedOrderError(f"alpha-derivative order {order} not supported (max 4)")
    jet = _psi1_jet(alpha, z, lam, settings)
    value = jet[order] * math.factorial(order)
    require_finite(value, "psi1_alpha_derivative")
    return value


def psi1_limit_value(z: complex, lam: float, order: int) -> complex:
    """Limit of the order-th (even) alpha-derivative of psi1 as alpha -> pi/4."""
    if order % 2 != 0:
        raise UnsupportedOrderError("the boundary limit is stated for even orders")
    z = complex(z)
    c = 0.5j - lam
    return -(c**order) * cmath.exp(math.pi / 4.0 * c) * cmath.sinh(z * z / 8.0)


# ---------------------------------------------------------------------------
# Near-axis limit expressions
# ---------------------------------------------------------------------------

def _require_in_region(z: complex, what: str) -> None:
    from .region import classify_inequality

    if not classify_inequality(z).inside:
        raise RegionError(f"{what}: z={z!r} lies outside the admissible region")


def axis_decay_sequence(
    z: complex,
    deltas: list[float],
    settings: EvalSettings = DEFAULT_SETTINGS,
    *,
    scale: float = 4.0,
    ray_angle: float = 0.0,
) -> list[float]:
    """|delta^{-1/2} e^{-(z^2/4)(1 + i/delta)} psi(1/(scale*delta), i z sqrt(1 + i/delta))|.

    scale=4 gives the leading expression, scale=1 its companion; both must
    decay to zero as delta -> 0 when z is inside the admissible region.
    ray_angle tilts delta along the ray delta*e^{i*ray_angle}, |angle| < pi/2.
    """
    z = complex(z)
    _require_in_region(z, "axis_decay_sequence")
    if not (scale in (1.0, 4.0)):
        raise DomainError(f"scale must be 1 or 4, got {scale}")
    if abs(ray_angle) >= math.pi / 2:
        raise DomainError(f"|ray_angle| must be < pi/2, got {ray_angle}")
    if not all(d > 0 for d in deltas):
        raise DomainError("all deltas must be positive")
    if any(deltas[i + 1] >= deltas[i] for i in range(len(deltas) - 1)):
        raise DomainError("deltas must be strictly decreasing")
    rot = cmath.exp(1j * ray_angle)
    out = []
    for d in deltas:
        dc = d * rot
        x = 1.0 / (scale * dc)
        arg = 1j * z * cmath.sqrt(1.0 + 1j / dc)
        log_pref = -z * z / 4.0 * (1.0 + 1j / dc) - 0.5 * cmath.log(dc)
        out.append(abs(_folded_theta(x, arg, log_pref, settings).value))
    return out


def psi_at_axis_combination(
    z: complex, delta: float, settings: EvalSettings = DEFAULT_SETTINGS
) -> complex:
    """e^{-z^2/8}/2 + e^{z^2/8} psi(i + delta, z), via the even/odd split.

    Direct summation at x = i + delta loses absolute convergence as delta
    shrinks; splitting even and odd n gives
    psi(i + delta, z) = 2 psi(4 delta, c z) - psi(delta, c z) with
    c = sqrt(i + delta)/sqrt(delta), which is absolutely stable.  The value
    tends to -sinh(z^2/8) as delta -> 0 for admissible z.
    """
    z = complex(z)
    _require_in_region(z, "psi_at_axis_combination")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    c = cmath.sqrt(1j + delta) / math.sqrt(delta)
    zz = c * z
    split = 2.0 * theta_series(4.0 * delta, zz, settings).value - theta_series(
        delta, zz, settings
    ).value
    return cmath.exp(-z * z / 8.0) / 2.0 + cmath.exp(z * z / 8.0) * split
