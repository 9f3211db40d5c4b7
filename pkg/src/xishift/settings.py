"""Evaluation settings and the value-plus-error-bound result type."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import ConfigError, EvaluationError


@dataclass(frozen=True)
class EvalSettings:
    """Precision and truncation policy shared by all series and quadratures.

    rel_tol      : target relative accuracy of series evaluations
    max_terms    : hard cap on series length (also caps the zeta direct sum)
    em_terms     : minimum Euler-Maclaurin direct-sum length; the actual
                   length grows like 1.3*|Im s|
    quad_abs_tol : absolute tolerance for quadrature and theta tail bounds
    """

    rel_tol: float = 1e-12
    max_terms: int = 10_000
    em_terms: int = 20
    quad_abs_tol: float = 1e-10

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ConfigError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 16:
            raise ConfigError(f"max_terms must be >= 16, got {self.max_terms}")
        if not self.quad_abs_tol > 0:
            raise ConfigError(f"quad_abs_tol must be positive, got {self.quad_abs_tol}")
        if self.em_terms < 4:
            raise ConfigError(f"em_terms must be >= 4, got {self.em_terms}")


DEFAULT_SETTINGS = EvalSettings()


@dataclass(frozen=True)
class ValueWithError:
    """A computed complex value together with an upper estimate of its error."""

    value: complex
    abs_err_est: float


def require_finite(value: complex, context: str) -> complex:
    """No NaN or infinity may escape an operation without an error."""
    if not (cmath.isfinite(value)):
        raise EvaluationError(f"{context}: non-finite value {value!r}")
    return value
