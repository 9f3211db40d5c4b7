"""Membership tests for the admissible z-region of the shifted combination.

The region is the open set

    |Re(z) - Im(z)| < sqrt(pi/2) - sqrt(2/pi) Re(z) Im(z),

which decomposes exactly into an open central square of half-width
c = sqrt(pi/2) plus the two opposite quadrant corners {x > c, y < -c} and
{x < -c, y > c}.  Both characterizations are implemented and must agree
everywhere off a thin boundary band; the grid classifier enforces that.
Points on the boundary are labeled as such and counted as NOT inside (the
near-axis limit expressions require strict interior membership).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, DomainError

__all__ = [
    "SQUARE_HALF_WIDTH",
    "RegionVerdict",
    "region_margin",
    "classify_inequality",
    "classify_decomposition",
    "region_grid",
    "grid_csv_rows",
]

SQUARE_HALF_WIDTH = math.sqrt(math.pi / 2.0)
_BOUNDARY_BAND = 1e-12
_LABELS = ("central_square", "lower_right", "upper_left", "boundary", "outside")


@dataclass(frozen=True)
class RegionVerdict:
    inside: bool
    component_label: str
    margin: float


def region_margin(z: complex) -> float:
    """Signed slack of the defining inequality (positive strictly inside)."""
    x, y = z.real, z.imag
    c = SQUARE_HALF_WIDTH
    return c - x * y / c - abs(x - y)


def _component(x: float, y: float) -> str | None:
    c = SQUARE_HALF_WIDTH
    if abs(x) < c and abs(y) < c:
        return "central_square"
    if x > c and y < -c:
        return "lower_right"
    if x < -c and y > c:
        return "upper_left"
    return None


def classify_inequality(z: complex) -> RegionVerdict:
    """Verdict by the defining inequality; labels follow the decomposition."""
    z = complex(z)
    m = region_margin(z)
    if abs(m) <= _BOUNDARY_BAND:
        return RegionVerdict(False, "boundary", m)
    if m < 0:
        return RegionVerdict(False, "outside", m)
    label = _component(z.real, z.imag)
    if label is None:
        # mathematically unreachable for strictly interior points
        raise ConsistencyError(f"interior point {z!r} matches no component")
    return RegionVerdict(True, label, m)


def classify_decomposition(z: complex) -> RegionVerdict:
    """Verdict by explicit membership in the three-set union."""
    z = complex(z)
    m = region_margin(z)
    if abs(m) <= _BOUNDARY_BAND:
        return RegionVerdict(False, "boundary", m)
    label = _component(z.real, z.imag)
    if label is None:
        return RegionVerdict(False, "outside", m)
    return RegionVerdict(True, label, m)


def region_grid(
    x_min: float,
    x_max: float,
    y_min: float,
    y_max: float,
    step: float,
) -> list[tuple[complex, RegionVerdict]]:
    """Row-major classification of every grid node; the two membership tests
    must agree on each node off the 1e-9 boundary band."""
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    if not (x_min < x_max and y_min < y_max):
        raise DomainError("need x_min < x_max and y_min < y_max")
    xs = _axis(x_min, x_max, step)
    ys = _axis(y_min, y_max, step)
    out: list[tuple[complex, RegionVerdict]] = []
    for y in ys:
        for x in xs:
            z = complex(x, y)
            v1 = classify_inequality(z)
            v2 = classify_decomposition(z)
            if v1.inside != v2.inside and abs(v1.margin) > 1e-9:
                raise ConsistencyError(
                    f"membership tests disagree at z={z!r}: "
                    f"inequality={v1.inside}, decomposition={v2.inside}, "
                    f"margin={v1.margin:.3e}"
                )
            out.append((z, v1))
    return out


def _axis(lo: float, hi: float, step: float) -> list[float]:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    vals = [lo + i * step for i in range(n)]
    if vals[-1] < hi - 1e-9 * step:
        vals.append(hi)
    return vals


def grid_csv_rows(grid: list[tuple[complex, RegionVerdict]]):
    """Rows (x, y, inside, label, margin) for the grid CSV export."""
    for z, v in grid:
        yield (z.real, z.imag, 1 if v.inside else 0, v.component_label, v.margin)
