"""Cauchy-transform quadrature on closed curves.

C(F)(z) = (1/2πi) ∮ F(ζ)/(ζ - z) dζ by the trapezoidal rule on the curve's
θ grid. Off the curve the rule is spectrally accurate; near it the error
behaves like exp(-N·dist), hence the 10/N proximity guard and the grid
refinement in the probes.

Also here: the split/Cauchy coherence check on the unit circle, the
decomposition over two internally tangent circles, and radial probes of
boundary limits.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import replace
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from core import (
    BoundarySamples,
    CircleGrid,
    ConfigError,
    DomainError,
    GridSizeError,
    InconsistencyError,
    Orientation,
    ParamCurve,
    PreconditionError,
    ProbeCurve,
    ProbeRegion,
    ProbeReport,
    ProximityError,
    ResolutionError,
    ShiftedExteriorFunction,
    TangentDomain,
    TangentSplitResult,
    TopologyError,
    is_power_of_two,
)
from core.circle_fourier import analyze, resize, synthesize
from core.laurent_split import eval_disc, eval_exterior, eval_shifted_exterior, split

logger = logging.getLogger(__name__)

PROXIMITY_FACTOR = 10.0  # z must stay 10/N away from every node
SIMPLE_CHECK_MAX_N = 4096
SIMPLE_CHECK_CHUNK = 256

# split_consistency test points
INSIDE_RADII = (0.3, 0.7)
OUTSIDE_RADII = (1.4, 3.0)
TEST_RAYS = 8

TANGENT_SPLIT_TOLERANCE = 1e-6

# Probes
DEFAULT_MAX_N = 2**16
MAX_N_ENV = "SEAMLINE_MAX_N"
PROBE_RESOLUTION = 30.0  # refine until N·dist >= 30, i.e. error ~ e^-30
EXTRAPOLATION_GATE = 1.5
EXTRAPOLATION_POINTS = 4
CONVERGED_TOLERANCE = 1e-12
GROWTH_GATE = 10.0
OSCILLATION_WINDOW = 5
OSCILLATION_GATE = 0.5

BoundaryData = Union[BoundarySamples, Callable[[np.ndarray], np.ndarray]]


# ── Curves ────────────────────────────────────────────────────────────────────


def make_curve(
    grid: CircleGrid,
    positions: np.ndarray,
    derivatives: np.ndarray,
    orientation: Orientation = Orientation.POSITIVE,
    parametrization=None,
) -> ParamCurve:
    """Build a curve from tabulated data, rejecting self-intersections.

    The pairwise check runs for N <= 4096.
    """
    curve = ParamCurve(
        grid=grid,
        positions=positions,
        derivatives=derivatives,
        orientation=orientation,
        parametrization=parametrization,
    )
    if grid.size <= SIMPLE_CHECK_MAX_N:
        _check_simple(curve.positions)
    return curve


def circle_curve(
    grid: CircleGrid,
    center: complex = 0j,
    radius: float = 1.0,
    orientation: Orientation = Orientation.POSITIVE,
) -> ParamCurve:
    """ζ(θ) = center + radius·e^{iθ}."""
    if not radius > 0:
        raise PreconditionError(f"circle radius must be positive, got {radius}")

    def parametrization(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        w = np.exp(1j * theta)
        return center + radius * w, 1j * radius * w

    positions, derivatives = parametrization(grid.nodes)
    return ParamCurve(
        grid=grid,
        positions=positions,
        derivatives=derivatives,
        orientation=orientation,
        parametrization=parametrization,
    )


def unit_circle(grid: CircleGrid) -> ParamCurve:
    return circle_curve(grid)


def make_tangent_domain(radius: float, grid: CircleGrid) -> TangentDomain:
    """D minus the disc of radius r centered at 1 - r (tangent at 1)."""
    if not 0.0 < radius < 1.0:
        raise PreconditionError(f"inner radius must lie in (0, 1), got {radius}")
    return TangentDomain(
        radius=float(radius),
        outer=unit_circle(grid),
        inner=circle_curve(grid, 1.0 - radius, radius, Orientation.NEGATIVE),
    )


# ── Quadrature ────────────────────────────────────────────────────────────────


def cauchy(curve: ParamCurve, F: BoundarySamples, z: complex) -> complex:
    """Trapezoidal (1/2πi) Σ_j F_j ζ'_j/(ζ_j - z) · 2π/N, signed by orientation."""
    if F.grid.size != curve.grid.size:
        raise GridSizeError(
            f"data on {F.grid.size} nodes does not match a curve on {curve.grid.size}"
        )
    n = curve.grid.size
    distance = float(np.min(np.abs(curve.positions - z)))
    min_distance = PROXIMITY_FACTOR / n
    if distance < min_distance:
        raise ProximityError(distance, min_distance)
    terms = F.values * curve.derivatives / (curve.positions - z)
    total = np.sum(terms) / (1j * n)
    return complex(curve.orientation.sign * total)


def split_consistency(F: BoundarySamples) -> float:
    """Largest gap between C_T(F) and the split parts at fixed test points.

    Inside D the transform must equal g = disc part, outside it must equal
    -h = -(exterior part).
    """
    g, h = split(analyze(F))
    curve = unit_circle(F.grid)
    rays = np.exp(2j * np.pi * np.arange(TEST_RAYS) / TEST_RAYS)

    defect = 0.0
    for radius in INSIDE_RADII:
        for z in radius * rays:
            defect = max(defect, abs(cauchy(curve, F, z) - eval_disc(g, z)))
    for radius in OUTSIDE_RADII:
        for z in radius * rays:
            defect = max(defect, abs(cauchy(curve, F, z) + eval_exterior(h, z)))
    return defect


def tangent_split(
    domain: TangentDomain,
    F_outer: BoundarySamples,
    F_inner: BoundarySamples,
) -> TangentSplitResult:
    """F = g + h on Ω with g analytic in D and h analytic off D̄', h(∞) = 0.

    g is the disc part of F on the unit circle. h is the exterior part,
    about the inner center, of F - g on the inner circle.
    """
    for data, curve, label in ((F_outer, domain.outer, "outer"), (F_inner, domain.inner, "inner")):
        if data.grid.size != curve.grid.size:
            raise GridSizeError(
                f"{label} data on {data.grid.size} nodes does not match the {label} circle on {curve.grid.size}"
            )
    center = domain.inner_center
    radius = domain.radius
    g, _ = split(analyze(F_outer))

    residual = F_inner.values - eval_disc(g, domain.inner.positions)
    _, h_part = split(analyze(BoundarySamples(grid=F_inner.grid, values=residual)))
    h = ShiftedExteriorFunction(center=center, radius=radius, part=h_part)

    outer_fit = eval_disc(g, domain.outer.positions) + eval_shifted_exterior(h, domain.outer.positions)
    inner_fit = eval_disc(g, domain.inner.positions) + eval_shifted_exterior(h, domain.inner.positions)
    outer_defect = float(np.max(np.abs(F_outer.values - outer_fit)))
    inner_defect = float(np.max(np.abs(F_inner.values - inner_fit)))
    logger.debug("tangent split defects: outer %.3e, inner %.3e", outer_defect, inner_defect)

    worst = max(outer_defect, inner_defect)
    if worst > TANGENT_SPLIT_TOLERANCE:
        raise InconsistencyError(
            f"reconstruction defect {worst:.3e} exceeds {TANGENT_SPLIT_TOLERANCE:g}; "
            f"inputs are not traces of one function analytic on the domain"
        )
    return TangentSplitResult(g=g, h=h, outer_defect=outer_defect, inner_defect=inner_defect)


# ── Probes ────────────────────────────────────────────────────────────────────


def max_grid_size() -> int:
    """Refinement cap: 2^16, raised by SEAMLINE_MAX_N."""
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{MAX_N_ENV} must be an integer, got {raw!r}") from None
    if not is_power_of_two(value):
        raise ConfigError(f"{MAX_N_ENV} must be a power of two, got {value}")
    return max(DEFAULT_MAX_N, value)


def radial_probe(
    curve: ParamCurve,
    F: BoundaryData,
    target: complex,
    direction: complex,
    radii: Sequence[float],
) -> ProbeReport:
    """C(F) at target - r·direction for each radius, with a limit estimate.

    F is given as samples on the curve grid or as a callable of θ; either
    is re-tabulated when the grid is refined.
    """
    direction = complex(direction)
    if abs(abs(direction) - 1.0) > 1e-12:
        raise PreconditionError(f"direction must be a unit complex number, got {direction}")
    radii = _checked_radii(radii)
    points = complex(target) - radii * direction
    return approach_probe(curve, F, target, points, radii)


def approach_probe(
    curve: ParamCurve,
    F: BoundaryData,
    target: complex,
    points: np.ndarray,
    radii: Sequence[float],
) -> ProbeReport:
    """C(F) along an arbitrary approach sequence to target.

    The grid doubles until N·dist >= PROBE_RESOLUTION for each point; when
    that would pass max_grid_size() the report stops there, incomplete.
    """
    radii = _checked_radii(radii)
    cap = max_grid_size()
    data_scale = _data_scale(F, curve.grid)

    report = ProbeReport()
    current = curve
    values = _tabulate(F, curve.grid)
    for radius, point in zip(radii, np.asarray(points, dtype=complex)):
        while current.grid.size * _distance(current, point) < PROBE_RESOLUTION:
            if current.grid.size * 2 > cap:
                report.complete = False
                break
            grid = CircleGrid(current.grid.size * 2)
            current = _refine(curve, grid)
            values = _tabulate(F, grid)
            logger.debug("probe: refined to N=%d at radius %.3e", grid.size, radius)
        if not report.complete:
            logger.debug("probe: grid cap %d reached before radius %.3e", cap, radius)
            break
        report.approach_radii.append(float(radius))
        report.values.append(cauchy(current, values, point))
        report.grid_sizes.append(current.grid.size)

    if not report.values:
        raise ResolutionError(
            f"grid cap {cap} reached before the first radius {radii[0]:g} could be resolved"
        )
    offsets = np.asarray(points, dtype=complex)[: len(report.values)] - complex(target)
    _summarize(report, offsets, data_scale)
    return report


def tangent_region_points(domain: TangentDomain, radii: Sequence[float]) -> np.ndarray:
    """Points of Ω at distance r from 1, on the circle of radius (1 + r')/2 tangent at 1."""
    rho = 0.5 * (1.0 + domain.radius)
    radii = np.asarray(radii, dtype=float)
    if np.any(radii >= 2.0 * rho):
        raise PreconditionError(f"approach radii must stay below {2.0 * rho}")
    arc = 2.0 * np.arcsin(radii / (2.0 * rho))
    return (1.0 - rho) + rho * np.exp(1j * arc)


def tangent_curve(domain: TangentDomain, curve: ProbeCurve = ProbeCurve.OUTER) -> ParamCurve:
    """The unit circle, or the inner circle traversed positively."""
    if ProbeCurve(curve) is ProbeCurve.OUTER:
        return domain.outer
    return replace(domain.inner, orientation=Orientation.POSITIVE)


def probe_tangent(
    domain: TangentDomain,
    F: BoundaryData,
    radii: Sequence[float],
    region: ProbeRegion = ProbeRegion.DISC,
    curve: ProbeCurve = ProbeCurve.OUTER,
) -> ProbeReport:
    """Cauchy transform over one of the circles, approaching the tangency point.

    DISC comes straight in from inside D, EXTERIOR straight in from outside
    D, OMEGA along the circle between the two boundary circles. F lives on
    the chosen curve.
    """
    contour = tangent_curve(domain, curve)
    region = ProbeRegion(region)
    if region is ProbeRegion.DISC:
        return radial_probe(contour, F, domain.tangency_point, 1.0, radii)
    if region is ProbeRegion.EXTERIOR:
        return radial_probe(contour, F, domain.tangency_point, -1.0, radii)
    points = tangent_region_points(domain, radii)
    return approach_probe(contour, F, domain.tangency_point, points, radii)


# ── Helpers ───────────────────────────────────────────────────────────────────


def _checked_radii(radii: Sequence[float]) -> np.ndarray:
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) >= 0):
        raise PreconditionError("radii must be a nonempty, strictly decreasing positive sequence")
    return radii


def _distance(curve: ParamCurve, point: complex) -> float:
    return float(np.min(np.abs(curve.positions - point)))


def _refine(curve: ParamCurve, grid: CircleGrid) -> ParamCurve:
    if curve.parametrization is not None:
        positions, derivatives = curve.parametrization(grid.nodes)
    else:
        spectrum = resize(analyze(BoundarySamples(curve.grid, curve.positions)), grid.size)
        positions = synthesize(spectrum, grid).values
        slope = resize(analyze(BoundarySamples(curve.grid, curve.derivatives)), grid.size)
        derivatives = synthesize(slope, grid).values
    return ParamCurve(
        grid=grid,
        positions=positions,
        derivatives=derivatives,
        orientation=curve.orientation,
        parametrization=curve.parametrization,
    )


def _tabulate(F: BoundaryData, grid: CircleGrid) -> BoundarySamples:
    if isinstance(F, BoundarySamples):
        if F.grid.size == grid.size:
            return F
        return synthesize(resize(analyze(F), grid.size), grid)
    values = np.broadcast_to(np.asarray(F(grid.nodes), dtype=complex), (grid.size,))
    return BoundarySamples(grid=grid, values=values)


def _data_scale(F: BoundaryData, grid: CircleGrid) -> float:
    return float(np.max(np.abs(_tabulate(F, grid).values)))


def _summarize(report: ProbeReport, offsets: np.ndarray, data_scale: float) -> None:
    """Fill oscillation, divergence and limit fields from the collected values."""
    values = np.asarray(report.values, dtype=complex)
    window = values[-OSCILLATION_WINDOW:]
    report.oscillation_measure = float(np.max(np.abs(window[:, None] - window[None, :])))
    magnitude_scale = max(float(np.max(np.abs(window))), data_scale)

    magnitudes = np.abs(values)
    growing = (
        values.size > 1
        and bool(np.all(np.diff(magnitudes) > 0))
        and magnitudes[-1] > GROWTH_GATE * data_scale
    )
    oscillating = magnitude_scale > 0 and report.oscillation_measure > OSCILLATION_GATE * magnitude_scale
    report.divergence_flag = bool(growing or oscillating)
    report.limit_estimate = None if report.divergence_flag else _extrapolate(values, offsets)


def _extrapolate(values: np.ndarray, offsets: np.ndarray) -> complex:
    """Limit of values as offsets -> 0.

    Converged sequences return their last value. When successive
    differences shrink by EXTRAPOLATION_GATE or more, the last few values
    are fitted by a polynomial in the complex offset and evaluated at 0.
    """
    if values.size < 2:
        return complex(values[-1])
    steps = np.abs(np.diff(values))
    if steps[-1] <= CONVERGED_TOLERANCE * max(1.0, abs(values[-1])):
        return complex(values[-1])
    if values.size >= 3 and steps[-2] >= EXTRAPOLATION_GATE * steps[-1]:
        m = min(EXTRAPOLATION_POINTS, values.size)
        coeffs = P.polyfit(offsets[-m:], values[-m:], m - 1)
        return complex(coeffs[0])
    return complex(values[-1])


def _check_simple(positions: np.ndarray) -> None:
    """Reject polylines where two non-adjacent segments cross."""
    start = positions
    end = np.roll(positions, -1)
    n = positions.size
    for first in range(0, n, SIMPLE_CHECK_CHUNK):
        rows = slice(first, min(first + SIMPLE_CHECK_CHUNK, n))
        p, q = start[rows, None], end[rows, None]
        r, s = start[None, :], end[None, :]
        d1 = _cross(q - p, r - p)
        d2 = _cross(q - p, s - p)
        d3 = _cross(s - r, p - r)
        d4 = _cross(s - r, q - r)
        crossing = (d1 * d2 < 0) & (d3 * d4 < 0)
        i = np.arange(rows.start, rows.stop)[:, None]
        j = np.arange(n)[None, :]
        gap = np.abs(i - j)
        crossing &= (gap > 1) & (gap < n - 1)
        if np.any(crossing):
            a, b = np.argwhere(crossing)[0]
            raise TopologyError(
                f"curve segments {rows.start + a} and {b} intersect"
            )


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u.real * v.imag - u.imag * v.real
