"""Discrete Fourier analysis on the unit circle.

Pure computation, no I/O. Samples live on the uniform grid θ_j = 2πj/N;
coefficients live on the symmetric index range [-N/2, N/2) with the
Nyquist slot -N/2 held at zero, so d/dθ stays skew-symmetric.
"""

from __future__ import annotations

import logging
from typing import Callable, Union

import numpy as np
import scipy.fft as fft
from scipy import stats

from core import (
    AliasingError,
    BoundarySamples,
    CircleGrid,
    DecayClass,
    GridSizeError,
    LaurentSpectrum,
    PreconditionError,
    SeminormFamily,
    SmoothnessReport,
    is_power_of_two,
)

logger = logging.getLogger(__name__)

MAX_SEMINORM_ORDER = 64  # (N/2)^l must stay finite in double precision

# Smoothness classifier
MIN_CLASSIFY_SIZE = 64
TAIL_FRACTION = 8  # tail window is |n| >= N/8
TRIG_POLYNOMIAL_CUTOFF = 1e-13  # relative to the largest coefficient
SLOW_EXPONENT = 0.25  # fitted exponents at or below this count as no decay
MIN_FIT_POINTS = 3
TAIL_NORM_ORDERS = range(0, 7)

_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def analyze(samples: BoundarySamples) -> LaurentSpectrum:
    """Discrete Fourier coefficients (1/N) Σ_j f_j e^{-inθ_j}, n in [-N/2, N/2)."""
    n = samples.grid.size
    if not is_power_of_two(n):
        raise GridSizeError(f"analysis needs a power-of-two grid, got {n}")
    coeffs = fft.fftshift(fft.fft(samples.values)) / n
    coeffs[0] = 0.0  # Nyquist
    return LaurentSpectrum(grid_size=n, coeffs=coeffs)


def synthesize(spectrum: LaurentSpectrum, grid: CircleGrid) -> BoundarySamples:
    """Values Σ_n a_n e^{inθ_j} on a grid at least as fine as the spectrum."""
    m = grid.size
    if m < spectrum.grid_size:
        raise AliasingError(
            f"grid of size {m} cannot carry a spectrum of size {spectrum.grid_size}"
        )
    padded = np.zeros(m, dtype=complex)
    padded[spectrum.indices % m] = spectrum.coeffs
    return BoundarySamples(grid=grid, values=fft.ifft(padded) * m)


def sample(fn: Callable[[np.ndarray], Union[np.ndarray, complex]], grid: CircleGrid) -> BoundarySamples:
    """Tabulate fn(ζ) at ζ = e^{iθ_j}."""
    values = np.broadcast_to(np.asarray(fn(grid.points), dtype=complex), (grid.size,))
    return BoundarySamples(grid=grid, values=values)


def resize(spectrum: LaurentSpectrum, grid_size: int) -> LaurentSpectrum:
    """Re-embed a spectrum in the index range of another grid size.

    Shrinking is allowed only when every nonzero coefficient fits.
    """
    if grid_size == spectrum.grid_size:
        return spectrum
    mapping = spectrum.to_mapping()
    half = grid_size // 2
    outside = [n for n in mapping if not -half < n < half]
    if outside:
        raise AliasingError(
            f"indices {outside[0]}..{outside[-1]} do not fit grid size {grid_size}"
        )
    return LaurentSpectrum.from_mapping(mapping, grid_size)


def differentiate(spectrum: LaurentSpectrum, k: int) -> LaurentSpectrum:
    """k-th derivative in θ: a_n -> (in)^k a_n."""
    if k < 0:
        raise PreconditionError(f"derivative order must be nonnegative, got {k}")
    if k == 0:
        return spectrum
    factors = _I_POWERS[k % 4] * spectrum.indices.astype(float) ** k
    return LaurentSpectrum(
        grid_size=spectrum.grid_size,
        coeffs=factors * spectrum.coeffs,
    )


def seminorm(
    spectrum: LaurentSpectrum,
    l: int,
    family: Union[SeminormFamily, str] = SeminormFamily.SUP,
) -> float:
    """One member of the C^l seminorm families.

    sup:                sup_n |n^l a_n|   (l = 0 gives sup_n |a_n|)
    sum:                |a_0| + Σ_{n≠0} |n^l a_n|
    uniform-derivative: max_j |d^l f/dθ^l (θ_j)|
    """
    if not 0 <= l <= MAX_SEMINORM_ORDER:
        raise PreconditionError(
            f"seminorm order must lie in [0, {MAX_SEMINORM_ORDER}], got {l}"
        )
    family = SeminormFamily(family)

    if family is SeminormFamily.UNIFORM_DERIVATIVE:
        grid = CircleGrid(spectrum.grid_size)
        values = synthesize(differentiate(spectrum, l), grid).values
        return float(np.max(np.abs(values)))

    indices = spectrum.indices
    weighted = np.abs(indices).astype(float) ** l * np.abs(spectrum.coeffs)
    if family is SeminormFamily.SUP:
        return float(np.max(weighted))
    off_center = indices != 0
    return abs(spectrum[0]) + float(np.sum(weighted[off_center]))


def negative_part_size(spectrum: LaurentSpectrum) -> float:
    """max_{n<0} |a_n|; zero for boundary values of functions analytic in D."""
    return float(np.max(np.abs(spectrum.coeffs[spectrum.indices < 0])))


def nonnegative_part_size(spectrum: LaurentSpectrum) -> float:
    """max_{n>=0} |a_n|; zero for exterior functions vanishing at infinity."""
    return float(np.max(np.abs(spectrum.coeffs[spectrum.indices >= 0])))


def classify_smoothness(spectrum: LaurentSpectrum) -> SmoothnessReport:
    """Classify coefficient decay on the tail window |n| >= N/8.

    Heuristics:
      - tail below 1e-13 of the largest coefficient: trig polynomial
      - log|a_n| linear in |n| fits better than linear in log|n|: super-polynomial
      - otherwise the log-log slope is the power-law exponent
      - exponents at or below SLOW_EXPONENT: slow
    """
    n = spectrum.grid_size
    if n < MIN_CLASSIFY_SIZE:
        raise PreconditionError(
            f"classification needs at least {MIN_CLASSIFY_SIZE} coefficients, got {n}"
        )

    magnitudes = np.abs(spectrum.coeffs)
    scale = float(magnitudes.max())
    if scale == 0.0:
        return SmoothnessReport(decay_class=DecayClass.TRIG_POLYNOMIAL)

    tail_norms = [(l, seminorm(spectrum, l, SeminormFamily.SUP)) for l in TAIL_NORM_ORDERS]
    floor = TRIG_POLYNOMIAL_CUTOFF * scale
    distance = np.abs(spectrum.indices)
    usable = (distance >= n // TAIL_FRACTION) & (magnitudes > floor)

    if np.unique(distance[usable]).size < MIN_FIT_POINTS:
        logger.debug("tail has %d usable coefficients, no fit", int(usable.sum()))
        return SmoothnessReport(
            decay_class=DecayClass.TRIG_POLYNOMIAL,
            tail_norms=tail_norms,
        )

    x = distance[usable].astype(float)
    y = np.log(magnitudes[usable])
    power = stats.linregress(np.log(x), y)
    geometric = stats.linregress(x, y)
    power_quality = _clip_unit(power.rvalue**2)
    geometric_quality = _clip_unit(geometric.rvalue**2)
    logger.debug(
        "tail fit: power R²=%.6f slope=%.4f, geometric R²=%.6f slope=%.4g",
        power_quality, power.slope, geometric_quality, geometric.slope,
    )

    if geometric_quality > power_quality and geometric.slope < 0:
        return SmoothnessReport(
            decay_class=DecayClass.SUPER_POLYNOMIAL,
            fit_quality=geometric_quality,
            tail_norms=tail_norms,
        )

    exponent = -float(power.slope)
    if exponent <= SLOW_EXPONENT:
        return SmoothnessReport(
            decay_class=DecayClass.SLOW,
            fit_quality=power_quality,
            tail_norms=tail_norms,
        )
    return SmoothnessReport(
        decay_class=DecayClass.POWER_LAW,
        estimated_exponent=exponent,
        fit_quality=power_quality,
        tail_norms=tail_norms,
    )


def _clip_unit(value: float) -> float:
    return float(min(max(value, 0.0), 1.0))
