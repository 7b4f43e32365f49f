"""Packaged experiments: split-projection norm growth and classification sweeps.

The split projection P keeps the indices n >= 0 of a trig polynomial. On
the sup norm it is unbounded, and its norm restricted to degree <= m grows
like log m. riesz_norm_experiment estimates that norm from below for a
list of grid sizes with two families of witnesses:

  - kernel: f = sum_{k=1}^m sin(kθ)/k stays bounded while Pf(0) grows like
    the harmonic number; a constant shift c along Pf(0) (P fixes constants)
    sharpens the ratio to sqrt(1 + |Pf(0)|²/‖f‖²)
  - random: seeded unimodular-coefficient polynomials

Every witness is evaluated on an oversampled grid, so each ratio is a
sampled lower bound for ‖P‖.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.fft as fft
from scipy import stats

from core import (
    ConfigError,
    GrowthFit,
    RieszNormRow,
    SeamlineError,
    SweepRow,
    is_power_of_two,
)
from core.circle_fourier import classify_smoothness
from core.concurrency import map_in_order
from core.formats import read_spectrum

logger = logging.getLogger(__name__)

MIN_DEGREE = 4
MAX_DEGREE = 4096
DEFAULT_TRIALS = 200
DEFAULT_OVERSAMPLE = 8
KERNEL_WITNESS = -1


# ── Split-projection norm ─────────────────────────────────────────────────────


def riesz_norm_row(
    degree: int,
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    oversample: int = DEFAULT_OVERSAMPLE,
) -> RieszNormRow:
    """Best witness ratio ‖Pf‖∞/‖f‖∞ for trig polynomials on a grid of `degree` nodes."""
    _check_degree(degree)
    m = degree // 2 - 1
    fine = degree * oversample

    kernel_ratio = _kernel_ratio(m, fine)
    random_ratio, best_trial = _random_ratio(m, fine, degree, seed, trials)
    logger.debug(
        "degree %d: kernel %.6f, random %.6f (trial %d)",
        degree, kernel_ratio, random_ratio, best_trial,
    )

    if random_ratio > kernel_ratio:
        estimated, witness = random_ratio, best_trial
    else:
        estimated, witness = kernel_ratio, KERNEL_WITNESS
    return RieszNormRow(
        degree=degree,
        # constants are fixed by P, so ratio 1 is always attained
        estimated_norm=max(1.0, estimated),
        witness_seed=witness,
        kernel_ratio=kernel_ratio,
        random_ratio=random_ratio,
    )


def riesz_norm_experiment(
    degrees: Iterable[int],
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    oversample: int = DEFAULT_OVERSAMPLE,
) -> list[RieszNormRow]:
    """One row per distinct degree, sorted by degree."""
    return [
        riesz_norm_row(degree, seed, trials, oversample)
        for degree in _sorted_degrees(degrees)
    ]


async def riesz_norm_experiment_async(
    degrees: Iterable[int],
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    oversample: int = DEFAULT_OVERSAMPLE,
    max_concurrent: int = 4,
    progress_callback=None,
) -> list[RieszNormRow]:
    """Concurrent riesz_norm_experiment; rows are identical and in degree order."""
    return await map_in_order(
        lambda degree: riesz_norm_row(degree, seed, trials, oversample),
        _sorted_degrees(degrees),
        max_concurrent=max_concurrent,
        progress_callback=progress_callback,
    )


def fit_log_growth(rows: Sequence[RieszNormRow]) -> GrowthFit:
    """Least-squares fit estimated_norm ≈ slope · ln N + intercept."""
    if len(rows) < 2:
        raise ConfigError("a growth fit needs at least two degrees")
    x = np.log([row.degree for row in rows])
    y = np.array([row.estimated_norm for row in rows])
    fit = stats.linregress(x, y)
    return GrowthFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
    )


# ── Classification sweep ──────────────────────────────────────────────────────


def classify_sweep(spectra_dir: Path) -> list[SweepRow]:
    """Classify every *.json spectrum in a directory, ordered by file name.

    Files that fail to load or classify produce an error row; the sweep
    carries on.
    """
    spectra_dir = Path(spectra_dir)
    if not spectra_dir.is_dir():
        raise ConfigError(f"not a directory: {spectra_dir}")

    rows: list[SweepRow] = []
    for path in sorted(spectra_dir.glob("*.json"), key=lambda p: p.name):
        try:
            report = classify_smoothness(read_spectrum(path))
        except (SeamlineError, OSError) as exc:
            logger.warning("skipping %s: %s", path.name, exc)
            rows.append(SweepRow(file_name=path.name, error=f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(SweepRow(file_name=path.name, report=report))
    return rows


# ── Helpers ───────────────────────────────────────────────────────────────────


def _check_degree(degree: int) -> None:
    if not is_power_of_two(int(degree)) or not MIN_DEGREE <= degree <= MAX_DEGREE:
        raise ConfigError(
            f"degrees must be powers of two in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}"
        )


def _sorted_degrees(degrees: Iterable[int]) -> list[int]:
    degrees = sorted({int(d) for d in degrees})
    for degree in degrees:
        _check_degree(degree)
    return degrees


def _fine_values(coeffs: np.ndarray, m: int, fine: int) -> np.ndarray:
    """Values on `fine` nodes of polynomials with coefficients at -m..m (last axis)."""
    padded = np.zeros(coeffs.shape[:-1] + (fine,), dtype=complex)
    padded[..., np.arange(-m, m + 1) % fine] = coeffs
    return fft.ifft(padded, axis=-1) * fine


def _kernel_ratio(m: int, fine: int) -> float:
    k = np.arange(1, m + 1)
    coeffs = np.zeros(2 * m + 1, dtype=complex)
    coeffs[m + k] = 1.0 / (2j * k)
    coeffs[m - k] = -1.0 / (2j * k)
    f = _fine_values(coeffs, m, fine)
    projected = coeffs.copy()
    projected[:m] = 0.0
    pf = _fine_values(projected, m, fine)

    sup = float(np.max(np.abs(f)))
    peak = pf[0]
    shift = (sup**2 / abs(peak)) * (peak / abs(peak))
    return float(np.max(np.abs(shift + pf)) / np.max(np.abs(shift + f)))


def _random_ratio(m: int, fine: int, degree: int, seed: int, trials: int) -> tuple[float, int]:
    if trials <= 0:
        return 0.0, 0
    rng = np.random.default_rng([int(seed) % 2**64, degree])
    coeffs = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=(trials, 2 * m + 1)))
    f = _fine_values(coeffs, m, fine)
    projected = coeffs.copy()
    projected[:, :m] = 0.0
    pf = _fine_values(projected, m, fine)
    ratios = np.max(np.abs(pf), axis=1) / np.max(np.abs(f), axis=1)
    best = int(np.argmax(ratios))
    return float(ratios[best]), best
