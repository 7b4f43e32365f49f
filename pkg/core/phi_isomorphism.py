"""The smoothing isomorphism Φ(f) = df/dθ + f̂(0) and its relatives.

All maps act coefficientwise: index n != 0 is multiplied by (in) and the
constant term is left alone. The circle, disc and exterior variants share
one kernel, so restricting the circle map to a one-sided spectrum gives
bit-identical results to the one-sided maps.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np
from numpy.polynomial import legendre

from core import (
    DiscFunction,
    DomainError,
    ExteriorFunction,
    JordanDomain,
    LaurentSpectrum,
    PreconditionError,
    RangeGrowthError,
)
from core.jordan_domain import contains, starlike_check

logger = logging.getLogger(__name__)

QUADRATURE_ORDER = 64


def phi_circle(s: LaurentSpectrum) -> LaurentSpectrum:
    return LaurentSpectrum(s.grid_size, _times_in(s.coeffs, s.indices))


def phi_circle_inverse(s: LaurentSpectrum) -> LaurentSpectrum:
    return LaurentSpectrum(s.grid_size, _over_in(s.coeffs, s.indices))


def phi_disc(f: DiscFunction) -> DiscFunction:
    """Φ(f)(z) = i z f'(z) + f(0)."""
    return DiscFunction(f.grid_size, _times_in(f.coeffs, f.indices))


def phi_disc_inverse(g: DiscFunction) -> DiscFunction:
    return DiscFunction(g.grid_size, _over_in(g.coeffs, g.indices))


def phi_exterior(f: ExteriorFunction) -> ExteriorFunction:
    """Φ(f)(z) = i z f'(z); exterior parts have no constant term."""
    return ExteriorFunction(f.grid_size, _times_in(f.coeffs, f.indices))


def phi_exterior_inverse(f: ExteriorFunction) -> ExteriorFunction:
    return ExteriorFunction(f.grid_size, _over_in(f.coeffs, f.indices))


def complex_derivative(f: DiscFunction) -> DiscFunction:
    """f'(z): coefficient n becomes (n+1) a_{n+1}."""
    out = np.zeros_like(f.coeffs)
    out[:-1] = _scale_parts(f.coeffs[1:], np.arange(1, f.coeffs.size), np.multiply)
    return DiscFunction(f.grid_size, out)


def antiderivative_disc(f: DiscFunction) -> DiscFunction:
    """F(z) = ∫_[0,z] f, so F(0) = 0 and coefficient n+1 is a_n/(n+1)."""
    if f.coeffs[-1] != 0:
        raise RangeGrowthError(
            f"antiderivative of degree {f.coeffs.size} does not fit grid size "
            f"{f.grid_size}; re-grid to {2 * f.grid_size} first"
        )
    out = np.zeros_like(f.coeffs)
    out[1:] = _scale_parts(f.coeffs[:-1], np.arange(1, f.coeffs.size), np.divide)
    return DiscFunction(f.grid_size, out)


def antiderivative_starlike(
    domain: JordanDomain,
    f: Callable[[np.ndarray], np.ndarray],
    z: complex,
) -> complex:
    """∫ f(ζ) dζ along the segment from the domain center to z.

    Gauss-Legendre quadrature with QUADRATURE_ORDER nodes; f must accept
    arrays of complex points.
    """
    check = starlike_check(domain)
    if not check.is_starlike:
        raise PreconditionError(
            f"domain is not star-like about its center (margin {check.margin:.3e})"
        )
    if not contains(domain, z):
        raise DomainError(f"{z} lies outside the closed domain")

    nodes, weights = legendre.leggauss(QUADRATURE_ORDER)
    center = domain.center_offset
    half_step = 0.5 * (complex(z) - center)
    path = center + half_step * (nodes + 1.0)
    values = np.asarray(f(path), dtype=complex)
    return complex(half_step * np.sum(weights * values))


# ── Helpers ───────────────────────────────────────────────────────────────────


def _times_in(coeffs: np.ndarray, indices: np.ndarray) -> np.ndarray:
    out = np.array(coeffs, dtype=complex)
    moving = indices != 0
    # real scaling first, then the exact quarter turn
    out[moving] = 1j * _scale_parts(coeffs[moving], indices[moving], np.multiply)
    return out


def _over_in(coeffs: np.ndarray, indices: np.ndarray) -> np.ndarray:
    out = np.array(coeffs, dtype=complex)
    moving = indices != 0
    out[moving] = -1j * _scale_parts(coeffs[moving], indices[moving], np.divide)
    return out


def _scale_parts(values: np.ndarray, indices: np.ndarray, op) -> np.ndarray:
    """op on the real and imaginary parts separately, each rounded once.

    Φ∘Φ^{-1} and Φ^{-1}∘Φ then stay within one ulp per part.
    """
    n = indices.astype(float)
    out = np.empty(values.shape, dtype=complex)
    out.real = op(values.real, n)
    out.imag = op(values.imag, n)
    return out
