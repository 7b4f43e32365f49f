"""Boundary decompositions on the unit circle and evaluation of their parts.

A boundary spectrum splits into a disc part (n >= 0, analytic in D) and an
exterior part (n < 0, analytic outside D̄ and zero at infinity). The
conjugate split instead writes f = g + conj(h) with g, h both analytic in D
and h(0) = 0. The constant term always goes to the disc part.

Evaluation uses Horner's rule on the truncated series.
"""

from __future__ import annotations

from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from core import (
    DiscFunction,
    DomainError,
    ExteriorFunction,
    LaurentSpectrum,
    ShiftedExteriorFunction,
)

BOUNDARY_TOLERANCE = 1e-12

ComplexInput = Union[complex, np.ndarray]


def split(spectrum: LaurentSpectrum) -> tuple[DiscFunction, ExteriorFunction]:
    """f = g + h with g from indices n >= 0 and h from n < 0, verbatim."""
    half = spectrum.grid_size // 2
    coeffs = spectrum.coeffs
    g = DiscFunction(grid_size=spectrum.grid_size, coeffs=coeffs[half:])
    h = ExteriorFunction(grid_size=spectrum.grid_size, coeffs=coeffs[:half][::-1])
    return g, h


def conjugate_split(spectrum: LaurentSpectrum) -> tuple[DiscFunction, DiscFunction]:
    """f = g + conj(h) on the circle; h has coefficient conj(a_{-n}) at n >= 1."""
    g, exterior = split(spectrum)
    h_coeffs = np.zeros(spectrum.grid_size // 2, dtype=complex)
    # exterior.coeffs[k] = a_{-(k+1)}; the dropped last slot is the zero Nyquist
    h_coeffs[1:] = np.conj(exterior.coeffs[:-1])
    return g, DiscFunction(grid_size=spectrum.grid_size, coeffs=h_coeffs)


def disc_spectrum(g: DiscFunction) -> LaurentSpectrum:
    """Embed a disc part in the full index range."""
    half = g.grid_size // 2
    coeffs = np.concatenate([np.zeros(half, dtype=complex), g.coeffs])
    return LaurentSpectrum(grid_size=g.grid_size, coeffs=coeffs)


def exterior_spectrum(h: ExteriorFunction) -> LaurentSpectrum:
    """Embed an exterior part in the full index range."""
    half = h.grid_size // 2
    coeffs = np.concatenate([h.coeffs[::-1], np.zeros(half, dtype=complex)])
    return LaurentSpectrum(grid_size=h.grid_size, coeffs=coeffs)


def eval_disc(g: DiscFunction, z: ComplexInput) -> ComplexInput:
    """Σ a_n z^n by Horner's rule, for |z| <= 1 (+1e-12)."""
    points = np.asarray(z, dtype=complex)
    if np.any(np.abs(points) > 1.0 + BOUNDARY_TOLERANCE):
        raise DomainError("disc functions are evaluated only on the closed unit disc")
    values = P.polyval(points, g.coeffs)
    return complex(values) if values.ndim == 0 else values


def eval_exterior(h: ExteriorFunction, z: ComplexInput) -> ComplexInput:
    """Σ a_n z^n (n < 0) by Horner's rule in 1/z, for |z| >= 1 (-1e-12).

    Infinite points evaluate to 0.
    """
    points = np.asarray(z, dtype=complex)
    if np.any(np.abs(points) < 1.0 - BOUNDARY_TOLERANCE):
        raise DomainError("exterior functions are evaluated only outside the open unit disc")
    at_infinity = np.isinf(points)
    w = np.where(at_infinity, 0.0, 1.0 / np.where(at_infinity, 1.0, points))
    values = w * P.polyval(w, h.coeffs)
    return complex(values) if values.ndim == 0 else values


def exterior_value_at_infinity(h: ExteriorFunction) -> complex:
    """h(∞); zero for every exterior part."""
    return 0j


def eval_shifted_exterior(h: ShiftedExteriorFunction, z: ComplexInput) -> ComplexInput:
    """Evaluate an exterior series about h.center outside the circle of radius h.radius."""
    w = (np.asarray(z, dtype=complex) - h.center) / h.radius
    try:
        return eval_exterior(h.part, w)
    except DomainError:
        raise DomainError(
            f"point lies inside the circle |z - {h.center}| = {h.radius}"
        ) from None
