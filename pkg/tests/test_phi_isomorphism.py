"""Tests for the smoothing isomorphism Φ and antiderivatives."""

import numpy as np
import pytest

from core import (
    CircleGrid,
    DiscFunction,
    DomainError,
    ExteriorFunction,
    JordanDomain,
    LaurentSpectrum,
    PreconditionError,
    RangeGrowthError,
)
from core.circle_fourier import seminorm, synthesize
from core.jordan_domain import boundary_points, make_polynomial_domain
from core.laurent_split import disc_spectrum, exterior_spectrum, split
from core.phi_isomorphism import (
    antiderivative_disc,
    antiderivative_starlike,
    complex_derivative,
    phi_circle,
    phi_circle_inverse,
    phi_disc,
    phi_disc_inverse,
    phi_exterior,
    phi_exterior_inverse,
)


# ── Helpers ───────────────────────────────────────────────────────────────────


def _random_spectrum(seed: int, n: int = 64) -> LaurentSpectrum:
    rng = np.random.default_rng(seed)
    k = np.arange(-n // 2 + 1, n // 2)
    values = rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)
    return LaurentSpectrum.from_mapping(dict(zip(k.tolist(), values)), n)


def _disc(mapping: dict, n: int = 16) -> DiscFunction:
    return DiscFunction.from_mapping(mapping, n)


def _assert_within_one_ulp(actual: np.ndarray, expected: np.ndarray) -> None:
    """Real and imaginary parts each within one ulp of the expected part."""
    for part in (np.real, np.imag):
        gap = np.abs(part(actual) - part(expected))
        assert np.all(gap <= np.spacing(np.abs(part(expected)))), float(gap.max())


# ── Circle ────────────────────────────────────────────────────────────────────


def test_phi_circle_examples():
    """e^{iθ} → i e^{iθ}; c → c; e^{-2iθ} → -2i e^{-2iθ}."""
    assert phi_circle(LaurentSpectrum.from_mapping({1: 1.0}, 16)).to_mapping() == {1: 1j}
    assert phi_circle(LaurentSpectrum.from_mapping({0: 4.0}, 16)).to_mapping() == {0: 4.0}
    assert phi_circle(LaurentSpectrum.from_mapping({-2: 1.0}, 16)).to_mapping() == {-2: -2j}


def test_phi_circle_inverse_examples():
    """i e^{iθ} → e^{iθ}; c → c."""
    assert phi_circle_inverse(LaurentSpectrum.from_mapping({1: 1j}, 16)).to_mapping() == {1: 1.0}
    assert phi_circle_inverse(LaurentSpectrum.from_mapping({0: 4.0}, 16)).to_mapping() == {0: 4.0}


@pytest.mark.parametrize("seed", range(5))
def test_phi_circle_round_trip(seed):
    """Φ∘Φ^{-1} and Φ^{-1}∘Φ return every coefficient within one ulp per part."""
    spectrum = _random_spectrum(seed)
    _assert_within_one_ulp(phi_circle(phi_circle_inverse(spectrum)).coeffs, spectrum.coeffs)
    _assert_within_one_ulp(phi_circle_inverse(phi_circle(spectrum)).coeffs, spectrum.coeffs)


def test_phi_round_trip_one_ulp_at_every_index():
    """Indices whose reciprocal is inexact still come back within one ulp."""
    n = 128
    mapping = {}
    for k in range(1, n // 2):
        mapping[k] = 1.0
        mapping[-k] = 0.3 + 0.7j
    spectrum = LaurentSpectrum.from_mapping(mapping, n)
    _assert_within_one_ulp(phi_circle(phi_circle_inverse(spectrum)).coeffs, spectrum.coeffs)
    _assert_within_one_ulp(phi_circle_inverse(phi_circle(spectrum)).coeffs, spectrum.coeffs)

    restored = phi_disc(phi_disc_inverse(_disc({49: 1.0}, n)))
    assert abs(restored.coeffs[49] - 1.0) <= np.spacing(1.0)


def test_phi_inverse_is_strictly_smoothing():
    """k applications of Φ^{-1} scale the sup seminorm of e^{iNθ} by N^{-k}."""
    spectrum = LaurentSpectrum.from_mapping({16: 1.0}, 64)
    for k in range(1, 5):
        spectrum = phi_circle_inverse(spectrum)
        assert seminorm(spectrum, 0, "sup") == 16.0**-k


# ── Disc and exterior ─────────────────────────────────────────────────────────


@pytest.mark.parametrize("n", [1, 2, 5])
def test_phi_disc_monomial(n):
    """z^n → i n z^n."""
    assert phi_disc(_disc({n: 1.0})).to_mapping() == {n: 1j * n}


def test_phi_disc_examples():
    """1 → 1 and 3 + z² → 3 + 2i z²."""
    assert phi_disc(_disc({0: 1.0})).to_mapping() == {0: 1.0}
    assert phi_disc(_disc({0: 3.0, 2: 1.0})).to_mapping() == {0: 3.0, 2: 2j}


def test_phi_disc_inverse_examples():
    """i z → z; 1 → 1; z³ → -i z³/3."""
    assert phi_disc_inverse(_disc({1: 1j})).to_mapping() == {1: 1.0}
    assert phi_disc_inverse(_disc({0: 1.0})).to_mapping() == {0: 1.0}
    result = phi_disc_inverse(_disc({3: 1.0}))
    assert result[3] == pytest.approx(-1j / 3, rel=1e-15)


def test_phi_disc_round_trip():
    """Φ_D∘Φ_D^{-1} is the identity within one ulp per part."""
    g, _ = split(_random_spectrum(8))
    _assert_within_one_ulp(phi_disc(phi_disc_inverse(g)).coeffs, g.coeffs)


def test_phi_exterior_examples():
    """1/z → -i/z; z^{-3} → -3i z^{-3}."""
    assert phi_exterior(ExteriorFunction.from_mapping({-1: 1.0}, 16)).to_mapping() == {-1: -1j}
    assert phi_exterior(ExteriorFunction.from_mapping({-3: 1.0}, 16)).to_mapping() == {-3: -3j}


def test_phi_exterior_round_trip():
    """Φ_E^{-1}∘Φ_E is the identity within one ulp per part."""
    _, h = split(_random_spectrum(9))
    _assert_within_one_ulp(phi_exterior_inverse(phi_exterior(h)).coeffs, h.coeffs)


def test_restriction_coherence():
    """Φ on the circle restricts exactly to Φ on each side."""
    g, h = split(_random_spectrum(10))
    on_disc, _ = split(phi_circle(disc_spectrum(g)))
    _, on_exterior = split(phi_circle(exterior_spectrum(h)))
    assert np.array_equal(on_disc.coeffs, phi_disc(g).coeffs)
    assert np.array_equal(on_exterior.coeffs, phi_exterior(h).coeffs)


def test_boundary_formula():
    """synthesize(Φ_D f) equals i e^{iθ} f'(e^{iθ}) + f(0) on the grid."""
    rng = np.random.default_rng(12)
    grid = CircleGrid(512)
    coeffs = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    f = DiscFunction.from_mapping(dict(enumerate(coeffs)), 512)
    spectral = synthesize(disc_spectrum(phi_disc(f)), grid).values

    z = grid.points
    derivative = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(coeffs))
    direct = 1j * z * derivative + coeffs[0]
    assert np.max(np.abs(spectral - direct)) <= 1e-10


# ── Derivatives and antiderivatives ───────────────────────────────────────────


def test_complex_derivative():
    """(1 + 2z + 3z²)' = 2 + 6z."""
    assert complex_derivative(_disc({0: 1.0, 1: 2.0, 2: 3.0})).to_mapping() == {0: 2.0, 1: 6.0}


def test_antiderivative_disc_examples():
    """1 → z; 2z → z²; z² → z³/3."""
    assert antiderivative_disc(_disc({0: 1.0})).to_mapping() == {1: 1.0}
    assert antiderivative_disc(_disc({1: 2.0})).to_mapping() == {2: 1.0}
    assert antiderivative_disc(_disc({2: 1.0}))[3] == pytest.approx(1 / 3)


def test_antiderivative_then_derivative():
    """Differentiating the antiderivative returns each coefficient within one ulp."""
    rng = np.random.default_rng(13)
    coeffs = rng.standard_normal(31) + 1j * rng.standard_normal(31)
    f = DiscFunction.from_mapping(dict(enumerate(coeffs)), 64)
    _assert_within_one_ulp(complex_derivative(antiderivative_disc(f)).coeffs, f.coeffs)


def test_antiderivative_range_growth():
    """A nonzero top coefficient has no room for its antiderivative."""
    with pytest.raises(RangeGrowthError):
        antiderivative_disc(_disc({7: 1.0}))


def test_antiderivative_starlike_disc():
    """On the unit disc, ∫ 1 = z and ∫ 2ζ = z²."""
    disc = make_polynomial_domain([1.0])
    z = 0.3 + 0.4j
    assert antiderivative_starlike(disc, np.ones_like, z) == pytest.approx(z, abs=1e-14)
    assert antiderivative_starlike(disc, lambda w: 2 * w, z) == pytest.approx(-0.07 + 0.24j, abs=1e-14)


def test_antiderivative_starlike_polynomial_domain():
    """∫ ζ² to boundary points of a polynomial domain is z³/3."""
    domain = make_polynomial_domain([1.0, 0.2])
    for z in boundary_points(domain, CircleGrid(16)):
        value = antiderivative_starlike(domain, lambda w: w**2, z)
        assert value == pytest.approx(z**3 / 3, abs=1e-10)


def test_antiderivative_starlike_outside():
    """Points outside the domain are rejected."""
    with pytest.raises(DomainError):
        antiderivative_starlike(make_polynomial_domain([1.0]), np.ones_like, 1.5)


def test_antiderivative_starlike_requires_starlike():
    """A domain that is not star-like about its center is rejected."""
    domain = JordanDomain(coefficients=(1.0, 0.9))
    with pytest.raises(PreconditionError):
        antiderivative_starlike(domain, np.ones_like, 0.1)
