"""Jordan domains given by polynomial Riemann maps, and circle maps.

A domain is the image of D under φ(z) = c_1 z + ... + c_d z^d plus an
offset. The margin Σ_{k>=2} k|c_k| < |c_1| certifies φ univalent on D̄
with φ' != 0 there, so γ(θ) = φ(e^{iθ}) + offset parametrizes ∂Ω.

Functions on Ω are handled through their pullbacks f∘γ, i.e. as samples
on the standard θ grid. Circle homeomorphisms are lifted angle tables.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional, Union

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from core import (
    BoundarySamples,
    CircleGrid,
    CircleHomeomorphism,
    DegeneracyError,
    DiscFunction,
    ExteriorFunction,
    GridSizeError,
    HomeomorphismOrientation,
    JordanDomain,
    Orientation,
    ParamCurve,
    PreconditionError,
    QuasiSymmetryReport,
    ResolutionError,
    SeminormFamily,
    StarlikeCheck,
    TopologyError,
    TwistedSplitResult,
    UnivalenceError,
)
from core.circle_fourier import analyze, differentiate, resize, seminorm, synthesize
from core.laurent_split import conjugate_split, disc_spectrum, eval_disc, split

logger = logging.getLogger(__name__)

CONTAINMENT_TOLERANCE = 1e-9
TAIL_DECAY_LIMIT = 1e-8  # last-octave coefficients, relative to max(1, sup)
STARLIKE_GRID_SIZE = 1024

# Welding
WELDING_TABLE_SIZE = 4096
MAX_WELDING_SIZE = 2**14
NEWTON_STEPS = 2
TWISTED_CONDITION_LIMIT = 1e10

# Quasi-symmetry
MAX_TRIPLE_BUDGET = 10**6
T_BIN_DECIMALS = 12
_GOLDEN_FRACTION = 0.6180339887498949

BoundaryFunction = Union[BoundarySamples, Callable[[np.ndarray], np.ndarray]]


# ── Construction and geometry ─────────────────────────────────────────────────


def make_polynomial_domain(
    coeffs: list[complex] | tuple[complex, ...],
    center_offset: complex = 0j,
) -> JordanDomain:
    """Build a domain, enforcing c_1 != 0 and the univalence margin."""
    coefficients = tuple(complex(c) for c in coeffs)
    if not coefficients or coefficients[0] == 0:
        raise DegeneracyError("leading map coefficient c_1 must be nonzero")
    domain = JordanDomain(coefficients=coefficients, center_offset=complex(center_offset))
    if not domain.univalence_margin > 0:
        load = abs(coefficients[0]) - domain.univalence_margin
        raise UnivalenceError(
            f"Σ k|c_k| = {load:.6g} must be < |c_1| = {abs(coefficients[0]):.6g}"
        )
    return domain


def map_polynomial(domain: JordanDomain) -> Polynomial:
    """φ as a numpy Polynomial (no offset)."""
    return Polynomial((0j,) + domain.coefficients)


def boundary_points(domain: JordanDomain, grid: CircleGrid) -> np.ndarray:
    """γ(θ_j) = φ(e^{iθ_j}) + offset."""
    return _phi(domain, grid.points) + domain.center_offset


def boundary_derivative(domain: JordanDomain, grid: CircleGrid) -> np.ndarray:
    """γ'(θ_j) = i e^{iθ_j} φ'(e^{iθ_j})."""
    z = grid.points
    return 1j * z * _dphi(domain, z)


def boundary_curve(domain: JordanDomain, grid: CircleGrid) -> ParamCurve:
    """∂Ω as a positively oriented ParamCurve."""

    def parametrization(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = np.exp(1j * theta)
        return _phi(domain, z) + domain.center_offset, 1j * z * _dphi(domain, z)

    positions, derivatives = parametrization(grid.nodes)
    return ParamCurve(
        grid=grid,
        positions=positions,
        derivatives=derivatives,
        orientation=Orientation.POSITIVE,
        parametrization=parametrization,
    )


def preimage(domain: JordanDomain, z: complex) -> complex:
    """The root w of φ(w) = z - offset closest to the origin."""
    target = complex(z) - domain.center_offset
    roots = P.polyroots((-target,) + domain.coefficients)
    return complex(roots[np.argmin(np.abs(roots))])


def contains(domain: JordanDomain, z: complex) -> bool:
    """True when z lies in the closed domain."""
    return abs(preimage(domain, z)) <= 1.0 + CONTAINMENT_TOLERANCE


def starlike_check(domain: JordanDomain, grid_size: int = STARLIKE_GRID_SIZE) -> StarlikeCheck:
    """min over the grid of Re(zφ'(z)/φ(z)) on |z| = 1; star-like iff positive."""
    z = CircleGrid(grid_size).points
    values = _phi(domain, z)
    if np.any(np.abs(values) <= 1e-14 * abs(domain.coefficients[0])):
        raise DegeneracyError("φ vanishes at a boundary node")
    margin = float(np.min((z * _dphi(domain, z) / values).real))
    return StarlikeCheck(is_starlike=margin > 0, margin=margin)


# ── Boundary functions ────────────────────────────────────────────────────────


def pullback(
    domain: JordanDomain,
    f: BoundaryFunction,
    grid: Optional[CircleGrid] = None,
) -> BoundarySamples:
    """Samples of f∘γ on the standard grid.

    f is either a callable on physical boundary points or samples that
    already hold f∘γ (resampled spectrally when the grid differs).
    """
    if isinstance(f, BoundarySamples):
        if grid is None or grid.size == f.grid.size:
            return f
        return synthesize(resize(analyze(f), grid.size), grid)
    grid = grid or CircleGrid(256)
    values = np.broadcast_to(
        np.asarray(f(boundary_points(domain, grid)), dtype=complex), (grid.size,)
    )
    return BoundarySamples(grid=grid, values=values)


def pushforward(domain: JordanDomain, samples: BoundarySamples) -> tuple[np.ndarray, np.ndarray]:
    """(γ(θ_j), values_j) pairs for reporting pullback data at physical points."""
    return boundary_points(domain, samples.grid), np.array(samples.values)


def boundary_seminorm(
    domain: JordanDomain,
    f: BoundaryFunction,
    l: int,
    family: Union[SeminormFamily, str] = SeminormFamily.UNIFORM_DERIVATIVE,
    grid: Optional[CircleGrid] = None,
) -> float:
    """C^l(∂Ω) seminorm: the C^l(T) seminorm of f∘γ."""
    return seminorm(analyze(pullback(domain, f, grid)), l, family)


def boundary_complex_derivative(domain: JordanDomain, samples: BoundarySamples) -> BoundarySamples:
    """Samples of f'∘γ from f∘γ, via df/dz = (d(f∘γ)/dθ) / γ'."""
    dtheta = synthesize(differentiate(analyze(samples), 1), samples.grid).values
    return BoundarySamples(
        grid=samples.grid,
        values=dtheta / boundary_derivative(domain, samples.grid),
    )


def derivative_identity_defect(
    domain: JordanDomain,
    f: Union[Polynomial, DiscFunction],
    grid_size: int = 512,
) -> float:
    """max_j |d(f∘γ)/dθ - (f'∘γ)γ'| on the grid.

    f is a polynomial in the physical variable, or a DiscFunction holding
    F = f∘(φ + offset) on D (the analytic pullback spectrum). The left side
    always comes from spectral differentiation of the pullback; the right
    side from the complex derivative composed with γ.
    """
    grid = CircleGrid(grid_size)
    gamma_prime = boundary_derivative(domain, grid)

    if isinstance(f, DiscFunction):
        spectrum = resize(disc_spectrum(f), grid_size)
        z = grid.points
        # f'(γ) = F'(z)/φ'(z) by the chain rule
        f_prime = DiscFunction(f.grid_size, np.append(P.polyder(f.coeffs), 0j))
        rhs = eval_disc(f_prime, z) / _dphi(domain, z) * gamma_prime
    else:
        spectrum = analyze(pullback(domain, f, grid))
        rhs = f.deriv()(boundary_points(domain, grid)) * gamma_prime

    _require_decayed_tail(spectrum)
    lhs = synthesize(differentiate(spectrum, 1), grid).values
    return float(np.max(np.abs(lhs - rhs)))


def q_projection(
    domain: JordanDomain,
    f: BoundaryFunction,
    grid: Optional[CircleGrid] = None,
) -> tuple[BoundarySamples, BoundarySamples]:
    """Q(f) = P(f∘γ)∘γ^{-1}, returned in pullback coordinates.

    analytic_part holds the n >= 0 part of f∘γ; kernel_part is the rest.
    """
    samples = pullback(domain, f, grid)
    g, _ = split(analyze(samples))
    analytic = synthesize(disc_spectrum(g), samples.grid)
    kernel = BoundarySamples(grid=samples.grid, values=samples.values - analytic.values)
    return analytic, kernel


def conjugate_split_domain(
    domain: JordanDomain,
    f: BoundaryFunction,
    grid: Optional[CircleGrid] = None,
) -> tuple[BoundarySamples, BoundarySamples]:
    """f = g + conj(h) on ∂Ω with h(φ(0) + offset) = 0, as pullbacks of g and h."""
    samples = pullback(domain, f, grid)
    g, h = conjugate_split(analyze(samples))
    return (
        synthesize(disc_spectrum(g), samples.grid),
        synthesize(disc_spectrum(h), samples.grid),
    )


# ── Circle homeomorphisms ─────────────────────────────────────────────────────


def identity_homeomorphism(grid: CircleGrid) -> CircleHomeomorphism:
    return CircleHomeomorphism(grid=grid, angles=grid.nodes)


def reflection_homeomorphism(grid: CircleGrid) -> CircleHomeomorphism:
    """e^{iθ} -> e^{-iθ}."""
    return CircleHomeomorphism(
        grid=grid,
        angles=-grid.nodes,
        orientation=HomeomorphismOrientation.REVERSING,
    )


def homeomorphism_from_map(
    grid: CircleGrid,
    fn: Callable[[np.ndarray], np.ndarray],
) -> CircleHomeomorphism:
    """Lift a map T -> T (given on points) to an angle table."""
    angles = np.unwrap(np.angle(fn(grid.points)))
    turn = angles[-1] - angles[0]
    orientation = (
        HomeomorphismOrientation.PRESERVING if turn > 0 else HomeomorphismOrientation.REVERSING
    )
    return CircleHomeomorphism(grid=grid, angles=angles, orientation=orientation)


def mobius_homeomorphism(grid: CircleGrid, a: complex) -> CircleHomeomorphism:
    """Boundary values of the disc automorphism z -> (z - a)/(1 - conj(a) z)."""
    if not abs(a) < 1:
        raise PreconditionError(f"Möbius parameter must lie in D, got {a}")
    a = complex(a)
    return homeomorphism_from_map(grid, lambda z: (z - a) / (1 - a.conjugate() * z))


def boundary_argument(domain: JordanDomain, grid: CircleGrid) -> np.ndarray:
    """Lifted polar angle of γ(θ_j) about the domain center."""
    return np.unwrap(np.angle(_phi(domain, grid.points)))


def welding_compose(
    gamma_domain: JordanDomain,
    delta_table: CircleHomeomorphism,
    table_size: int = WELDING_TABLE_SIZE,
) -> CircleHomeomorphism:
    """γ^{-1}∘δ, where δ(θ) is the point of ∂Ω at polar angle ψ(θ).

    The polar angle of γ is tabulated on a fine grid, inverted by
    piecewise-linear interpolation, then polished with Newton steps on
    arg γ(θ) = ψ.
    """
    if table_size > MAX_WELDING_SIZE:
        raise PreconditionError(
            f"welding table size is capped at {MAX_WELDING_SIZE}, got {table_size}"
        )
    table_grid = CircleGrid(table_size)
    alpha = boundary_argument(gamma_domain, table_grid)
    theta_ext = np.append(table_grid.nodes, 2.0 * math.pi)
    alpha_ext = np.append(alpha, alpha[0] + 2.0 * math.pi)
    if not np.all(np.diff(alpha_ext) > 0):
        raise TopologyError("boundary argument of γ is not monotone about the center")

    targets = delta_table.angles
    turns = np.floor((targets - alpha_ext[0]) / (2.0 * math.pi))
    reduced = targets - 2.0 * math.pi * turns
    theta = np.interp(reduced, alpha_ext, theta_ext) + 2.0 * math.pi * turns

    for _ in range(NEWTON_STEPS):
        z = np.exp(1j * theta)
        values = _phi(gamma_domain, z)
        residual = np.angle(values * np.exp(-1j * targets))
        slope = (z * _dphi(gamma_domain, z) / values).real
        theta = theta - residual / slope

    logger.debug(
        "welding: %d nodes, table %d, max Newton correction %.3e",
        delta_table.grid.size, table_size, float(np.max(np.abs(residual / slope))),
    )
    return CircleHomeomorphism(
        grid=delta_table.grid,
        angles=theta,
        orientation=delta_table.orientation,
    )


def welding_roundtrip_defect(
    gamma_domain: JordanDomain,
    delta_table: CircleHomeomorphism,
    welded: CircleHomeomorphism,
) -> float:
    """max distance between γ(welded θ) and δ's boundary point on the same ray."""
    points = _phi(gamma_domain, np.exp(1j * welded.angles))
    off_ray = np.angle(points * np.exp(-1j * delta_table.angles))
    return float(np.max(np.abs(points) * np.abs(np.sin(off_ray))))


def twisted_split(samples: BoundarySamples, w: CircleHomeomorphism) -> TwistedSplitResult:
    """f = g + h∘w on T, g analytic in D, h analytic off D̄ with h(∞) = 0.

    Solved in least squares over the sampled columns e^{inθ_j}, 0 <= n < N/2,
    and e^{inψ(θ_j)}, -N/2 < n < 0. When w does not keep the two families
    apart (e.g. the reflection) the system is singular and DegeneracyError
    is raised.
    """
    if w.grid.size != samples.grid.size:
        raise GridSizeError(
            f"homeomorphism on {w.grid.size} nodes does not match data on {samples.grid.size}"
        )
    n = samples.grid.size
    half = n // 2
    columns = np.hstack(
        [
            np.exp(1j * np.outer(samples.grid.nodes, np.arange(half))),
            np.exp(1j * np.outer(w.angles, -np.arange(1, half))),
        ]
    )
    # every column has norm sqrt(N)
    condition = float(np.linalg.cond(columns))
    if not condition < TWISTED_CONDITION_LIMIT:
        raise DegeneracyError(
            f"twisted split is singular for this homeomorphism (condition {condition:.3e})"
        )
    solution, *_ = np.linalg.lstsq(columns, samples.values, rcond=None)
    residual = float(np.max(np.abs(columns @ solution - samples.values)))
    logger.debug("twisted split: condition %.3e, residual %.3e", condition, residual)
    return TwistedSplitResult(
        g=DiscFunction(n, solution[:half]),
        h=ExteriorFunction(n, np.append(solution[half:], 0j)),
        residual=residual,
        condition=condition,
    )


def quasisymmetry_estimate(
    h: CircleHomeomorphism,
    triple_budget: int = 100_000,
) -> QuasiSymmetryReport:
    """Worst ratio |h(x)-h(y)|/|h(x)-h(z)| per value of t = |x-y|/|x-z|.

    Triples of distinct nodes are enumerated exhaustively when the budget
    allows, otherwise by a fixed golden-ratio stride through the triple
    index space. t is binned by rounding to T_BIN_DECIMALS places.
    """
    if not 0 < triple_budget <= MAX_TRIPLE_BUDGET:
        raise PreconditionError(
            f"triple budget must lie in [1, {MAX_TRIPLE_BUDGET}], got {triple_budget}"
        )
    n = h.grid.size
    pairs = (n - 1) * (n - 2)
    total = n * pairs
    count = min(triple_budget, total)
    exhaustive = count == total
    if exhaustive:
        index = np.arange(total, dtype=np.int64)
    else:
        index = (np.arange(count, dtype=np.int64) * _coprime_stride(total)) % total

    a = index // pairs
    rest = index % pairs
    b = rest // (n - 2)
    c = rest % (n - 2)
    b = b + (b >= a)
    low, high = np.minimum(a, b), np.maximum(a, b)
    c = c + (c >= low)
    c = c + (c >= high)

    x = h.grid.points
    fx = np.exp(1j * h.angles)
    t = np.abs(x[a] - x[b]) / np.abs(x[a] - x[c])
    ratio = np.abs(fx[a] - fx[b]) / np.abs(fx[a] - fx[c])

    bins, inverse = np.unique(np.round(t, T_BIN_DECIMALS), return_inverse=True)
    worst = np.zeros(bins.size)
    np.maximum.at(worst, inverse, ratio)
    envelope = np.maximum.accumulate(worst)
    logger.debug("quasi-symmetry: %d triples, %d t bins", count, bins.size)

    return QuasiSymmetryReport(
        sampled_ratios=[(float(tv), float(w)) for tv, w in zip(bins, worst)],
        eta_envelope=[(float(tv), float(e)) for tv, e in zip(bins, envelope)],
        triples_examined=int(count),
        exhaustive=exhaustive,
    )


# ── Helpers ───────────────────────────────────────────────────────────────────


def _phi(domain: JordanDomain, z: np.ndarray) -> np.ndarray:
    return map_polynomial(domain)(z)


def _dphi(domain: JordanDomain, z: np.ndarray) -> np.ndarray:
    return map_polynomial(domain).deriv()(z)


def _require_decayed_tail(spectrum) -> None:
    """Coefficients in the last octave N/4 <= |n| < N/2 must be negligible."""
    magnitudes = np.abs(spectrum.coeffs)
    octave = np.abs(spectrum.indices) >= spectrum.grid_size // 4
    limit = TAIL_DECAY_LIMIT * max(1.0, float(magnitudes.max()))
    tail = float(magnitudes[octave].max())
    if tail > limit:
        raise ResolutionError(
            f"pullback spectrum not resolved: last-octave size {tail:.3e} > {limit:.3e}"
        )


def _coprime_stride(total: int) -> int:
    stride = int(total * _GOLDEN_FRACTION) | 1
    while math.gcd(stride, total) != 1:
        stride += 2
    return stride
