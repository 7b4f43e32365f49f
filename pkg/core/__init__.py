"""Seamline core data models.

All dataclasses, enums and exceptions live here to prevent circular imports.
Every other module in core/ imports from this file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np


# ── Exceptions ────────────────────────────────────────────────────────────────


class SeamlineError(Exception):
    """Base class for every library error. exit_code is the CLI status."""

    exit_code = 1


class InputFormatError(SeamlineError):
    """Malformed or unreadable input file."""

    exit_code = 2


class ConfigError(InputFormatError):
    """Invalid experiment configuration or command parameters."""


class GuardViolation(SeamlineError):
    """An operation's precondition or admissibility guard failed."""

    exit_code = 3


class GridSizeError(GuardViolation):
    pass


class AliasingError(GuardViolation):
    pass


class DomainError(GuardViolation):
    """Evaluation point outside the region where the object is defined."""


class ProximityError(GuardViolation):
    """Cauchy evaluation point too close to the curve nodes."""

    def __init__(self, distance: float, min_distance: float):
        self.distance = distance
        self.min_distance = min_distance
        super().__init__(
            f"point lies {distance:.3e} from the curve; "
            f"minimum admissible distance is {min_distance:.3e}"
        )


class RangeGrowthError(GuardViolation):
    pass


class UnivalenceError(GuardViolation):
    pass


class DegeneracyError(GuardViolation):
    pass


class PreconditionError(GuardViolation):
    pass


class ResolutionError(GuardViolation):
    pass


class InconsistencyError(SeamlineError):
    """Numerical results contradict each other beyond tolerance."""

    exit_code = 4


class TopologyError(InconsistencyError):
    """A curve or circle map fails injectivity or monotonicity."""


# ── Enums ─────────────────────────────────────────────────────────────────────


class DecayClass(Enum):
    """Coefficient-decay classes reported by the smoothness classifier."""

    TRIG_POLYNOMIAL = "trig-polynomial"  # tail below roundoff
    SUPER_POLYNOMIAL = "super-polynomial"  # log|a_n| linear in |n| fits best
    POWER_LAW = "power-law"  # |a_n| ~ |n|^-p
    SLOW = "slow"  # no decay detected

    @property
    def label(self) -> str:
        return {
            DecayClass.TRIG_POLYNOMIAL: "TRIG POLYNOMIAL",
            DecayClass.SUPER_POLYNOMIAL: "SUPER-POLYNOMIAL",
            DecayClass.POWER_LAW: "POWER LAW",
            DecayClass.SLOW: "SLOW",
        }[self]


class SeminormFamily(Enum):
    SUP = "sup"  # sup_n |n^l a_n|
    SUM = "sum"  # |a_0| + sum_{n != 0} |n^l a_n|
    UNIFORM_DERIVATIVE = "uniform-derivative"  # max_j |d^l f / dθ^l (θ_j)|


class PhiVariant(Enum):
    """Which incarnation of the smoothing isomorphism to apply.

    The tag fixes the admissible input: a LaurentSpectrum for CIRCLE,
    a DiscFunction for DISC, an ExteriorFunction for EXTERIOR.
    """

    CIRCLE = "circle"
    DISC = "disc"
    EXTERIOR = "exterior"


class Orientation(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @property
    def sign(self) -> int:
        return 1 if self is Orientation.POSITIVE else -1


class HomeomorphismOrientation(Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"

    @property
    def sign(self) -> int:
        return 1 if self is HomeomorphismOrientation.PRESERVING else -1


class ProbeRegion(Enum):
    """Approach region for probes at the tangency point."""

    DISC = "disc"  # straight approach inside D
    OMEGA = "omega"  # tangential approach between the two circles
    EXTERIOR = "exterior"  # straight approach from outside D


class ProbeCurve(Enum):
    """Which circle of a tangent domain carries the Cauchy transform."""

    OUTER = "outer"  # the unit circle
    INNER = "inner"  # the inner circle, positively oriented


class Command(Enum):
    SPLIT = "split"
    CONJ_SPLIT = "conj-split"
    PHI = "phi"
    CLASSIFY = "classify"
    CAUCHY = "cauchy"
    JUMP_CHECK = "jump-check"
    TANGENT_SPLIT = "tangent-split"
    PROBE_TANGENT = "probe-tangent"
    RIESZ_NORM = "riesz-norm"
    WELDING_CHECK = "welding-check"
    QS_ESTIMATE = "qs-estimate"


# ── Helpers ───────────────────────────────────────────────────────────────────


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _frozen_array(values: Any, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


# ── Circle sampling ───────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CircleGrid:
    """Uniform grid θ_j = 2πj/N on the unit circle, N a power of two ≥ 4."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or isinstance(self.size, bool):
            raise GridSizeError(f"grid size must be an integer, got {self.size!r}")
        if self.size < 4 or not is_power_of_two(int(self.size)):
            raise GridSizeError(
                f"grid size must be a power of two >= 4, got {self.size}"
            )

    @property
    def nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def points(self) -> np.ndarray:
        """The nodes as points e^{iθ_j} of the unit circle."""
        return np.exp(1j * self.nodes)


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    """Complex samples of a function on a closed curve, one per grid node."""

    grid: CircleGrid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.size != self.grid.size:
            raise GridSizeError(
                f"{values.size} samples do not match grid size {self.grid.size}"
            )
        if not np.all(np.isfinite(values)):
            raise PreconditionError("samples contain non-finite values")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class LaurentSpectrum:
    """Coefficients a_n for n in [-N/2, N/2), stored in index order.

    coeffs[0] is the Nyquist slot n = -N/2 and is always zero.
    """

    grid_size: int
    coeffs: np.ndarray

    def __post_init__(self):
        CircleGrid(self.grid_size)
        coeffs = _frozen_array(self.coeffs)
        if coeffs.size != self.grid_size:
            raise GridSizeError(
                f"{coeffs.size} coefficients do not match grid size {self.grid_size}"
            )
        if coeffs[0] != 0:
            raise AliasingError(
                f"index {-self.grid_size // 2} is the Nyquist slot and must be zero"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def indices(self) -> np.ndarray:
        half = self.grid_size // 2
        return np.arange(-half, half)

    def __getitem__(self, n: int) -> complex:
        half = self.grid_size // 2
        if -half <= n < half:
            return complex(self.coeffs[n + half])
        return 0j

    @classmethod
    def zeros(cls, grid_size: int) -> LaurentSpectrum:
        return cls(grid_size=grid_size, coeffs=np.zeros(grid_size, dtype=complex))

    @classmethod
    def from_mapping(cls, mapping: dict[int, complex], grid_size: int) -> LaurentSpectrum:
        half = grid_size // 2
        coeffs = np.zeros(grid_size, dtype=complex)
        for n, value in mapping.items():
            if not -half < int(n) < half:
                raise AliasingError(
                    f"index {n} outside the admissible range (-{half}, {half}) "
                    f"for grid size {grid_size}"
                )
            coeffs[int(n) + half] = complex(value)
        return cls(grid_size=grid_size, coeffs=coeffs)

    def to_mapping(self) -> dict[int, complex]:
        """Nonzero coefficients keyed by index, in increasing index order."""
        return {
            int(n): complex(c)
            for n, c in zip(self.indices, self.coeffs)
            if c != 0
        }


@dataclass
class SmoothnessReport:
    """Coefficient-decay diagnostic for one spectrum."""

    decay_class: DecayClass
    estimated_exponent: Optional[float] = None  # only for POWER_LAW
    fit_quality: Optional[float] = None  # R² of the winning fit, in [0, 1]
    # (l, sup_n |n^l a_n|) pairs
    tail_norms: list[tuple[int, float]] = field(default_factory=list)


# ── One-sided series ──────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class DiscFunction:
    """Power series sum_{n>=0} a_n z^n; coeffs[k] holds a_k, k < N/2."""

    grid_size: int
    coeffs: np.ndarray

    def __post_init__(self):
        CircleGrid(self.grid_size)
        coeffs = _frozen_array(self.coeffs)
        if coeffs.size != self.grid_size // 2:
            raise GridSizeError(
                f"disc part of grid size {self.grid_size} holds "
                f"{self.grid_size // 2} coefficients, got {coeffs.size}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.grid_size // 2)

    def __getitem__(self, n: int) -> complex:
        if 0 <= n < self.grid_size // 2:
            return complex(self.coeffs[n])
        return 0j

    @classmethod
    def from_mapping(cls, mapping: dict[int, complex], grid_size: int) -> DiscFunction:
        coeffs = np.zeros(grid_size // 2, dtype=complex)
        for n, value in mapping.items():
            if not 0 <= int(n) < grid_size // 2:
                raise AliasingError(
                    f"index {n} outside [0, {grid_size // 2}) for a disc function"
                )
            coeffs[int(n)] = complex(value)
        return cls(grid_size=grid_size, coeffs=coeffs)

    def to_mapping(self) -> dict[int, complex]:
        return {int(n): complex(c) for n, c in enumerate(self.coeffs) if c != 0}


@dataclass(frozen=True, eq=False)
class ExteriorFunction:
    """Series sum_{n<0} a_n z^n vanishing at infinity.

    coeffs[k] holds a_{-(k+1)}; the last slot (n = -N/2) is always zero.
    """

    grid_size: int
    coeffs: np.ndarray

    def __post_init__(self):
        CircleGrid(self.grid_size)
        coeffs = _frozen_array(self.coeffs)
        if coeffs.size != self.grid_size // 2:
            raise GridSizeError(
                f"exterior part of grid size {self.grid_size} holds "
                f"{self.grid_size // 2} coefficients, got {coeffs.size}"
            )
        if coeffs[-1] != 0:
            raise AliasingError(
                f"index {-self.grid_size // 2} is the Nyquist slot and must be zero"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def indices(self) -> np.ndarray:
        return -np.arange(1, self.grid_size // 2 + 1)

    def __getitem__(self, n: int) -> complex:
        if -self.grid_size // 2 <= n < 0:
            return complex(self.coeffs[-n - 1])
        return 0j

    @classmethod
    def from_mapping(cls, mapping: dict[int, complex], grid_size: int) -> ExteriorFunction:
        half = grid_size // 2
        coeffs = np.zeros(half, dtype=complex)
        for n, value in mapping.items():
            if not -half < int(n) < 0:
                raise AliasingError(
                    f"index {n} outside (-{half}, 0) for an exterior function"
                )
            coeffs[-int(n) - 1] = complex(value)
        return cls(grid_size=grid_size, coeffs=coeffs)

    def to_mapping(self) -> dict[int, complex]:
        return {-(k + 1): complex(c) for k, c in enumerate(self.coeffs) if c != 0}


@dataclass(frozen=True, eq=False)
class ShiftedExteriorFunction:
    """Exterior series about `center`, in the scaled variable w = (z - center)/radius."""

    center: complex
    radius: float
    part: ExteriorFunction

    def laurent_coefficients(self) -> dict[int, complex]:
        """Coefficients b_n of sum_{n<0} b_n (z - center)^n."""
        return {
            n: value * self.radius ** (-n)
            for n, value in self.part.to_mapping().items()
        }


# ── Curves and probes ─────────────────────────────────────────────────────────


# θ array -> (positions, derivatives)
Parametrization = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True, eq=False)
class ParamCurve:
    """Closed curve sampled on a uniform θ grid, with dζ/dθ at each node.

    Positions always follow the θ parametrization; orientation only flips
    the sign of integrals over the curve.
    """

    grid: CircleGrid
    positions: np.ndarray
    derivatives: np.ndarray
    orientation: Orientation = Orientation.POSITIVE
    # Exact geometry for grid refinement; spectral interpolation when absent
    parametrization: Optional[Parametrization] = None

    def __post_init__(self):
        positions = _frozen_array(self.positions)
        derivatives = _frozen_array(self.derivatives)
        if positions.size != self.grid.size or derivatives.size != self.grid.size:
            raise GridSizeError("curve data does not match its grid size")
        if np.any(derivatives == 0):
            raise DegeneracyError("curve derivative vanishes at a node")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "derivatives", derivatives)


@dataclass(frozen=True, eq=False)
class TangentDomain:
    """Unit disc minus a smaller disc internally tangent at 1."""

    radius: float  # inner radius r, 0 < r < 1
    outer: ParamCurve  # unit circle, positive
    inner: ParamCurve  # |z - (1 - r)| = r, negative

    tangency_point: complex = 1 + 0j

    @property
    def inner_center(self) -> complex:
        return complex(1.0 - self.radius)


@dataclass(frozen=True, eq=False)
class TangentSplitResult:
    g: DiscFunction
    h: ShiftedExteriorFunction
    outer_defect: float
    inner_defect: float


@dataclass(frozen=True, eq=False)
class TwistedSplitResult:
    """f = g + h∘w on the circle, solved in least squares."""

    g: DiscFunction
    h: ExteriorFunction
    residual: float
    condition: float


@dataclass
class ProbeReport:
    """Cauchy-transform values along an approach to a boundary point."""

    approach_radii: list[float] = field(default_factory=list)
    values: list[complex] = field(default_factory=list)
    limit_estimate: Optional[complex] = None  # None iff divergence_flag
    divergence_flag: bool = False
    oscillation_measure: float = 0.0
    complete: bool = True  # False when refinement hit the grid cap
    grid_sizes: list[int] = field(default_factory=list)


# ── Jordan domains and circle maps ────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class JordanDomain:
    """Image of the unit disc under φ(z) = c_1 z + ... + c_d z^d, shifted.

    Build through jordan_domain.make_polynomial_domain to have the
    univalence margin enforced.
    """

    coefficients: tuple[complex, ...]  # c_1 .. c_d
    center_offset: complex = 0j

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    @property
    def univalence_margin(self) -> float:
        """|c_1| - sum_{k>=2} k|c_k|; positive for admissible domains."""
        load = sum(k * abs(c) for k, c in enumerate(self.coefficients[1:], start=2))
        return abs(self.coefficients[0]) - load


@dataclass(frozen=True)
class StarlikeCheck:
    is_starlike: bool
    margin: float  # min over the grid of Re(zφ'(z)/φ(z)) on |z| = 1


@dataclass(frozen=True, eq=False)
class CircleHomeomorphism:
    """Lifted angle table ψ(θ_j) of a circle homeomorphism.

    The lift is strictly monotone and ψ(θ + 2π) = ψ(θ) ± 2π.
    """

    grid: CircleGrid
    angles: np.ndarray
    orientation: HomeomorphismOrientation = HomeomorphismOrientation.PRESERVING

    def __post_init__(self):
        angles = _frozen_array(self.angles, dtype=float)
        if angles.size != self.grid.size:
            raise GridSizeError("angle table does not match its grid size")
        if not np.all(np.isfinite(angles)):
            raise TopologyError("angle table contains non-finite values")
        sign = self.orientation.sign
        steps = np.diff(angles, append=angles[0] + sign * 2.0 * math.pi)
        if not np.all(sign * steps > 0):
            raise TopologyError(
                f"angle table is not strictly "
                f"{'increasing' if sign > 0 else 'decreasing'} over one turn"
            )
        object.__setattr__(self, "angles", angles)


@dataclass
class QuasiSymmetryReport:
    # (t, worst ratio) per t bin, increasing t
    sampled_ratios: list[tuple[float, float]] = field(default_factory=list)
    # (t, η(t)) nondecreasing
    eta_envelope: list[tuple[float, float]] = field(default_factory=list)
    triples_examined: int = 0
    exhaustive: bool = False


# ── Experiments ───────────────────────────────────────────────────────────────


@dataclass
class ExperimentConfig:
    """One CLI invocation: command, grid, seed, paths and extra parameters."""

    command: Command
    grid_size: int = 256
    seed: int = 0
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    # radii, target, direction, degrees, variant, ... (see core.runner)
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.command, Command):
            try:
                self.command = Command(self.command)
            except ValueError:
                raise ConfigError(f"unknown command: {self.command!r}") from None
        if (
            not isinstance(self.grid_size, int)
            or not is_power_of_two(self.grid_size)
            or not 16 <= self.grid_size <= 65536
        ):
            raise ConfigError(
                f"grid size must be a power of two in [16, 65536], got {self.grid_size}"
            )
        if not -(2**63) <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")


@dataclass
class RieszNormRow:
    degree: int
    estimated_norm: float  # >= 1
    witness_seed: int  # random trial index, -1 for the kernel construction
    kernel_ratio: float = 0.0
    random_ratio: float = 0.0


@dataclass
class GrowthFit:
    """norm ≈ slope · ln N + intercept."""

    slope: float
    intercept: float
    r_squared: float


@dataclass
class SweepRow:
    file_name: str
    report: Optional[SmoothnessReport] = None
    error: Optional[str] = None  # set when the file could not be classified


@dataclass
class CommandOutcome:
    """What one command produced: the document text and a terminal summary."""

    text: str
    summary: list[tuple[str, str]] = field(default_factory=list)
    # optional table for the summary: column names and stringified rows
    columns: list[str] = field(default_factory=list)
    rows: list[list[str]] = field(default_factory=list)
    # reported on stderr after the document is written
    error: Optional[SeamlineError] = None

    @property
    def exit_code(self) -> int:
        return 0 if self.error is None else self.error.exit_code
