"""Command dispatch: ExperimentConfig in, documents and exit status out.

Each command handler reads its inputs, calls the computational modules
and returns a CommandOutcome. run() writes the document to --out (plus a
Rich summary) or to stdout, and turns library errors into a JSON error
record on stderr with the error's exit status.
"""

from __future__ import annotations

import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, TextIO

import numpy as np
from rich.console import Console

from core import (
    BoundarySamples,
    CircleGrid,
    CircleHomeomorphism,
    Command,
    CommandOutcome,
    ConfigError,
    DiscFunction,
    ExperimentConfig,
    ExteriorFunction,
    InconsistencyError,
    InputFormatError,
    JordanDomain,
    PhiVariant,
    ProbeCurve,
    ProbeRegion,
    SeamlineError,
)
from core import cauchy_transform, circle_fourier, experiments, formats, jordan_domain
from core import laurent_split, phi_isomorphism
from core.output import render_error, render_summary, riesz_rows, sweep_rows

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 256
DEFAULT_RADII = (0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125)
DEFAULT_DEGREES = (8, 16, 32, 64, 128, 256, 512, 1024)
DEFAULT_TANGENT_RADIUS = 0.25
JUMP_TOLERANCE = 1e-10
CONFIG_KEYS = {"n", "seed", "in", "out"}


# ── Entry points ──────────────────────────────────────────────────────────────


def build_config(
    command: str,
    options: dict[str, Any],
    config_path: Optional[Path] = None,
) -> ExperimentConfig:
    """Merge a YAML config with CLI options (CLI wins, None means unset)."""
    values: dict[str, Any] = {}
    if config_path is not None:
        values.update(formats.load_config(config_path))
    values.update({k: v for k, v in options.items() if v is not None})

    params = {k: v for k, v in values.items() if k not in CONFIG_KEYS}
    try:
        grid_size = int(values.get("n", DEFAULT_GRID_SIZE))
        seed = int(values.get("seed", 0))
    except (TypeError, ValueError):
        raise ConfigError("n and seed must be integers") from None
    return ExperimentConfig(
        command=command,
        grid_size=grid_size,
        seed=seed,
        input_path=_path(values.get("in")),
        output_path=_path(values.get("out")),
        params=params,
    )


def run_command(
    command: str,
    options: dict[str, Any],
    config_path: Optional[Path] = None,
    console: Optional[Console] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """build_config + run, with configuration errors reported like any other."""
    try:
        config = build_config(command, options, config_path)
    except SeamlineError as exc:
        _report_error(command, exc, stderr)
        return exc.exit_code
    return run(config, console=console, stdout=stdout, stderr=stderr)


def run(
    config: ExperimentConfig,
    console: Optional[Console] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Execute one command; returns the process exit status."""
    handler = HANDLERS[config.command]
    logger.debug("running %s with N=%d seed=%d", config.command.value, config.grid_size, config.seed)
    try:
        outcome = handler(config)
        if config.output_path is not None:
            formats.write_text(outcome.text, config.output_path)
            if console is not None:
                render_summary(console, config, outcome)
        else:
            (stdout or sys.stdout).write(outcome.text)
    except SeamlineError as exc:
        if console is not None and config.output_path is not None:
            render_error(console, config.command.value, exc)
        _report_error(config.command.value, exc, stderr)
        return exc.exit_code
    if outcome.error is not None:
        _report_error(config.command.value, outcome.error, stderr)
    return outcome.exit_code


# ── Handlers ──────────────────────────────────────────────────────────────────


def _split(config: ExperimentConfig) -> CommandOutcome:
    samples = formats.read_samples(_input(config))
    spectrum = circle_fourier.analyze(samples)
    g, h = laurent_split.split(spectrum)
    return CommandOutcome(
        text=formats.dumps({"g": formats.spectrum_to_dict(g), "h": formats.spectrum_to_dict(h)}),
        summary=[
            ("Grid size", str(samples.grid.size)),
            ("Disc terms", str(len(g.to_mapping()))),
            ("Exterior terms", str(len(h.to_mapping()))),
        ],
    )


def _conj_split(config: ExperimentConfig) -> CommandOutcome:
    samples = formats.read_samples(_input(config))
    g, h = laurent_split.conjugate_split(circle_fourier.analyze(samples))
    return CommandOutcome(
        text=formats.dumps({"g": formats.spectrum_to_dict(g), "h": formats.spectrum_to_dict(h)}),
        summary=[
            ("Grid size", str(samples.grid.size)),
            ("g terms", str(len(g.to_mapping()))),
            ("h terms", str(len(h.to_mapping()))),
        ],
    )


def _phi(config: ExperimentConfig) -> CommandOutcome:
    spectrum = formats.read_spectrum(_input(config))
    variant = _enum(PhiVariant, config.params.get("variant", "circle"), "variant")
    inverse = bool(config.params.get("inverse", False))

    if variant is PhiVariant.CIRCLE:
        fn = phi_isomorphism.phi_circle_inverse if inverse else phi_isomorphism.phi_circle
        result = fn(spectrum)
    elif variant is PhiVariant.DISC:
        fn = phi_isomorphism.phi_disc_inverse if inverse else phi_isomorphism.phi_disc
        result = fn(DiscFunction.from_mapping(spectrum.to_mapping(), spectrum.grid_size))
    else:
        fn = phi_isomorphism.phi_exterior_inverse if inverse else phi_isomorphism.phi_exterior
        result = fn(ExteriorFunction.from_mapping(spectrum.to_mapping(), spectrum.grid_size))

    return CommandOutcome(
        text=formats.dumps(formats.spectrum_to_dict(result)),
        summary=[
            ("Variant", variant.value + (" (inverse)" if inverse else "")),
            ("Nonzero terms", str(len(result.to_mapping()))),
        ],
    )


def _classify(config: ExperimentConfig) -> CommandOutcome:
    source = _input(config)
    if source.is_dir():
        rows = experiments.classify_sweep(source)
        failed = sum(1 for row in rows if row.error)
        error = None
        if failed:
            error = InputFormatError(f"{failed} of {len(rows)} files could not be classified")
        return CommandOutcome(
            text=formats.sweep_csv(rows),
            summary=[("Files", str(len(rows))), ("Failed", str(failed))],
            columns=["File", "Class", "Exponent", "R²"],
            rows=sweep_rows(rows),
            error=error,
        )

    report = circle_fourier.classify_smoothness(formats.read_spectrum(source))
    summary = [("Decay class", report.decay_class.label)]
    if report.estimated_exponent is not None:
        summary.append(("Exponent", f"{report.estimated_exponent:.4f}"))
    if report.fit_quality is not None:
        summary.append(("Fit quality", f"{report.fit_quality:.6f}"))
    return CommandOutcome(text=formats.dumps(formats.smoothness_to_dict(report)), summary=summary)


def _cauchy(config: ExperimentConfig) -> CommandOutcome:
    samples = _boundary_data(config)
    domain = _optional_domain(config)
    if domain is None:
        curve = cauchy_transform.unit_circle(samples.grid)
    else:
        curve = jordan_domain.boundary_curve(domain, samples.grid)
    points = _complex_list(config.params.get("points"), "points")
    if not points:
        raise ConfigError("cauchy needs at least one evaluation point (--points)")

    values = [cauchy_transform.cauchy(curve, samples, z) for z in points]
    return CommandOutcome(
        text=formats.dumps({"points": points, "values": values}),
        summary=[("Curve", "unit circle" if domain is None else "domain boundary"),
                 ("Points", str(len(points)))],
    )


def _jump_check(config: ExperimentConfig) -> CommandOutcome:
    samples = formats.read_samples(_input(config))
    defect = cauchy_transform.split_consistency(samples)
    consistent = defect <= JUMP_TOLERANCE
    return CommandOutcome(
        text=formats.dumps({"defect": defect, "tolerance": JUMP_TOLERANCE, "consistent": consistent}),
        summary=[("Defect", f"{defect:.3e}"), ("Consistent", "yes" if consistent else "no")],
        error=None if consistent else InconsistencyError(
            f"split and Cauchy transform disagree by {defect:.3e} (tolerance {JUMP_TOLERANCE:g})"
        ),
    )


def _tangent_split(config: ExperimentConfig) -> CommandOutcome:
    outer = formats.read_samples(_input(config))
    inner_path = config.params.get("inner")
    if inner_path is None:
        raise ConfigError("tangent-split needs the inner-circle samples (--inner)")
    inner = formats.read_samples(inner_path)
    if inner.grid.size != outer.grid.size:
        raise ConfigError("outer and inner samples must share one grid size")
    radius = _float(config.params.get("radius", DEFAULT_TANGENT_RADIUS), "radius")

    domain = cauchy_transform.make_tangent_domain(radius, outer.grid)
    result = cauchy_transform.tangent_split(domain, outer, inner)
    return CommandOutcome(
        text=formats.dumps({
            "g": formats.spectrum_to_dict(result.g),
            "h": formats.shifted_exterior_to_dict(result.h),
            "outer_defect": result.outer_defect,
            "inner_defect": result.inner_defect,
        }),
        summary=[
            ("Inner radius", f"{radius:g}"),
            ("Outer defect", f"{result.outer_defect:.3e}"),
            ("Inner defect", f"{result.inner_defect:.3e}"),
        ],
    )


def _probe_tangent(config: ExperimentConfig) -> CommandOutcome:
    radius = _float(config.params.get("radius", DEFAULT_TANGENT_RADIUS), "radius")
    data = _boundary_data(config, required=False)
    if data is not None:
        grid = data.grid
    else:
        grid = CircleGrid(config.grid_size)
        data = lambda theta: np.ones_like(theta, dtype=complex)  # F = 1
    radii = _float_list(config.params.get("radii", DEFAULT_RADII), "radii")
    curve = _enum(ProbeCurve, config.params.get("curve", "outer"), "curve")
    domain = cauchy_transform.make_tangent_domain(radius, grid)

    target = config.params.get("target")
    direction = config.params.get("direction")
    if target is None and direction is None:
        region = _enum(ProbeRegion, config.params.get("region", "disc"), "region")
        report = cauchy_transform.probe_tangent(domain, data, radii, region, curve)
        approach = region.value
    else:
        # explicit ray: target - r·direction
        target = domain.tangency_point if target is None else _complex(target, "target")
        direction = 1.0 if direction is None else _complex(direction, "direction")
        contour = cauchy_transform.tangent_curve(domain, curve)
        report = cauchy_transform.radial_probe(contour, data, target, direction, radii)
        approach = f"ray to {complex(target):g} along {complex(direction):g}"

    limit = "—" if report.limit_estimate is None else f"{report.limit_estimate:.10g}"
    return CommandOutcome(
        text=formats.dumps(formats.probe_report_to_dict(report)),
        summary=[
            ("Curve", curve.value),
            ("Approach", approach),
            ("Radii probed", f"{len(report.values)}/{len(radii)}"),
            ("Limit", limit),
            ("Diverges", "yes" if report.divergence_flag else "no"),
            ("Finest grid", str(max(report.grid_sizes, default=grid.size))),
        ],
    )


def _riesz_norm(config: ExperimentConfig) -> CommandOutcome:
    degrees = _int_list(config.params.get("degrees", DEFAULT_DEGREES), "degrees")
    trials = int(config.params.get("trials", experiments.DEFAULT_TRIALS))
    workers = int(config.params.get("workers", 4))
    rows = asyncio.run(
        experiments.riesz_norm_experiment_async(
            degrees, seed=config.seed, trials=trials, max_concurrent=workers,
        )
    )
    summary = [("Degrees", str(len(rows))), ("Trials", str(trials))]
    if len(rows) >= 2:
        fit = experiments.fit_log_growth(rows)
        summary += [
            ("Fit", f"{fit.slope:.4f} · ln N + {fit.intercept:.4f}"),
            ("R²", f"{fit.r_squared:.4f}"),
        ]
    return CommandOutcome(
        text=formats.riesz_csv(rows),
        summary=summary,
        columns=["N", "Estimated norm", "Witness"],
        rows=riesz_rows(rows),
    )


def _welding_check(config: ExperimentConfig) -> CommandOutcome:
    domain = _optional_domain(config) or jordan_domain.make_polynomial_domain([1.0])
    delta = _homeomorphism(config)
    welded = jordan_domain.welding_compose(domain, delta)
    defect = jordan_domain.welding_roundtrip_defect(domain, delta, welded)
    document = formats.homeomorphism_to_dict(welded)
    document["domain"] = formats.domain_to_dict(domain)
    document["roundtrip_defect"] = defect
    return CommandOutcome(
        text=formats.dumps(document),
        summary=[("Nodes", str(welded.grid.size)), ("Round-trip defect", f"{defect:.3e}")],
    )


def _qs_estimate(config: ExperimentConfig) -> CommandOutcome:
    h = _homeomorphism(config)
    budget = int(config.params.get("budget", 100_000))
    report = jordan_domain.quasisymmetry_estimate(h, triple_budget=budget)
    worst = max((e for _, e in report.eta_envelope), default=0.0)
    return CommandOutcome(
        text=formats.dumps(formats.quasisymmetry_to_dict(report)),
        summary=[
            ("Triples", f"{report.triples_examined:,}"),
            ("Exhaustive", "yes" if report.exhaustive else "no"),
            ("t bins", str(len(report.eta_envelope))),
            ("max η", f"{worst:.6g}"),
        ],
    )


HANDLERS: dict[Command, Callable[[ExperimentConfig], CommandOutcome]] = {
    Command.SPLIT: _split,
    Command.CONJ_SPLIT: _conj_split,
    Command.PHI: _phi,
    Command.CLASSIFY: _classify,
    Command.CAUCHY: _cauchy,
    Command.JUMP_CHECK: _jump_check,
    Command.TANGENT_SPLIT: _tangent_split,
    Command.PROBE_TANGENT: _probe_tangent,
    Command.RIESZ_NORM: _riesz_norm,
    Command.WELDING_CHECK: _welding_check,
    Command.QS_ESTIMATE: _qs_estimate,
}


# ── Helpers ───────────────────────────────────────────────────────────────────


def _report_error(command: str, error: SeamlineError, stderr: Optional[TextIO]) -> None:
    record = {
        "command": command,
        "error": type(error).__name__,
        "message": str(error),
        "exit_code": error.exit_code,
    }
    logger.debug("%s failed: %s", command, error)
    (stderr or sys.stderr).write(formats.dumps(record))


def _path(value: Any) -> Optional[Path]:
    return None if value is None else Path(value)


def _input(config: ExperimentConfig) -> Path:
    if config.input_path is None:
        raise ConfigError(f"{config.command.value} needs an input file (--in)")
    return config.input_path


def _boundary_data(config: ExperimentConfig, required: bool = True) -> Optional[BoundarySamples]:
    """Samples from --in, or a spectrum from --coeffs synthesized on its own grid."""
    coeffs_path = config.params.get("coeffs")
    command = config.command.value
    if coeffs_path is not None and config.input_path is not None:
        raise ConfigError(f"{command}: give boundary data with --in or --coeffs, not both")
    if coeffs_path is not None:
        spectrum = formats.read_spectrum(coeffs_path)
        return circle_fourier.synthesize(spectrum, CircleGrid(spectrum.grid_size))
    if config.input_path is not None:
        return formats.read_samples(config.input_path)
    if required:
        raise ConfigError(f"{command} needs boundary data (--in samples or --coeffs spectrum)")
    return None


def _optional_domain(config: ExperimentConfig) -> Optional[JordanDomain]:
    path = config.params.get("domain")
    return None if path is None else formats.read_domain(path)


def _homeomorphism(config: ExperimentConfig) -> CircleHomeomorphism:
    """--homeo: a homeomorphism file, or identity / reflection / mobius:<a>."""
    choice = str(config.params.get("homeo", "identity"))
    grid = CircleGrid(config.grid_size)
    if choice == "identity":
        return jordan_domain.identity_homeomorphism(grid)
    if choice == "reflection":
        return jordan_domain.reflection_homeomorphism(grid)
    if choice.startswith("mobius:"):
        return jordan_domain.mobius_homeomorphism(grid, _complex(choice[len("mobius:"):], "homeo"))
    return formats.read_homeomorphism(choice)


def _enum(enum_type, value: Any, name: str):
    try:
        return enum_type(value)
    except ValueError:
        choices = ", ".join(e.value for e in enum_type)
        raise ConfigError(f"{name} must be one of {choices}, got {value!r}") from None


def _split_items(value: Any) -> list:
    if value is None:
        return []
    if isinstance(value, str):
        return [item for item in value.replace(";", ",").split(",") if item.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _complex(value: Any, name: str) -> complex:
    try:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return complex(value.strip().replace(" ", "").replace("i", "j"))
        return complex(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: cannot read {value!r} as a complex number") from None


def _float(value: Any, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None


def _complex_list(value: Any, name: str) -> list[complex]:
    return [_complex(item, name) for item in _split_items(value)]


def _float_list(value: Any, name: str) -> list[float]:
    return [_float(item, name) for item in _split_items(value)]


def _int_list(value: Any, name: str) -> list[int]:
    try:
        return [int(item) for item in _split_items(value)]
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected integers, got {value!r}") from None
