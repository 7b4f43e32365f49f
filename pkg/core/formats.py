"""File formats: JSON documents, CSV tables and YAML experiment configs.

Complex numbers travel as [re, im] pairs. Writers are deterministic:
keys in a fixed order, floats printed with 17 significant digits, so the
same inputs always give byte-identical files.

Formats:
  samples         {"n", "grid": "uniform-theta", "values": [[re, im], ...]}
  spectrum        {"n", "coeffs": {"<index>": [re, im], ...}} (zeros omitted)
  domain          {"coeffs": [[re, im], ...], "offset": [re, im]}
  homeomorphism   {"theta": [...], "psi": [...], "orientation": "preserving" | "reversing"}
  probe report    {"radii", "values", "limit", "diverges", "oscillation", "complete", "grid_sizes"}
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np
import yaml

from core import (
    BoundarySamples,
    CircleGrid,
    CircleHomeomorphism,
    ConfigError,
    DiscFunction,
    ExteriorFunction,
    HomeomorphismOrientation,
    InputFormatError,
    JordanDomain,
    LaurentSpectrum,
    ProbeReport,
    QuasiSymmetryReport,
    RieszNormRow,
    ShiftedExteriorFunction,
    SmoothnessReport,
    SweepRow,
)
from core.jordan_domain import make_polynomial_domain

logger = logging.getLogger(__name__)

SAMPLE_GRID = "uniform-theta"
THETA_TOLERANCE = 1e-12

RIESZ_COLUMNS = ["degree", "estimated_norm", "witness_seed", "kernel_ratio", "random_ratio"]
SWEEP_COLUMNS = ["file", "decay_class", "exponent", "fit_quality", "error"]

PathLike = Union[str, Path]
Spectrum = Union[LaurentSpectrum, DiscFunction, ExteriorFunction]


# ── Reading ───────────────────────────────────────────────────────────────────


def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputFormatError(f"{path.name} is not valid JSON: {exc}") from None


def read_samples(path: PathLike) -> BoundarySamples:
    return samples_from_dict(read_json(path), Path(path).name)


def samples_from_dict(data: Any, source: str = "samples") -> BoundarySamples:
    data = _require_object(data, source, ("n", "values"))
    grid_name = data.get("grid", SAMPLE_GRID)
    if grid_name != SAMPLE_GRID:
        raise InputFormatError(f"{source}: unsupported grid {grid_name!r}")
    n = _integer(data["n"], f"{source}: n")
    values = data["values"]
    if not isinstance(values, list) or len(values) != n:
        raise InputFormatError(f"{source}: expected {n} value pairs")
    parsed = [_complex(v, f"{source}: values[{i}]") for i, v in enumerate(values)]
    return BoundarySamples(grid=CircleGrid(n), values=parsed)


def read_spectrum(path: PathLike) -> LaurentSpectrum:
    return spectrum_from_dict(read_json(path), Path(path).name)


def spectrum_from_dict(data: Any, source: str = "spectrum") -> LaurentSpectrum:
    data = _require_object(data, source, ("n", "coeffs"))
    n = _integer(data["n"], f"{source}: n")
    coeffs = data["coeffs"]
    if not isinstance(coeffs, dict):
        raise InputFormatError(f"{source}: coeffs must be an object keyed by index")
    mapping = {}
    for key, value in coeffs.items():
        try:
            index = int(key)
        except (TypeError, ValueError):
            raise InputFormatError(f"{source}: bad coefficient index {key!r}") from None
        mapping[index] = _complex(value, f"{source}: coeffs[{key}]")
    return LaurentSpectrum.from_mapping(mapping, CircleGrid(n).size)


def read_domain(path: PathLike) -> JordanDomain:
    data = _require_object(read_json(path), Path(path).name, ("coeffs",))
    coeffs = data["coeffs"]
    if not isinstance(coeffs, list) or not coeffs:
        raise InputFormatError(f"{Path(path).name}: coeffs must be a nonempty list")
    return make_polynomial_domain(
        [_complex(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)],
        _complex(data.get("offset", [0.0, 0.0]), "offset"),
    )


def read_homeomorphism(path: PathLike) -> CircleHomeomorphism:
    source = Path(path).name
    data = _require_object(read_json(path), source, ("theta", "psi"))
    theta = np.asarray(_float_list(data["theta"], f"{source}: theta"))
    psi = _float_list(data["psi"], f"{source}: psi")
    if theta.size != len(psi):
        raise InputFormatError(f"{source}: theta and psi differ in length")
    grid = CircleGrid(theta.size)
    if np.max(np.abs(theta - grid.nodes)) > THETA_TOLERANCE:
        raise InputFormatError(f"{source}: theta must be the uniform grid 2πj/N")
    try:
        orientation = HomeomorphismOrientation(data.get("orientation", "preserving"))
    except ValueError:
        raise InputFormatError(f"{source}: unknown orientation {data.get('orientation')!r}") from None
    return CircleHomeomorphism(grid=grid, angles=psi, orientation=orientation)


def load_config(path: PathLike) -> dict[str, Any]:
    """YAML experiment config; keys mirror the CLI flag names."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path.name} is not valid YAML: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path.name}: config must be a mapping of option names")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


# ── Documents ─────────────────────────────────────────────────────────────────


def samples_to_dict(samples: BoundarySamples) -> dict:
    return {
        "n": samples.grid.size,
        "grid": SAMPLE_GRID,
        "values": [_pair(v) for v in samples.values],
    }


def spectrum_to_dict(spectrum: Spectrum) -> dict:
    """Works for full spectra and both one-sided parts."""
    return {
        "n": spectrum.grid_size,
        "coeffs": {str(n): _pair(c) for n, c in spectrum.to_mapping().items()},
    }


def shifted_exterior_to_dict(h: ShiftedExteriorFunction) -> dict:
    """Coefficients b_n of Σ_{n<0} b_n (z - center)^n."""
    return {
        "n": h.part.grid_size,
        "center": _pair(h.center),
        "radius": float(h.radius),
        "coeffs": {str(n): _pair(c) for n, c in h.laurent_coefficients().items()},
    }


def domain_to_dict(domain: JordanDomain) -> dict:
    return {
        "coeffs": [_pair(c) for c in domain.coefficients],
        "offset": _pair(domain.center_offset),
    }


def homeomorphism_to_dict(h: CircleHomeomorphism) -> dict:
    return {
        "theta": [float(t) for t in h.grid.nodes],
        "psi": [float(p) for p in h.angles],
        "orientation": h.orientation.value,
    }


def smoothness_to_dict(report: SmoothnessReport) -> dict:
    return {
        "decay_class": report.decay_class.value,
        "estimated_exponent": report.estimated_exponent,
        "fit_quality": report.fit_quality,
        "tail_norms": [[l, value] for l, value in report.tail_norms],
    }


def probe_report_to_dict(report: ProbeReport) -> dict:
    return {
        "radii": list(report.approach_radii),
        "values": [_pair(v) for v in report.values],
        "limit": None if report.limit_estimate is None else _pair(report.limit_estimate),
        "diverges": report.divergence_flag,
        "oscillation": report.oscillation_measure,
        "complete": report.complete,
        "grid_sizes": list(report.grid_sizes),
    }


def quasisymmetry_to_dict(report: QuasiSymmetryReport) -> dict:
    return {
        "sampled_ratios": [[t, r] for t, r in report.sampled_ratios],
        "eta_envelope": [[t, e] for t, e in report.eta_envelope],
        "triples_examined": report.triples_examined,
        "exhaustive": report.exhaustive,
    }


# ── Writing ───────────────────────────────────────────────────────────────────


def dumps(document: Any) -> str:
    """Deterministic JSON text: indent 2, scalar lists on one line, %.17g floats."""
    return _encode(document, 0) + "\n"


def write_text(text: str, path: Optional[PathLike]) -> str:
    """Write text to path when given; always return it."""
    if path is not None:
        path = Path(path)
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputFormatError(f"cannot write {path}: {exc.strerror or exc}") from None
        logger.debug("wrote %d bytes to %s", len(text), path)
    return text


def riesz_csv(rows: Sequence[RieszNormRow]) -> str:
    return _csv(
        RIESZ_COLUMNS,
        (
            [r.degree, r.estimated_norm, r.witness_seed, r.kernel_ratio, r.random_ratio]
            for r in rows
        ),
    )


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    def _row(row: SweepRow) -> list:
        if row.report is None:
            return [row.file_name, "", "", "", row.error or ""]
        return [
            row.file_name,
            row.report.decay_class.value,
            row.report.estimated_exponent,
            row.report.fit_quality,
            "",
        ]

    return _csv(SWEEP_COLUMNS, (_row(r) for r in rows))


# ── Helpers ───────────────────────────────────────────────────────────────────


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj: Any, level: int) -> str:
    pad = "  " * (level + 1)
    close = "  " * level
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, level) for v in obj) + "]"
        items = [pad + _encode(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode(_pair(obj), level)
    return json.dumps(str(obj), ensure_ascii=False)


def _csv(header: list[str], rows: Iterable[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(_csv_cell(v) for v in row)
    return buffer.getvalue()


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise InputFormatError(f"{where}: expected a number or an [re, im] pair, got {value!r}")


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputFormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _float_list(value: Any, where: str) -> list[float]:
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise InputFormatError(f"{where}: expected a list of numbers")
    return [float(v) for v in value]


def _require_object(data: Any, source: str, keys: Sequence[str]) -> dict:
    if not isinstance(data, dict):
        raise InputFormatError(f"{source}: expected a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise InputFormatError(f"{source}: missing field(s) {', '.join(missing)}")
    return data
