"""Tests for JSON/CSV writers, input readers and YAML configs."""

import json
from pathlib import Path

import numpy as np
import pytest

from core import (
    CircleGrid,
    ConfigError,
    DecayClass,
    HomeomorphismOrientation,
    InputFormatError,
    ProbeReport,
    RieszNormRow,
    SmoothnessReport,
    SweepRow,
    UnivalenceError,
)
from core.formats import (
    dumps,
    format_float,
    homeomorphism_to_dict,
    load_config,
    probe_report_to_dict,
    read_domain,
    read_homeomorphism,
    read_samples,
    read_spectrum,
    riesz_csv,
    samples_from_dict,
    spectrum_from_dict,
    sweep_csv,
    write_text,
)
from core.jordan_domain import reflection_homeomorphism

FIXTURES = Path(__file__).parent / "fixtures"


# ── Writers ───────────────────────────────────────────────────────────────────


@pytest.mark.parametrize(
    "value, text",
    [
        (1.0, "1.0"),
        (3, "3.0"),
        (-0.5, "-0.5"),
        (0.1, "0.10000000000000001"),
        (1e20, "1e+20"),
        (float("nan"), "null"),
        (float("inf"), "null"),
    ],
)
def test_format_float(value, text):
    """Floats keep 17 significant digits and always look like floats."""
    assert format_float(value) == text


def test_dumps_layout():
    """Objects indent by two; scalar lists stay on one line."""
    document = {"a": [1.0, 2], "b": {"c": None, "d": True}, "e": [[1.0, 0.0], [2.0, 0.5]]}
    assert dumps(document) == (
        "{\n"
        '  "a": [1.0, 2],\n'
        '  "b": {\n'
        '    "c": null,\n'
        '    "d": true\n'
        "  },\n"
        '  "e": [\n'
        "    [1.0, 0.0],\n"
        "    [2.0, 0.5]\n"
        "  ]\n"
        "}\n"
    )


def test_dumps_is_valid_json():
    """Output parses back with the standard decoder; complex values become pairs."""
    document = {"z": 1 - 2j, "x": np.float64(0.25), "n": np.int64(7), "empty": [], "obj": {}}
    assert json.loads(dumps(document)) == {
        "z": [1.0, -2.0], "x": 0.25, "n": 7, "empty": [], "obj": {},
    }


def test_riesz_csv():
    """Header row, then one line per degree with float formatting."""
    rows = [
        RieszNormRow(degree=8, estimated_norm=1.25, witness_seed=-1, kernel_ratio=1.25),
        RieszNormRow(degree=16, estimated_norm=1.5, witness_seed=3, random_ratio=1.5),
    ]
    assert riesz_csv(rows) == (
        "degree,estimated_norm,witness_seed,kernel_ratio,random_ratio\n"
        "8,1.25,-1,1.25,0.0\n"
        "16,1.5,3,0.0,1.5\n"
    )


def test_sweep_csv_error_rows():
    """Failed files keep their name and error; the other cells are empty."""
    rows = [
        SweepRow(
            file_name="a.json",
            report=SmoothnessReport(decay_class=DecayClass.POWER_LAW, estimated_exponent=3.0, fit_quality=0.99),
        ),
        SweepRow(file_name="b.json", error="InputFormatError: bad, very bad"),
    ]
    assert sweep_csv(rows) == (
        "file,decay_class,exponent,fit_quality,error\n"
        "a.json,power-law,3.0,0.98999999999999999,\n"
        'b.json,,,,"InputFormatError: bad, very bad"\n'
    )


def test_probe_report_document():
    """Divergent probes write a null limit."""
    report = ProbeReport(
        approach_radii=[0.1], values=[1 + 1j], limit_estimate=None, divergence_flag=True,
        oscillation_measure=2.0, complete=False, grid_sizes=[512],
    )
    document = json.loads(dumps(probe_report_to_dict(report)))
    assert document == {
        "radii": [0.1], "values": [[1.0, 1.0]], "limit": None, "diverges": True,
        "oscillation": 2.0, "complete": False, "grid_sizes": [512],
    }


def test_write_text(tmp_path):
    """Text is written verbatim; unwritable paths are input errors."""
    target = tmp_path / "out.json"
    assert write_text("{}\n", target) == "{}\n"
    assert target.read_text() == "{}\n"
    assert write_text("x", None) == "x"
    with pytest.raises(InputFormatError):
        write_text("x", tmp_path / "missing" / "out.json")


# ── Readers ───────────────────────────────────────────────────────────────────


def test_read_samples_fixture():
    """2cos θ on 16 nodes."""
    samples = read_samples(FIXTURES / "samples_cos16.json")
    assert samples.grid.size == 16
    assert np.allclose(samples.values, 2 * np.cos(CircleGrid(16).nodes))


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"n": 8},
        {"n": 4, "values": [[1, 0]] * 3},
        {"n": 4, "grid": "chebyshev", "values": [[1, 0]] * 4},
        {"n": "4", "values": [[1, 0]] * 4},
        {"n": 4, "values": [[1, 0, 0]] * 4},
        {"n": 4, "values": [[True, 0]] * 4},
    ],
)
def test_samples_format_errors(data):
    """Malformed sample documents are input errors."""
    with pytest.raises(InputFormatError):
        samples_from_dict(data)


def test_samples_accept_plain_numbers():
    """Real values may be written without the imaginary part."""
    samples = samples_from_dict({"n": 4, "values": [1, 2.5, [0, 1], -1]})
    assert list(samples.values) == [1, 2.5, 1j, -1]


def test_read_spectrum_fixture():
    """Sparse coefficient objects map to their indices."""
    spectrum = read_spectrum(FIXTURES / "spectrum_phi.json")
    assert spectrum.to_mapping() == {0: 3.0, 2: 1.0}


def test_read_spectrum_errors(tmp_path):
    """Truncated or missing files and bad indices are input errors."""
    with pytest.raises(InputFormatError):
        read_spectrum(FIXTURES / "spectrum_truncated.json")
    with pytest.raises(InputFormatError):
        read_spectrum(tmp_path / "absent.json")
    with pytest.raises(InputFormatError):
        spectrum_from_dict({"n": 16, "coeffs": {"one": [1, 0]}})
    with pytest.raises(InputFormatError):
        spectrum_from_dict({"n": 16, "coeffs": [[1, 0]]})


def test_read_domain_fixtures():
    """The oval fixture loads; the non-univalent one is refused."""
    domain = read_domain(FIXTURES / "domain_oval.json")
    assert domain.coefficients == (1.0, 0.2)
    assert domain.center_offset == 0
    with pytest.raises(UnivalenceError):
        read_domain(FIXTURES / "domain_nonunivalent.json")


def test_read_homeomorphism(tmp_path):
    """Homeomorphism documents load with their orientation."""
    path = tmp_path / "reflection.json"
    path.write_text(dumps(homeomorphism_to_dict(reflection_homeomorphism(CircleGrid(16)))))
    h = read_homeomorphism(path)
    assert h.orientation is HomeomorphismOrientation.REVERSING
    assert np.allclose(h.angles, -CircleGrid(16).nodes)


def test_read_homeomorphism_errors(tmp_path):
    """Off-grid theta and unknown orientations are rejected."""
    nodes = CircleGrid(8).nodes.tolist()
    shifted = tmp_path / "shifted.json"
    shifted.write_text(json.dumps({"theta": [t + 0.1 for t in nodes], "psi": nodes}))
    with pytest.raises(InputFormatError):
        read_homeomorphism(shifted)

    sideways = tmp_path / "sideways.json"
    sideways.write_text(json.dumps({"theta": nodes, "psi": nodes, "orientation": "sideways"}))
    with pytest.raises(InputFormatError):
        read_homeomorphism(sideways)


# ── Config ────────────────────────────────────────────────────────────────────


def test_load_config_fixture():
    """YAML keys come back as option names."""
    assert load_config(FIXTURES / "probe_config.yaml") == {
        "radius": 0.25,
        "radii": [0.1, 0.05, 0.025],
        "region": "disc",
    }


def test_load_config_normalizes_dashes(tmp_path):
    """Flag-style keys with dashes become identifiers."""
    path = tmp_path / "config.yaml"
    path.write_text("max-concurrent: 2\nseed: 5\n")
    assert load_config(path) == {"max_concurrent": 2, "seed": 5}


def test_load_config_errors(tmp_path):
    """Invalid YAML, non-mappings and missing files are config errors."""
    broken = tmp_path / "broken.yaml"
    broken.write_text("radii: [0.1, 0.05\n")
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    for path in (broken, listing, tmp_path / "absent.yaml"):
        with pytest.raises(ConfigError):
            load_config(path)


def test_load_config_empty(tmp_path):
    """An empty file sets nothing."""
    path = tmp_path / "empty.yaml"
    path.write_text("")
    assert load_config(path) == {}
