"""End-to-end tests for the seamline commands."""

import io
import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from rich.console import Console

from core import BoundarySamples, CircleGrid
from core.cauchy_transform import make_tangent_domain
from core.circle_fourier import sample
from core.formats import dumps, samples_to_dict
from core.runner import run_command
from seamline import cli

FIXTURES = Path(__file__).parent / "fixtures"


# ── Helpers ───────────────────────────────────────────────────────────────────


def _run(command: str, config_path=None, **options):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run_command(command, options, config_path, stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def _pair(document_value):
    return complex(*document_value)


# ── Documents on stdout ───────────────────────────────────────────────────────


def test_split_cosine_samples():
    """2cos θ splits into z and 1/z."""
    code, out, err = _run("split", **{"in": FIXTURES / "samples_cos16.json"})
    assert code == 0 and err == ""
    document = json.loads(out)
    assert _pair(document["g"]["coeffs"]["1"]) == pytest.approx(1.0, abs=1e-14)
    assert _pair(document["h"]["coeffs"]["-1"]) == pytest.approx(1.0, abs=1e-14)
    assert document["g"]["n"] == 16


def test_conj_split_cosine_samples():
    """2cos θ = z + conj(z) on the circle."""
    code, out, _ = _run("conj-split", **{"in": FIXTURES / "samples_cos16.json"})
    assert code == 0
    document = json.loads(out)
    assert _pair(document["h"]["coeffs"]["1"]) == pytest.approx(1.0, abs=1e-14)
    assert "0" not in document["h"]["coeffs"]


def test_phi_disc_variant():
    """Φ_D(3 + z²) = 3 + 2i z²."""
    code, out, _ = _run("phi", variant="disc", **{"in": FIXTURES / "spectrum_phi.json"})
    assert code == 0
    assert json.loads(out)["coeffs"] == {"0": [3.0, 0.0], "2": [0.0, 2.0]}


def test_phi_inverse_circle():
    """Φ^{-1} divides index 2 by 2i."""
    code, out, _ = _run("phi", inverse=True, **{"in": FIXTURES / "spectrum_phi.json"})
    assert code == 0
    coeffs = json.loads(out)["coeffs"]
    assert coeffs["0"] == [3.0, 0.0]
    assert _pair(coeffs["2"]) == pytest.approx(-0.5j)


def test_cauchy_points():
    """C(2cos θ) is z inside D and -1/z outside."""
    code, out, _ = _run("cauchy", points="0.2,5", **{"in": FIXTURES / "samples_cos16.json"})
    assert code == 0
    values = [_pair(v) for v in json.loads(out)["values"]]
    assert values[0] == pytest.approx(0.2, abs=1e-9)
    assert values[1] == pytest.approx(-0.2, abs=1e-9)


def test_jump_check_consistent(tmp_path):
    """Sampled trig polynomials pass the split/Cauchy comparison."""
    path = tmp_path / "cos256.json"
    path.write_text(dumps(samples_to_dict(sample(lambda z: z + 1 / z, CircleGrid(256)))))
    code, out, _ = _run("jump-check", **{"in": path})
    document = json.loads(out)
    assert code == 0
    assert document["consistent"] is True


def test_probe_tangent_default_data():
    """Without --in the probe uses F = 1 and finds the limit 1."""
    code, out, _ = _run("probe-tangent", radii="0.1,0.05,0.025")
    assert code == 0
    document = json.loads(out)
    assert document["limit"] == pytest.approx([1.0, 0.0], abs=1e-9)
    assert document["complete"] is True
    assert document["diverges"] is False


def test_config_file_and_cli_precedence():
    """YAML supplies defaults; explicit options win."""
    code, out, _ = _run("probe-tangent", FIXTURES / "probe_config.yaml")
    assert code == 0
    assert json.loads(out)["radii"] == [0.1, 0.05, 0.025]

    code, out, _ = _run("probe-tangent", FIXTURES / "probe_config.yaml", radii="0.2,0.1")
    assert code == 0
    assert json.loads(out)["radii"] == [0.2, 0.1]


def test_welding_identity_default_domain():
    """Welding the disc with the identity round-trips exactly."""
    code, out, _ = _run("welding-check", n=64)
    assert code == 0
    assert json.loads(out)["roundtrip_defect"] <= 1e-12


def test_qs_estimate_reflection():
    """An exhaustive estimate for the reflection on 16 nodes."""
    code, out, _ = _run("qs-estimate", n=16, homeo="reflection", budget=3360)
    assert code == 0
    document = json.loads(out)
    assert document["exhaustive"] is True
    assert document["triples_examined"] == 3360


def test_classify_single_spectrum(tmp_path):
    """A sparse spectrum on 64 nodes is a trig polynomial."""
    path = tmp_path / "poly.json"
    path.write_text(dumps({"n": 64, "coeffs": {"1": [1.0, 0.0], "-3": [0.0, 2.0]}}))
    code, out, _ = _run("classify", **{"in": path})
    assert code == 0
    assert json.loads(out)["decay_class"] == "trig-polynomial"


def test_cauchy_from_coefficients():
    """--coeffs synthesizes the boundary data from a spectrum file."""
    code, out, _ = _run("cauchy", points="0.2,5", coeffs=str(FIXTURES / "spectrum_phi.json"))
    assert code == 0
    values = [_pair(v) for v in json.loads(out)["values"]]
    assert values[0] == pytest.approx(3.04, abs=1e-9)
    assert values[1] == pytest.approx(0.0, abs=1e-9)


def test_probe_tangent_explicit_ray():
    """--target and --direction choose the ray; from outside D, C(1) vanishes."""
    code, out, _ = _run("probe-tangent", direction="-1", radii="0.1,0.05,0.025")
    assert code == 0
    assert json.loads(out)["limit"] == pytest.approx([0.0, 0.0], abs=1e-9)

    code, out, _ = _run("probe-tangent", target="1i", direction="1i", radii="0.1,0.05")
    assert code == 0
    assert json.loads(out)["limit"] == pytest.approx([1.0, 0.0], abs=1e-9)


def test_probe_tangent_inner_curve_from_outside():
    """Over the inner circle, F = 1 has transform 0 outside the inner disc."""
    code, out, _ = _run("probe-tangent", region="exterior", curve="inner", radii="0.1,0.05")
    assert code == 0
    document = json.loads(out)
    assert document["limit"] == pytest.approx([0.0, 0.0], abs=1e-9)
    assert document["diverges"] is False


def test_welding_document_carries_domain():
    code, out, _ = _run("welding-check", n=64, domain=str(FIXTURES / "domain_oval.json"))
    assert code == 0
    document = json.loads(out)
    assert document["domain"] == {"coeffs": [[1.0, 0.0], [0.2, 0.0]], "offset": [0.0, 0.0]}
    assert document["roundtrip_defect"] <= 1e-10


# ── Errors and exit codes ─────────────────────────────────────────────────────


def test_missing_input_is_config_error():
    """Commands that read a file refuse to run without --in."""
    code, out, err = _run("split")
    assert code == 2
    assert out == ""
    record = json.loads(err)
    assert record == {
        "command": "split",
        "error": "ConfigError",
        "message": "split needs an input file (--in)",
        "exit_code": 2,
    }


def test_bad_grid_size_is_config_error():
    """N must be a power of two in [16, 65536]."""
    code, _, err = _run("probe-tangent", n=100)
    assert code == 2
    assert json.loads(err)["error"] == "ConfigError"


def test_corrupt_input_is_format_error():
    """Truncated JSON is an input format error."""
    code, _, err = _run("classify", **{"in": FIXTURES / "spectrum_truncated.json"})
    assert code == 2
    assert json.loads(err)["error"] == "InputFormatError"


def test_guard_violation_exit_code():
    """Evaluating on top of the curve is a guard violation."""
    code, _, err = _run("cauchy", points="1.01", **{"in": FIXTURES / "samples_cos16.json"})
    assert code == 3
    assert json.loads(err)["error"] == "ProximityError"


def test_univalence_failure_exit_code():
    """Non-univalent domains are guard violations."""
    code, _, err = _run("welding-check", domain=str(FIXTURES / "domain_nonunivalent.json"))
    assert code == 3
    assert json.loads(err)["error"] == "UnivalenceError"


def test_inconsistent_tangent_data_exit_code():
    """Outer and inner data that are not one function on Ω exit with 4."""
    samples = FIXTURES / "samples_cos16.json"
    code, _, err = _run("tangent-split", inner=samples, **{"in": samples})
    assert code == 4
    assert json.loads(err)["error"] == "InconsistencyError"


def test_jump_check_inconsistent_writes_record(tmp_path):
    """Aliasing on 64 nodes misses the tolerance: document on stdout, record on stderr."""
    path = tmp_path / "alias64.json"
    path.write_text(dumps(samples_to_dict(sample(lambda z: z + z**-20, CircleGrid(64)))))
    code, out, err = _run("jump-check", **{"in": path})
    assert code == 4
    assert json.loads(out)["consistent"] is False
    record = json.loads(err)
    assert record["command"] == "jump-check"
    assert record["error"] == "InconsistencyError"
    assert record["exit_code"] == 4


def test_coefficients_and_samples_are_exclusive():
    code, _, err = _run(
        "cauchy",
        points="0.2",
        coeffs=str(FIXTURES / "spectrum_phi.json"),
        **{"in": FIXTURES / "samples_cos16.json"},
    )
    assert code == 2
    assert json.loads(err)["error"] == "ConfigError"


def test_console_reports_errors_under_out(tmp_path):
    """With --out the console shows the failure next to the JSON record."""
    buffer, stderr = io.StringIO(), io.StringIO()
    target = tmp_path / "values.json"
    options = {"in": FIXTURES / "samples_cos16.json", "points": "1.01", "out": target}
    code = run_command("cauchy", options, console=Console(file=buffer, width=200), stderr=stderr)
    assert code == 3
    assert "Error:" in buffer.getvalue()
    assert "ProximityError" in buffer.getvalue()
    assert json.loads(stderr.getvalue())["error"] == "ProximityError"
    assert not target.exists()


def test_console_summary_shows_outcome_error(tmp_path):
    """A written document with a failed check still reports its exit status."""
    data = tmp_path / "alias64.json"
    data.write_text(dumps(samples_to_dict(sample(lambda z: z + z**-20, CircleGrid(64)))))
    buffer, stderr = io.StringIO(), io.StringIO()
    options = {"in": data, "out": tmp_path / "jump.json"}
    code = run_command("jump-check", options, console=Console(file=buffer, width=200), stderr=stderr)
    assert code == 4
    assert "Finished with exit status 4" in buffer.getvalue()
    assert json.loads((tmp_path / "jump.json").read_text())["consistent"] is False
    assert json.loads(stderr.getvalue())["error"] == "InconsistencyError"


# ── Through click ─────────────────────────────────────────────────────────────


def test_cli_riesz_norm_is_deterministic(tmp_path):
    """Two runs with the same seed write byte-identical CSV files."""
    runner = CliRunner()
    outputs = []
    for name in ("first.csv", "second.csv"):
        target = tmp_path / name
        result = runner.invoke(
            cli,
            ["riesz-norm", "--degrees", "8,16,32", "--trials", "5", "--seed", "4",
             "--out", str(target)],
        )
        assert result.exit_code == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    lines = outputs[0].decode().splitlines()
    assert lines[0] == "degree,estimated_norm,witness_seed,kernel_ratio,random_ratio"
    assert [line.split(",")[0] for line in lines[1:]] == ["8", "16", "32"]


def test_cli_classify_sweep_partial_failure(tmp_path):
    """A sweep with an unreadable file still writes every row and exits 2."""
    spectra = tmp_path / "spectra"
    spectra.mkdir()
    (spectra / "good.json").write_text(dumps({"n": 64, "coeffs": {"2": [1.0, 0.0]}}))
    (spectra / "bad.json").write_text("{")
    target = tmp_path / "sweep.csv"

    result = CliRunner().invoke(cli, ["classify", "--in", str(spectra), "--out", str(target)])
    assert result.exit_code == 2
    lines = target.read_text().splitlines()
    assert lines[0] == "file,decay_class,exponent,fit_quality,error"
    assert lines[1].startswith("bad.json,,,,")
    assert lines[2].startswith("good.json,trig-polynomial")


def test_cli_phi_writes_output_file(tmp_path):
    """--out writes the document and --variant is validated by click."""
    target = tmp_path / "phi.json"
    runner = CliRunner()
    result = runner.invoke(
        cli,
        ["phi", "--in", str(FIXTURES / "spectrum_phi.json"), "--variant", "disc",
         "--out", str(target)],
    )
    assert result.exit_code == 0
    assert json.loads(target.read_text())["coeffs"]["2"] == [0.0, 2.0]

    result = runner.invoke(cli, ["phi", "--in", str(FIXTURES / "spectrum_phi.json"),
                                 "--variant", "sphere"])
    assert result.exit_code == 2


def test_cli_lists_commands():
    """Every command is registered on the group."""
    result = CliRunner().invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("split", "conj-split", "phi", "classify", "cauchy", "jump-check",
                 "tangent-split", "probe-tangent", "riesz-norm", "welding-check",
                 "qs-estimate"):
        assert name in result.output


def _tangent_files(tmp_path):
    domain = make_tangent_domain(0.25, CircleGrid(256))
    outer, inner = tmp_path / "outer.json", tmp_path / "inner.json"
    for path, curve in ((outer, domain.outer), (inner, domain.inner)):
        values = curve.positions + 1 / (curve.positions - 0.75)
        path.write_text(dumps(samples_to_dict(BoundarySamples(grid=curve.grid, values=values))))
    return ["--in", str(outer), "--inner", str(inner)]


def _spectrum_file(tmp_path):
    path = tmp_path / "poly.json"
    path.write_text(dumps({"n": 64, "coeffs": {"1": [1.0, 0.0], "-3": [0.0, 2.0]}}))
    return ["--in", str(path)]


def _jump_file(tmp_path):
    path = tmp_path / "cos256.json"
    path.write_text(dumps(samples_to_dict(sample(lambda z: z + 1 / z, CircleGrid(256)))))
    return ["--in", str(path)]


COMMAND_ARGS = {
    "split": lambda tmp: ["--in", str(FIXTURES / "samples_cos16.json")],
    "conj-split": lambda tmp: ["--in", str(FIXTURES / "samples_cos16.json")],
    "phi": lambda tmp: ["--in", str(FIXTURES / "spectrum_phi.json")],
    "classify": _spectrum_file,
    "cauchy": lambda tmp: ["--in", str(FIXTURES / "samples_cos16.json"), "--points", "0.2,5"],
    "jump-check": _jump_file,
    "tangent-split": _tangent_files,
    "probe-tangent": lambda tmp: ["--radii", "0.1,0.05"],
    "riesz-norm": lambda tmp: ["--degrees", "8,16", "--trials", "5"],
    "welding-check": lambda tmp: ["--n", "64", "--domain", str(FIXTURES / "domain_oval.json")],
    "qs-estimate": lambda tmp: ["--n", "16", "--homeo", "reflection", "--budget", "3360"],
}


@pytest.mark.parametrize("command", sorted(COMMAND_ARGS))
def test_cli_commands_are_deterministic(command, tmp_path):
    """Every command writes byte-identical files on repeated runs."""
    args = COMMAND_ARGS[command](tmp_path)
    runner = CliRunner()
    outputs = []
    for name in ("first", "second"):
        target = tmp_path / name
        result = runner.invoke(cli, [command, *args, "--out", str(target)])
        assert result.exit_code == 0, result.output
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0]
