import json
import math
import re

import click.testing
import pytest

import ok_groupoid


@pytest.fixture
def cli(mocker):
    # conftest already installed logging
    mocker.patch("ok_logging_setup.install")
    from ok_groupoid import _cli

    return _cli


@pytest.fixture
def run(cli, data_dir):
    runner = click.testing.CliRunner()

    def invoke(*args):
        paths = [str(data_dir / a) if "." in a else a for a in args]
        return runner.invoke(cli.main, paths)

    return invoke


def _json(result):
    out = result.stdout
    doc, _ = json.JSONDecoder().raw_decode(out[out.index("{") :])
    return doc


#
# Groupoid commands
#


def test_validate(run):
    result = run("validate", "pair3_z4.gpd")
    assert result.exit_code == 0
    assert "valid: 13 arrows, 4 units, 2 orbits" in result.stdout

    doc = _json(run("validate", "z2action.gpd", "--json"))
    assert doc == {"valid": True, "arrows": 4, "units": 2, "orbits": 1}


def test_validate_rejects_bad_file(run, tmp_path):
    bad = tmp_path / "bad.gpd"
    bad.write_text("groupoid v2\n")
    assert run("validate", str(bad)).exit_code == 1
    assert run("validate", "missing.gpd").exit_code == 1


def test_info(run):
    result = run("info", "pair2.gpd")
    assert result.exit_code == 0
    assert "units: 0 3" in result.stdout
    assert "  1 [0<-1]: 3 -> 0" in result.stdout

    doc = _json(run("info", "z2.gpd", "--json"))
    assert doc["units"] == [0]
    assert doc["arrows"][1] == {
        "id": 1,
        "name": "g1",
        "source": 0,
        "range": 0,
        "inverse": 1,
    }
    assert doc["isotropy_orders"] == {"0": 2}


#
# Element commands
#


def test_norm(run):
    result = run("norm", "pair2.gpd", "hermitian.elem")
    assert result.exit_code == 0
    assert "norm 2.61803" in result.stdout
    assert "attained at unit 0" in result.stdout

    doc = _json(run("norm", "pair2.gpd", "hermitian.elem", "--json"))
    assert doc["norm"] == pytest.approx((3 + math.sqrt(5)) / 2)
    assert [p["unit"] for p in doc["per_unit"]] == [0, 3]


def test_json_numbers_have_17_digits(run):
    raw = run("norm", "pair2.gpd", "hermitian.elem", "--json").stdout
    token = re.search(r'"norm": (\S+),', raw)[1]
    assert token == f"{float(token):.17g}"
    assert float(token) == pytest.approx((3 + math.sqrt(5)) / 2)

    args = ("invert", "pair2.gpd", "e12.elem", "--json", "--tol", "1e-6")
    assert '"tol": 9.9999999999999995e-07' in run(*args).stdout


def test_spectrum(run):
    result = run("spectrum", "z2.gpd", "flip.elem", "--matrix")
    assert result.exit_code == 0
    assert "-1.0 1.0" in result.stdout
    assert "2 2\n0 0  1 0\n1 0  0 0\n" in result.stdout

    doc = _json(run("spectrum", "pair2.gpd", "hermitian.elem", "--json"))
    low, high = (3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2
    assert doc["eigenvalues"] == pytest.approx([low, low, high, high])


def test_spectrum_needs_self_adjoint(run):
    assert run("spectrum", "pair2.gpd", "e12.elem").exit_code == 1


def test_element_for_other_groupoid(run):
    assert run("norm", "z2action.gpd", "e12.elem").exit_code == 1


def test_invert(run):
    result = run("invert", "pair2.gpd", "unit.elem")
    assert result.exit_code == 0
    assert "invertible, min σ = 1.0" in result.stdout

    result = run("invert", "pair2.gpd", "e12.elem")
    assert result.exit_code == 3
    assert "singular, min σ = 0.0" in result.stdout
    assert "witness unit 0" in result.stdout
    assert "norm-shift witness unit 0" in result.stdout


def test_invert_json(run):
    result = run("invert", "pair2.gpd", "e12.elem", "--json", "--tol", "1e-6")
    doc = _json(result)
    assert doc["verdict"] == "singular"
    assert doc["witness"] == 0
    assert doc["tol"] == 1e-6
    assert result.exit_code == 3

    result = run("invert", "pair2.gpd", "unit.elem", "--tol", "0")
    assert result.exit_code == 2


def test_profile(run):
    result = run("profile", "pair2.gpd", "unit.elem", "--orbit-reps")
    assert result.exit_code == 0
    assert "0 1.0\n3 1.0\n" in result.stdout


#
# Property checks
#


def test_verify(run):
    result = run("verify", "z2action.gpd", "--trials", "20", "--seed", "42")
    assert result.exit_code == 0
    assert "PASS roch-witness" in result.stdout
    assert "FAIL" not in result.stdout


def test_verify_is_reproducible(run):
    args = ("verify", "pair3_z4.gpd", "--trials", "6", "--seed", "9")
    first, second = run(*args).stdout, run(*args).stdout
    report = first[first.index("13 arrows") : first.index("properties pass")]
    assert "seed=9" in report
    assert report in second
    assert second.index(report) == second.index("13 arrows")


def test_induce_check(run):
    result = run("induce-check", "z2.gpd", "--trials", "10", "--json")
    assert result.exit_code == 0
    names = [p["name"] for p in _json(result)["properties"]]
    assert "induced-equivalence" in names
    assert "roch-witness" not in names


def test_verify_failure_exit(run, mocker):
    failing = ok_groupoid.SuiteReport(
        groupoid="2 arrows",
        opts=ok_groupoid.SuiteOptions(trials=1),
        results=(
            ok_groupoid.PropertyResult("axioms", 1, 1.0, 0.0, "broken"),
        ),
    )
    mocker.patch.object(ok_groupoid, "verify_suite", return_value=failing)
    result = run("verify", "z2.gpd")
    assert result.exit_code == 2
    assert "FAIL axioms" in result.stdout


def test_trials_must_be_positive(run):
    assert run("verify", "z2.gpd", "--trials", "0").exit_code == 2
