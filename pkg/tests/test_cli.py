import io
import json
import shutil
from importlib import resources

import pytest

from quartic_chow.cli import main
from quartic_chow.pipeline.fixtures import FixtureError, load_fixtures, parse_fixture, seal


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def data_copy(tmp_path):
    src = resources.files("quartic_chow").joinpath("data")
    for name in ("rings", "classes", "table"):
        shutil.copy(str(src.joinpath(f"{name}.json")), tmp_path / f"{name}.json")
    return tmp_path


def test_seal_roundtrip():
    obj = {"b": [1, 2], "a": "x"}
    assert parse_fixture(seal(obj)) == obj
    with pytest.raises(FixtureError):
        parse_fixture(seal(obj).replace('"x"', '"y"'))
    with pytest.raises(FixtureError):
        parse_fixture('{"a": 1}')


def test_corrupted_fixture_exits_with_mismatch(data_copy):
    path = data_copy / "table.json"
    text = path.read_text()
    path.write_text(text.replace("-2163", "-2164", 1))
    with pytest.raises(FixtureError):
        load_fixtures(data_copy)
    code, _ = run("--fixtures", str(data_copy), "donaldson", "--kmax", "1", "--mmax", "1")
    assert code == 1


def test_missing_fixture_directory(tmp_path):
    code, _ = run("--fixtures", str(tmp_path / "nowhere"), "verify", "--stage", "N")
    assert code == 1


def test_resealed_wrong_value_fails_the_check(data_copy):
    path = data_copy / "classes.json"
    doc = parse_fixture(path.read_text())
    doc["N"]["euler"] = 14
    path.write_text(seal(doc))
    code, _ = run("--fixtures", str(data_copy), "verify", "--stage", "N")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["export", "Nope"],
        ["donaldson", "--kmax", "0"],
        ["--threads", "0", "verify", "--stage", "N"],
        ["euler", "--k", "1"],
        ["--format", "yaml", "verify"],
    ],
)
def test_usage_errors(argv):
    code, _ = run(*argv)
    assert code == 2


def test_budget_exhaustion_is_an_internal_error():
    code, _ = run("--budget", "1", "verify", "--stage", "N")
    assert code == 3


def test_stage_report_json_schema():
    code, text = run("--format", "json", "stage", "N")
    assert code == 0
    doc = json.loads(text)
    assert set(doc) == {"stage", "checks", "elapsed_ms"}
    assert doc["stage"] == "N"
    for c in doc["checks"]:
        assert set(c) == {"name", "expected", "computed", "pass"}
        assert isinstance(c["expected"], str) and isinstance(c["computed"], str)
        assert c["pass"] is True


def test_verify_formats_are_deterministic():
    for fmt in ("text", "csv", "markdown"):
        a = run("--format", fmt, "verify", "--stage", "curve3")
        b = run("verify", "--stage", "curve3", "--format", fmt)
        assert a == b and a[0] == 0
    code, text = run("--format", "csv", "verify", "--stage", "curve1")
    assert text.splitlines()[0] == "stage,name,expected,computed,pass"


def test_export_ring_document():
    code, text = run("export", "P2")
    assert code == 0
    doc = json.loads(text)
    assert doc == json.loads(run("--format", "json", "export", "P2")[1])


def test_donaldson_and_euler_commands():
    code, text = run("--format", "csv", "donaldson", "--kmax", "5", "--mmax", "20", "--check")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "m\\k,1,2,3,4,5"
    assert lines[2] == "2,0,0,-2163,-8739126,-1438830000"
    assert len(lines) == 21
    code, text = run("donaldson", "--kmax", "1", "--mmax", "1")
    assert code == 0 and text.split() == ["m\\k", "1", "1", "0"]
    code, text = run("--format", "json", "euler", "--k", "1", "--m", "20")
    assert code == 0
    assert json.loads(text) == {"k": 1, "m": 20, "chi": "9322330905"}
