import io

import pytest

from src.cli import run
from src.code_file import write_code
from src.codes import golay_code


def invoke(*argv, stdin=""):
    """Run the CLI in-process; returns (exit code, stdout, stderr)"""
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def test_rm_code_piped_into_check():
    status, code_file, _ = invoke("code", "rm", "--r", "1", "--m", "3")
    assert status == 0
    status, report, _ = invoke("check", "--expect-so", "--expect-self-dual", stdin=code_file)
    assert status == 0
    assert report.splitlines() == [
        "[8,4] self-orthogonal: yes, self-dual: yes",
        "rank: 4",
        "field: GF(2)",
        "dual contains code: yes",
        "even weight: yes",
    ]


def test_check_fails_expectation():
    _, code_file, _ = invoke("code", "rs", "--q", "16", "--n", "6", "--k", "3")
    status, report, _ = invoke("check", "--expect-so", stdin=code_file)
    assert status == 1
    assert report.splitlines()[0] == "[6,3] self-orthogonal: no, self-dual: no"
    assert "dual contains code: no" in report.splitlines()


def test_check_rejects_non_utf8_file(tmp_path):
    path = tmp_path / "bad.code"
    path.write_bytes(b"2 4 1\n1 0 1 \xff\n")
    status, out, err = invoke("check", str(path))
    assert (status, out) == (2, "")
    assert err.startswith("error:")
    assert "byte 12" in err


def test_field():
    status, out, _ = invoke("field", "--m", "2")
    assert status == 0
    assert "self-dual basis: 2 3" in out
    assert out.splitlines()[-2:] == ["1 0", "0 1"]


@pytest.mark.parametrize("jobs", ["1", "2", "4"])
def test_mindist_of_golay(tmp_path, jobs):
    path = tmp_path / "golay.code"
    write_code(golay_code(), path)
    status, out, _ = invoke("mindist", str(path), "--jobs", jobs)
    assert (status, out.strip()) == (0, "8")


def test_expand_self_orthogonal_outer():
    _, outer, _ = invoke("code", "so-outer", "--q", "16", "--n", "8", "--k", "3", "--seed", "5")
    status, expanded, _ = invoke("expand", stdin=outer)
    assert status == 0
    status, report, _ = invoke("check", "--expect-so", stdin=expanded)
    assert status == 0
    assert report.splitlines()[0] == "[32,12] self-orthogonal: yes, self-dual: no"


def test_concat_from_files(tmp_path):
    outer, inner, out = tmp_path / "outer.code", tmp_path / "inner.code", tmp_path / "concat.code"
    assert invoke("code", "so-outer", "--q", "16", "--n", "6", "--k", "2", "--seed", "1", "--out", str(outer))[0] == 0
    assert invoke("code", "rm", "--r", "1", "--m", "3", "--out", str(inner))[0] == 0
    status, _, _ = invoke("concat", "--outer", str(outer), "--inner", str(inner), "--out", str(out))
    assert status == 0
    status, report, _ = invoke("check", str(out), "--expect-so")
    assert status == 0
    assert report.startswith("[48,8] self-orthogonal: yes")


def test_tables():
    status, out, _ = invoke("tables", "--which", "2")
    assert status == 0
    assert out.splitlines()[2] == "3,6,6,7,5,84"
    status, out, _ = invoke("tables", "--which", "1")
    assert "28,14,8,7,7,4,63,127,alt-d8" in out.splitlines()


def test_count_with_oracle():
    status, out, _ = invoke("count", "--n", "4", "--k", "1", "--oracle")
    assert status == 0
    assert "Eq9,4,1,,15,7,false" in out.splitlines()


def test_gv_witness():
    status, out, _ = invoke("gv", "--n", "8", "--delta", "1/2", "--seed", "0")
    assert status == 0
    lines = out.splitlines()
    assert lines[:4] == ["r: 2", "k: 3", "condition holds: true", "witness: [8,3,4]"]


def test_gv_names_the_admissible_delta_range():
    status, _, err = invoke("gv", "--n", "10", "--delta", "0.1", "--seed", "0")
    assert status == 2
    assert "δ must lie in [2/5, 1/2]" in err
    status, _, err = invoke("gv", "--n", "6", "--delta", "1/2", "--seed", "0")
    assert status == 2
    assert "n >= 8" in err


def test_bounds_to_file(tmp_path):
    path = tmp_path / "fig.csv"
    status, _, _ = invoke("bounds", "--samples", "5", "--t-max", "3", "--out", str(path))
    assert status == 0
    assert path.read_text(encoding="utf-8").startswith("label,delta,rate\n")


def test_bounds_output_is_stable():
    status, first, _ = invoke("bounds", "--samples", "11", "--t-max", "4")
    assert status == 0
    assert invoke("bounds", "--samples", "11", "--t-max", "4")[1] == first


@pytest.mark.parametrize("argv", [
    ["code", "rm", "--r", "5", "--m", "3"],
    ["frobnicate"],
    ["check", "/nonexistent.code"],
    ["--config", "/nonexistent.env", "tables", "--which", "2"],
    ["tables", "--which", "3"],
    ["code", "so-outer", "--q", "16", "--n", "8", "--k", "3"],
    ["gv", "--n", "8", "--delta", "1/2"],
])
def test_usage_errors(argv):
    status, _, err = invoke(*argv)
    assert status == 2
    assert err.startswith("error:")


def test_help_exits_cleanly(capsys):
    assert invoke("--help")[0] == 0
    assert "socodes" in capsys.readouterr().out
