import json

import pytest

from main import main
from src.cli import parse_arguments, parse_system, read_system_file, serialize_system
from src.errors import (
    BoundsError,
    ContractViolation,
    PreconditionError,
    RadicalError,
    SingularMatrixError,
    SystemParseError,
)
from src.executor import RadicalExecutor
from src.polycore import format_polynomial

TEXT_SYSTEM = """\
# four simple roots on a grid
vars: x1, x2
field: rational
poly: x1^2 - 1
poly: x2^2 - 4
"""


def write(tmp_path, text, name="system.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_text_system():
    sys_ = parse_system(TEXT_SYSTEM)
    assert sys_.vars == ("x1", "x2")
    assert [format_polynomial(f) for f in sys_.polys] == ["x1**2 - 1", "x2**2 - 4"]
    assert sys_.field.exact
    assert sys_.at_infinity


def test_parse_json_system():
    document = json.dumps(
        {
            "vars": ["x"],
            "field": "approx",
            "tolerance": 1e-6,
            "polys": ["x^2 - 2"],
            "at_infinity": False,
        }
    )
    sys_ = parse_system(document)
    assert not sys_.field.exact
    assert sys_.field.tolerance == 1e-6
    assert not sys_.at_infinity


def test_field_and_tolerance_overrides():
    sys_ = parse_system(TEXT_SYSTEM, field_name="approx", tolerance=1e-5)
    assert sys_.field.name == "approx"
    assert sys_.field.tolerance == 1e-5


def test_polynomial_error_reports_its_line():
    text = "vars: x\npoly: x^2\npoly: x +* 1\n"
    with pytest.raises(SystemParseError) as excinfo:
        parse_system(text)
    assert excinfo.value.line == 3
    assert "line 3" in str(excinfo.value)


@pytest.mark.parametrize(
    "text",
    [
        "poly: x\n",
        "vars: x\n",
        "vars: x x\npoly: x\n",
        "vars: x\npoly: x - x\n",
        "vars: x\ncolour: red\n",
        "vars: x\nfield: complex\npoly: x\n",
        "vars: x\ntolerance: -1\npoly: x\n",
        '{"vars": ["x"], "polys": ["x"], "extra": 1}',
        '{"vars": ["x"], "polys": ',
    ],
)
def test_malformed_documents(text):
    with pytest.raises(SystemParseError):
        parse_system(text)


def test_json_decode_error_has_a_location():
    with pytest.raises(SystemParseError) as excinfo:
        read_system_file('{\n  "vars": ["x"],\n  "polys": [x]\n}')
    assert excinfo.value.line == 3


def test_serialize_parses_back():
    sys_ = parse_system(TEXT_SYSTEM)
    again = parse_system(serialize_system(sys_))
    assert again.polys == sys_.polys
    assert again.vars == sys_.vars


def test_parse_arguments_defaults():
    args = parse_arguments(["radical", "system.txt"])
    assert args.pipeline == "macaulay"
    assert args.seed == 0
    assert not args.shortcut


def test_parse_arguments_rejects_bad_values():
    with pytest.raises(SystemExit):
        parse_arguments(["radical", "system.txt", "--retries", "-1"])
    with pytest.raises(SystemExit):
        parse_arguments(["magic", "system.txt"])


def test_exit_codes_follow_the_error_kind():
    assert RadicalError("x").exit_code == 1
    assert SystemParseError("x").exit_code == 2
    assert PreconditionError("x").exit_code == 3
    assert ContractViolation("x").exit_code == 4
    assert SingularMatrixError("x").exit_code == 4


def test_radical_of_a_double_root(tmp_path, capsys):
    path = write(tmp_path, "vars: x\npoly: x^2\n")
    code, out, _ = run(capsys, "radical", path, "--quiet")
    assert code == 0
    document = json.loads(out)
    assert document["generators"] == ["x"]
    assert document["basis"] == ["1"]
    assert document["mult_matrices"][0]["entries"] == [["0"]]
    assert document["bounds"]["N"] == 2


def test_radical_of_the_unit_ideal(tmp_path, capsys):
    path = write(tmp_path, "vars: x\npoly: x + 1\npoly: x\n")
    code, out, _ = run(capsys, "radical", path, "--quiet")
    assert code == 0
    assert json.loads(out)["generators"] == ["1"]


def test_bounds_predict_the_quotient_dimension(tmp_path, capsys):
    code, out, _ = run(capsys, "bounds", write(tmp_path, TEXT_SYSTEM), "-q")
    assert code == 0
    bounds = json.loads(out)["bounds"]
    assert bounds["N_prediction"] == 4
    assert (bounds["k"], bounds["delta"]) == (2, 3)


def test_squarefree_command(tmp_path, capsys):
    path = write(tmp_path, "vars: x\npoly: (x-1)^2*(x-2)\n")
    code, out, _ = run(capsys, "squarefree", path, "-q")
    assert code == 0
    assert json.loads(out)["squarefree"] == "x**2 - 3*x + 2"


def test_roots_command(tmp_path, capsys):
    path = write(tmp_path, "vars: x\nfield: approx\npoly: x^2 - 1\n")
    code, out, _ = run(capsys, "roots", path, "-q")
    assert code == 0
    roots = sorted(point[0] for point in json.loads(out)["roots"])
    assert roots == pytest.approx([-1.0, 1.0])


def test_output_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, TEXT_SYSTEM)
    _, first, _ = run(capsys, "traces", path, "--seed", "7", "-q")
    _, second, _ = run(capsys, "traces", path, "--seed", "7", "-q")
    assert first == second


def test_all_pipelines_agree(tmp_path, capsys):
    path = write(tmp_path, TEXT_SYSTEM)
    code, out, _ = run(capsys, "radical", path, "--pipeline", "both", "-q")
    assert code == 0
    document = json.loads(out)
    assert sorted(document["pipelines"]) == ["bezout", "macaulay", "shortcut"]
    assert document["summary"]["failed"] == 0
    assert document["cross_check"]["all_agree"]


def test_bezout_still_runs_when_the_macaulay_side_fails(tmp_path, capsys):
    """A bound failure on Mac_Delta is recorded per pipeline, not fatal."""
    path = write(tmp_path, "vars: x1, x2\npoly: x1*x2 - 2\npoly: x1*x2 + x1 - 3\n")
    code, out, _ = run(capsys, "radical", path, "--pipeline", "both", "-q")
    assert code == 0
    document = json.loads(out)
    assert sorted(document["pipelines"]) == ["bezout"]
    assert document["pipelines"]["bezout"]["charpolys"] == [["1", "-1"], ["1", "-2"]]
    summary = document["summary"]
    assert (summary["total"], summary["successful"], summary["failed"]) == (3, 1, 2)
    failed = [d["pipeline"] for d in summary["details"] if not d["success"]]
    assert failed == ["macaulay", "shortcut"]
    assert document["cross_check"]["all_agree"] is None


def test_quotient_failure_is_shared_between_pipelines(monkeypatch, system):
    calls = []

    def failing_build(*args, **kwargs):
        calls.append(args)
        raise BoundsError("standard monomial of degree 3 exceeds k=2")

    monkeypatch.setattr("src.executor.build_quotient", failing_build)
    executor = RadicalExecutor(system(["x1", "x2"], ["x1^2 - 1", "x2^2 - 4"]))
    document = executor.run_all_pipelines()
    assert len(calls) == 1
    assert list(document["pipelines"]) == ["bezout"]
    errors = {d["pipeline"]: d.get("error") for d in document["summary"]["details"]}
    assert "exceeds k=2" in errors["macaulay"] and "exceeds k=2" in errors["shortcut"]
    assert document["cross_check"] == {"reference": "macaulay", "agree": {}, "all_agree": None}


def test_output_file_and_summary(tmp_path, capsys):
    path = write(tmp_path, "vars: x\npoly: x^2 - 1\n")
    output = tmp_path / "out" / "result.json"
    code, out, err = run(capsys, "radical", path, "--output", str(output))
    assert code == 0
    assert json.loads(output.read_text(encoding="utf-8")) == json.loads(out)
    assert "RADICAL SUMMARY" in err


def test_parse_error_exit_code(tmp_path, capsys):
    code, out, _ = run(capsys, "radical", write(tmp_path, "vars: x\npoly: x^\n"))
    assert code == 2
    assert out == ""


def test_bezout_needs_a_square_system(tmp_path, capsys):
    path = write(tmp_path, "vars: x y\npoly: x^2\npoly: x*y\npoly: y^2\n")
    code, _, _ = run(capsys, "bezout-radical", path, "-q")
    assert code == 3


def test_squarefree_needs_one_univariate_polynomial(tmp_path, capsys):
    code, _, _ = run(capsys, "squarefree", write(tmp_path, TEXT_SYSTEM), "-q")
    assert code == 3
