import csv
import io
import json

import pytest

from patmoments.cli import main, parse_args


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_valid_configs():
    args = parse_args(["moment", "--pattern", "toeplitz", "--monomial", "1,2,3,1,2,3"])
    assert args.monomial == (1, 2, 3, 1, 2, 3)
    args = parse_args(["pofw", "--pattern", "wigner", "--word", "abab"])
    assert args.word == (1, 2, 1, 2)


@pytest.mark.parametrize("argv", [
    ["pofw", "--pattern", "wigner", "--word", "abc"],
    ["pofw", "--pattern", "wigner", "--word", "aab"],
    ["pofw", "--pattern", "circulant", "--word", "abab"],
    ["moment", "--pattern", "toeplitz", "--monomial", "1,x,2"],
    ["moment", "--pattern", "toeplitz", "--monomial", "1,0"],
    ["moment", "--pattern", "toeplitz", "--monomial", "1,-2"],
    ["words", "--k", "3"],
    ["words", "--k", "18"],
    ["decay", "--pattern", "wigner", "--monomial", "1,1", "--n-grid", "64,32,128"],
    ["simulate", "--pattern", "wigner", "--monomial", "1,1", "--n", "1"],
    ["pofw", "--pattern", "wigner", "--word", "abab", "--method", "mc"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_unknown_pattern_lists_valid_names(capsys):
    with pytest.raises(SystemExit):
        main(["pofw", "--pattern", "circulant", "--word", "abab"])
    assert "reversecirculant" in capsys.readouterr().err


def test_words_k4(capsys):
    code, out, _ = run_cli(capsys, ["words", "--k", "4"])
    assert code == 0
    assert out.splitlines() == ["aabb", "abab", "abba"]


def test_words_colored(capsys):
    code, out, _ = run_cli(capsys, ["words", "--monomial", "1,2,2,1,1,1", "--format", "csv"])
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 3
    assert sorted(r["word"] for r in rows if r["catalan"] == "True") == ["a1b2b2a1c1c1", "a1b2b2c1c1a1"]


def test_moment_toeplitz_json(capsys):
    code, out, _ = run_cli(capsys, ["moment", "--pattern", "toeplitz", "--monomial", "1,2,3,1,2,3", "--format", "json"])
    rec = json.loads(out)
    assert code == 0
    assert set(rec) >= {"config", "results", "version"}
    assert rec["results"][0]["value"] == pytest.approx(0.5, abs=0.02)
    assert rec["config"]["monomial"] == [1, 2, 3, 1, 2, 3]
    assert rec["config"]["fit"] == "quadratic"


def test_classify_reverse_circulant(capsys):
    code, out, _ = run_cli(capsys, ["classify", "--pattern", "reversecirculant"])
    verdicts = {r["notion"]: r["verdict"] for r in json.loads(out)["results"]}
    assert code == 0 and verdicts["half_independent"] == "consistent"


def test_classify_battery_file(tmp_path, capsys):
    path = tmp_path / "battery.txt"
    path.write_text("1,2,1,2\n1,1,1,1\n")
    code, out, _ = run_cli(capsys, ["classify", "--pattern", "wigner", "--battery-file", str(path)])
    rows = json.loads(out)["results"]
    assert code == 0 and all(r["battery_size"] == 2 for r in rows)


def test_missing_battery_file_is_io_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, ["classify", "--pattern", "wigner", "--battery-file", str(tmp_path / "nope")])
    assert code == 3 and "I/O" in err


def test_unwritable_output_is_io_error(tmp_path, capsys):
    target = tmp_path / "missing-dir" / "out.json"
    code, _, err = run_cli(capsys, ["words", "--k", "2", "--output", str(target)])
    assert code == 3 and "I/O" in err


def test_flagged_exit_1(capsys):
    code, out, _ = run_cli(capsys, ["pofw", "--pattern", "toeplitz", "--word", "abab", "--n-grid", "2,3,4",
                                    "--fit", "linear", "--residual-tol", "1e-9"])
    rec = json.loads(out)
    assert code == 1 and rec["results"][0]["flagged"] is True


@pytest.mark.parametrize("argv", [
    ["pofw", "--pattern", "toeplitz", "--word", "abab", "--method", "mc", "--samples", "20000", "--seed", "3"],
    ["pofw", "--pattern", "wigner", "--word", "abba"],
    ["simulate", "--pattern", "hankel", "--monomial", "1,2,2,1", "--n", "40", "--reps", "12", "--seed", "5"],
    ["decay", "--pattern", "toeplitz", "--monomial", "1,2,1,2", "--n-grid", "16,24,32", "--reps", "50"],
    ["moment", "--pattern", "wigner", "--monomial", "1,1,2,2,1,1"],
    ["classify", "--pattern", "symmetriccirculant"],
    ["words", "--k", "6"],
])
def test_csv_json_identical_and_reproducible(argv, capsys, tmp_path):
    code_j, out_j, _ = run_cli(capsys, argv + ["--format", "json"])
    code_j2, out_j2, _ = run_cli(capsys, argv + ["--format", "json"])
    code_c, out_c, _ = run_cli(capsys, argv + ["--format", "csv"])
    assert code_j == code_c == code_j2 == 0
    rec, rec2 = json.loads(out_j), json.loads(out_j2)
    assert rec["results"] == rec2["results"]
    assert rec["config"] == rec2["config"]
    rows = csv_rows(out_c)
    assert len(rows) == len(rec["results"])
    for jrow, crow in zip(rec["results"], rows):
        assert list(jrow) == list(crow)
        for key, val in jrow.items():
            assert crow[key] == ("" if val is None else str(val))
            if isinstance(val, float):
                assert float(crow[key]) == val


def test_json_round_trip(capsys):
    _, out, _ = run_cli(capsys, ["moment", "--pattern", "reversecirculant", "--monomial", "1,2,1,2,1,2"])
    rec = json.loads(out)
    assert json.loads(json.dumps(rec)) == rec
    assert rec["results"][0]["exact"] == "0"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "w.csv"
    code, out, _ = run_cli(capsys, ["words", "--k", "4", "--format", "csv", "-o", str(target)])
    assert code == 0 and out == ""
    assert [r["word"] for r in csv_rows(target.read_text())] == ["aabb", "abab", "abba"]
