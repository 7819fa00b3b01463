import json
import subprocess
import sys

import pytest

from coiso.cli import EXIT_OBSTRUCTED, EXIT_OK, EXIT_PRECISION, EXIT_USAGE, RunConfig, main
from coiso.arithmetic import Rational
from coiso.errors import ArgumentError


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out.strip()


def test_classify(capsys):
    assert run(capsys, "classify", "--rational", "2/3") == (EXIT_OK, "Rational")
    assert run(capsys, "classify", "--liouville", "10", "3") == (EXIT_OK, "LiouvilleLike")
    code, out = run(capsys, "classify", "--quadratic", "1", "5", "2")
    assert code == EXIT_OK and out.startswith("Diophantine k≈2")


def test_usage_errors(capsys):
    assert run(capsys, "classify", "--rational", "x/y")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["classify"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(ArgumentError):
        RunConfig(alpha=Rational(1, 2), truncation=4)


def test_obstruction(capsys, tmp_path):
    code, out = run(capsys, "obstruction", "--rational", "2/3", "--witness", "auto", "--output-dir", str(tmp_path))
    assert (code, out) == (EXIT_OBSTRUCTED, "ObstructedResonance")
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema"] == "coiso/1" and report["report"]["status"] == "ObstructedResonance"
    assert run(capsys, "obstruction", "--liouville", "10", "3", "--witness", "auto") == (
        EXIT_OBSTRUCTED,
        "DivergentSmallDivisor",
    )
    assert run(capsys, "obstruction", "--quadratic", "1", "5", "2", "--witness", "random", "--seed", "7") == (
        EXIT_OK,
        "Solved",
    )


def test_precision_exit(capsys):
    code, _ = run(capsys, "obstruction", "--decimal", "0.6180339887", "--witness", "random")
    assert code == EXIT_PRECISION


def test_continue(capsys, tmp_path):
    code, out = run(capsys, "continue", "--quadratic", "-1", "5", "2", "--witness", "random", "-K", "4",
                    "--output-dir", str(tmp_path))
    assert code == EXIT_OK
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "continuation.json", "gamma_1.json", "gamma_2.json", "gamma_3.json", "gamma_4.json", "residuals.csv",
    ]
    rows = (tmp_path / "residuals.csv").read_text().splitlines()[1:]
    assert len(rows) == 4 and all(float(r.split(",")[1]) <= 1e-8 for r in rows)
    code, out = run(capsys, "continue", "--rational", "2/3")
    assert code == EXIT_OBSTRUCTED and "order 2" in out
    code, out = run(capsys, "continue", "--quadratic", "-1", "5", "2", "--witness", "zero")
    assert code == EXIT_OK


def test_reduce(capsys, tmp_path, monkeypatch):
    out_dir = tmp_path / "env"
    monkeypatch.setenv("COISO_OUTPUT_DIR", str(out_dir))
    assert run(capsys, "obstruction", "--liouville", "10", "3")[0] == EXIT_OBSTRUCTED
    bracket = out_dir / "bracket.json"
    assert run(capsys, "reduce", "--liouville", "10", "3", "--form", str(bracket)) == (
        EXIT_OBSTRUCTED,
        "NotInSpan DivergentSmallDivisor",
    )
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps({"degree": 2, "c": {"terms": []}}))
    assert run(capsys, "reduce", "--quadratic", "-1", "5", "2", "--form", str(zero)) == (EXIT_OK, "InSpan Solved")
    missing = tmp_path / "nope.json"
    assert run(capsys, "reduce", "--rational", "1/2", "--form", str(missing))[0] == EXIT_USAGE


def test_reduce_exact_form_in_span(capsys, tmp_path, golden, rng):
    from coiso.foliation import d_F1
    from coiso.sampling import random_form

    form = tmp_path / "exact.json"
    form.write_text(json.dumps(d_F1(random_form(rng, 1), golden).to_json()))
    code, out = run(capsys, "reduce", "--quadratic", "-1", "5", "2", "--form", str(form))
    assert (code, out) == (EXIT_OK, "InSpan Solved")


def test_deterministic_output(capsys, tmp_path):
    for name in ("a", "b"):
        main(["obstruction", "--quadratic", "1", "5", "2", "--witness", "random", "--seed", "7",
              "--output-dir", str(tmp_path / name)])
    capsys.readouterr()
    for f in ("report.json", "decay.csv", "bracket.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coiso", "classify", "--rational", "22/7"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "Rational"
