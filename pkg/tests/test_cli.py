import csv
import io
import json
import subprocess
import sys

import pytest

from nqdelta.cli import EXIT_CODES, main, run
from nqdelta.specjson import parse_spec

E_SPEC = {"weights": {"kind": "constant", "value": 1}, "sequence": {"kind": "constant", "value": 1}}
EXAMPLE = {"weights": {"kind": "geometric", "ratio": 3, "scale": 1},
           "matrix": {"kind": "unit-column", "index": 1}, "domain": "linf", "codomain": "linf"}


def _invoke(capsys, monkeypatch, argv, spec):
    monkeypatch.setattr(sys, "stdin", io.StringIO(spec if isinstance(spec, str) else json.dumps(spec)))
    code = main([*argv, "--spec", "-"])
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_of_e(capsys, monkeypatch):
    code, out, _ = _invoke(capsys, monkeypatch, ["norm", "--no-timestamp"], E_SPEC)
    rep = json.loads(out)
    assert code == 0 and rep["outcome"] == "Holds" and rep["result"]["estimate"] == "1"


def test_classify_compact_example(capsys, monkeypatch):
    code, out, _ = _invoke(capsys, monkeypatch, ["classify-compact", "--no-timestamp"], EXAMPLE)
    rep = json.loads(out)
    assert code == 2 and rep["outcome"] == "Inconclusive"
    ids = [e["id"] for e in rep["discrepancies"]]
    assert "unit-column-example" in ids
    entry = rep["discrepancies"][ids.index("unit-column-example")]
    assert entry["claimed"]["limit"] == "7/6" and entry["computed"]["limit"] == "2"


@pytest.mark.parametrize("argv,spec,kind", [
    (["invert", "-n", "3"], {"weights": {"kind": "constant"},
                             "matrix": {"kind": "explicit", "rows": [[1], [2, 0]]}}, "singular-triangle"),
    (["norm"], "{not json", "malformed-json"),
    (["norm"], {"weights": {"kind": "explicit", "values": [1, -1]},
                "sequence": {"kind": "unit"}}, "invalid-weights"),
    (["class-check", "--domain", "linf", "--codomain", "c0"],
     {"weights": {"kind": "constant"}, "matrix": {"kind": "zero"}}, "unsupported-class"),
    (["norm"], {"weights": {"kind": "constant"}}, "invalid-spec"),
    (["norm"], {"weights": {"kind": "nope"}, "sequence": {"kind": "unit"}}, "invalid-spec"),
])
def test_input_errors(capsys, monkeypatch, argv, spec, kind):
    code, out, err = _invoke(capsys, monkeypatch, argv, spec)
    assert code == EXIT_CODES[kind] and code > 2
    assert f"error[{kind}]" in err and out == ""


def test_error_codes_distinct():
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)
    assert min(EXIT_CODES.values()) > 2


def test_usage_error_not_inconclusive(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "--spec", "-"])
    assert exc.value.code == EXIT_CODES["usage"]
    capsys.readouterr()


@pytest.mark.parametrize("command,spec", [
    ("norm", E_SPEC), ("classify-compact", EXAMPLE),
    ("dual-norm", {"weights": {"kind": "geometric", "ratio": 3},
                   "sequence": {"kind": "explicit", "values": [0, 0, 0, 0, 0, 1, -1]}}),
])
def test_deterministic_and_round_trip(capsys, monkeypatch, command, spec):
    first = _invoke(capsys, monkeypatch, [command, "--no-timestamp"], spec)[1]
    second = _invoke(capsys, monkeypatch, [command, "--no-timestamp"], spec)[1]
    assert first == second and "generated_at" not in first
    echoed = json.loads(first)["spec"]
    again = parse_spec(echoed)
    assert again.to_json() == echoed


def test_timestamp_present_by_default():
    rep, status = run("norm", parse_spec(E_SPEC))
    assert status == 0 and "generated_at" in rep


def test_dual_norm_reports_both_variants(capsys, monkeypatch):
    spec = {"weights": {"kind": "geometric", "ratio": 3},
            "sequence": {"kind": "explicit", "values": [0, 0, 0, 0, 0, 1, -1]}}
    rep = json.loads(_invoke(capsys, monkeypatch, ["dual-norm", "--no-timestamp"], spec)[1])
    assert "discrepancy" in rep["result"]
    assert rep["discrepancies"]


def test_flag_overrides(capsys, monkeypatch):
    rep = json.loads(_invoke(capsys, monkeypatch,
                             ["norm", "--no-timestamp", "--float", "--nmax", "64", "--tol", "1/1000"],
                             E_SPEC)[1])
    assert rep["spec"]["mode"] == "float" and rep["policy"]["n_max"] == 64
    assert rep["policy"]["tol"] == pytest.approx(0.001)


def test_csv_and_text(capsys, monkeypatch):
    out = _invoke(capsys, monkeypatch, ["norm", "--format", "csv"], E_SPEC)[1]
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["label", "n", "value"] and all(r[0] == "norm" for r in rows[1:])
    out = _invoke(capsys, monkeypatch, ["classify-compact", "--format", "text"], EXAMPLE)[1]
    assert out.startswith("command   classify-compact") and "discrepancy [unit-column-example]" in out


def test_module_entry_point(tmp_path):
    p = tmp_path / "e.json"
    p.write_text(json.dumps(E_SPEC))
    res = subprocess.run([sys.executable, "-m", "nqdelta.cli", "norm", "--spec", str(p), "--no-timestamp"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["outcome"] == "Holds"
