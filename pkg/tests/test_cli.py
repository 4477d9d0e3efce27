import importlib.util
import json
import subprocess
import sys
from pathlib import Path

import pytest

from corpus_helpers import FAIL_FILES, VALID_FILES
from corat import cli
from corat.cli import EXIT_BOUND, EXIT_FAIL, EXIT_OK, EXIT_PARSE, ParseError, load, load_text, normalize, run

ROOT = Path(__file__).resolve().parent.parent


def run_json(*argv):
    code, text = run(list(argv))
    return code, json.loads(text)


@pytest.mark.parametrize("fname", VALID_FILES)
def test_validate_valid_corpus(fname):
    code, env = run_json("validate", "--file", fname)
    assert code == EXIT_OK and env["status"] == "pass" and env["exit_code"] == 0


@pytest.mark.parametrize("fname", FAIL_FILES)
def test_validate_known_fail_fixtures(fname):
    code, env = run_json("validate", "--file", fname)
    assert code == EXIT_FAIL and env["status"] == "fail"
    failing = [s for s in env["result"]["structures"].values() if not s["report"]["ok"]]
    assert failing
    for s in failing:
        assert any(c["status"] == "fail" and "witness" in c for c in s["report"]["checks"])


def test_dangling_reference_is_parse_error():
    code, env = run_json("validate", "--file", "corpus:dangling_reference")
    assert code == EXIT_PARSE and env["status"] == "error"
    assert "C.counit" in env["error"]


def test_missing_file_is_parse_error(tmp_path):
    code, env = run_json("validate", "--file", str(tmp_path / "nope.json"))
    assert code == EXIT_PARSE


def test_rat_on_zw_reports_proper_submodule():
    code, env = run_json("rat", "--file", "corpus:zw_z4", "--name", "P", "--module", "Cstar_regular")
    assert code == EXIT_OK
    r = env["result"]
    assert r["proper"] is True and r["carrier"] == [4, 2] and r["rat_invariant_factors"] == [2, 2]
    statuses = {c["name"]: c["status"] for c in r["report"]["checks"]}
    assert statuses["agrees with enumeration"] == "pass"


def test_rat_needs_module_flag():
    assert run(["rat", "--file", "corpus:zw_z4", "--name", "P"])[0] == EXIT_PARSE


def test_rat_wrong_kind_is_parse_error():
    assert run(["rat", "--file", "corpus:zw_z4", "--name", "C", "--module", "aug"])[0] == EXIT_PARSE


def test_bound_flag_and_env(monkeypatch):
    argv = ["rat", "--file", "corpus:zw_z4", "--name", "P", "--module", "Cstar_regular"]
    code, env = run_json(*argv, "--bound", "4")
    assert code == EXIT_BOUND and env["status"] == "resource-limit"
    monkeypatch.setenv("CORAT_BOUND", "4")
    assert run(argv)[0] == EXIT_BOUND
    # the flag wins over the environment
    assert run(argv + ["--bound", "100"])[0] == EXIT_OK
    monkeypatch.setenv("CORAT_BOUND", "lots")
    assert run(argv)[0] == EXIT_PARSE


def test_dual_command():
    code, env = run_json("dual", "--file", "corpus:zw_z4", "--name", "C")
    assert code == EXIT_OK
    assert json.dumps(env["result"]).count("[[1, 0, 0, 0], [0, 1, 1, 0]]") >= 1


def test_entwine_command():
    code, env = run_json("entwine", "--file", "corpus:entwining_twist_gf2", "--name", "L")
    assert code == EXIT_OK
    r = env["result"]
    assert r["alpha_prime"]["mono_on_family"] is True and r["report"]["ok"]
    code, env = run_json("entwine", "--file", "corpus:fail_entwining", "--name", "L")
    assert code == EXIT_FAIL


def test_xi_command():
    code, env = run_json("xi", "--file", "corpus:entwining_twist_z4", "--name", "canonical")
    assert code == EXIT_OK and env["result"]["roundtrip"] is True
    assert env["result"]["action"] == [[1, 0, 0, 0], [0, 0, 0, 1]]
    assert run(["xi", "--file", "corpus:fail_entwined_module", "--name", "M"])[0] == EXIT_FAIL


def test_rational_report_command():
    code, env = run_json("rational-report", "--file", "corpus:comatrix_gf2", "--name", "P")
    assert code == EXIT_OK and env["result"]["verdict"] == "rational-on-family"
    # non-rationality is a computed verdict, not a failed check
    code, env = run_json("rational-report", "--file", "corpus:zw_z4", "--name", "P", "--family", "2,R")
    assert code == EXIT_OK and env["result"]["verdict"] == "not-rational"
    assert run(["rational-report", "--file", "corpus:zw_z4", "--name", "P", "--family", "3"])[0] == EXIT_PARSE
    assert run(["rational-report", "--file", "corpus:fail_pairing", "--name", "P"])[0] == EXIT_FAIL


def test_corpus_listing_and_text_output():
    code, text = run(["corpus"])
    assert code == EXIT_OK and "corpus:zw_z4" in text.split()
    code, text = run(["validate", "--file", "corpus:fail_coalgebra", "--text"])
    assert code == EXIT_FAIL and text.startswith("validate corpus:fail_coalgebra: fail (exit 1)")
    assert "FAIL" in text


def test_envelope_schema():
    _, env = run_json("validate", "--file", "corpus:grouplike_z4")
    assert env["schema_version"] == cli.SCHEMA_VERSION
    assert {"tool_version", "command", "file", "status", "exit_code", "warnings"} <= set(env)


def test_json_error_names_line_and_column():
    with pytest.raises(ParseError, match=r"line 2, column \d+"):
        load_text('{"ring": "Z/2",\n  "objects": {,}}')


def test_field_errors_name_the_field():
    doc = {"ring": "Z/2", "objects": {"X": [2]},
           "morphisms": {"f": {"source": "X", "target": "X", "matrix": [[1, 0]]}},
           "structures": {}}
    with pytest.raises(ParseError, match="morphisms.f"):
        cli.parse(doc)
    with pytest.raises(ParseError, match="ring"):
        cli.parse({"ring": "Z/1"})


def write(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def test_residue_reduction_warns(tmp_path):
    sf = load("corpus:grouplike_gf3")
    doc = cli.serialize(sf)
    key = next(k for k in doc["morphisms"] if k.endswith("comult"))
    doc["morphisms"][key]["matrix"] = [[4]]
    code, env = run_json("validate", "--file", write(tmp_path, doc))
    assert code == EXIT_OK
    assert any("reduced to canonical residues" in w for w in env["warnings"])
    # an unreduced-free file carries no warnings
    assert run_json("validate", "--file", "corpus:grouplike_gf3")[1]["warnings"] == []


@pytest.mark.parametrize("fname", VALID_FILES + FAIL_FILES)
def test_normalize_is_idempotent(fname):
    doc = json.loads(cli.resolve_path(fname).read_text())
    once = normalize(doc)
    assert normalize(once) == once


def test_reports_are_byte_identical(tmp_path):
    for argv in (["validate", "--file", "corpus:zw_z4"],
                 ["rat", "--file", "corpus:zw_z4", "--name", "P", "--module", "aug"],
                 ["entwine", "--file", "corpus:entwining_twist_gf2", "--name", "L"]):
        assert run(argv)[1] == run(argv)[1]
    # and across processes, through the installed entry point
    argv = [sys.executable, "-m", "corat.cli", "validate", "--file", "corpus:comatrix_gf3"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == b.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.decode() == run(argv[3:])[1]


def test_shipped_corpus_matches_generator(tmp_path):
    spec = importlib.util.spec_from_file_location("make_corpus", ROOT / "scripts" / "make_corpus.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.OUT = tmp_path
    mod.main()
    shipped = {p.name: p.read_text() for p in cli.resolve_path("corpus:zw_z4").parent.glob("*.json")}
    fresh = {p.name: p.read_text() for p in tmp_path.glob("*.json")}
    assert fresh == shipped
