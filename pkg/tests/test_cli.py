import itertools
import json
from pathlib import Path

import jsonschema
import pytest

from arrmono.cli import main
from conftest import presentation

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
CASES = json.loads((GOLDEN / "index.json").read_text())
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_reports(capsys, name):
    code, out, _ = run(capsys, *CASES[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_reports_match_schema(name):
    jsonschema.validate(json.loads((GOLDEN / name).read_text()), SCHEMA)


def test_reports_are_byte_stable(capsys):
    first = run(capsys, "analyze", "--builtin", "Pappus", "--json")[1]
    second = run(capsys, "analyze", "--builtin", "Pappus", "--json")[1]
    assert first == second


def test_a3_report_contents(capsys):
    code, out, _ = run(capsys, "analyze", "--builtin", "A3", "--json")
    r = json.loads(out)
    assert code == 0
    assert r["eigenspaces"]["b1_F"] == 7
    assert [c["conclusion"] for c in r["certificates"]] == ["NontrivialMonodromy"]
    assert r["consistency"] and all(c["passed"] for c in r["consistency"])


def test_b3_report_contents(capsys):
    r = json.loads(run(capsys, "analyze", "--builtin", "B3", "--json")[1])
    assert r["eigenspaces"]["trivial_monodromy"] and r["eigenspaces"]["b1_F"] == 8
    assert r["bounds"] == [] and r["certificates"] == []
    assert not any(m["reduced"] for m in r["multinets"]["items"])


def test_hesse_is_bounds_only(capsys):
    code, out, _ = run(capsys, "analyze", "--builtin", "Hesse", "--json")
    r = json.loads(out)
    assert code == 0
    assert r["eigenspaces"]["status"] == "bounds only (non-real)"
    assert r["eigenspaces"]["bounds"] == [{"order": 2, "lower_bound": 2}, {"order": 4, "lower_bound": 2}]
    assert any("presentation" in w for w in r["warnings"])
    (cert,) = r["certificates"]
    assert cert["k"] == 4 and cert["e"] == 3 and cert["reduced"]


def test_text_output(capsys):
    code, out, _ = run(capsys, "milnor", "--builtin", "A3")
    assert code == 0
    assert "b1(F) = 7" in out and "monodromy non-trivial" in out


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "lattice", "--builtin", "B3", "--json", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == (GOLDEN / "lattice_B3.json").read_text()
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_own_presentation_round_trip(capsys, tmp_path):
    path = tmp_path / "a3.json"
    path.write_text(json.dumps(presentation("A3").to_json()))
    code, out, _ = run(capsys, "milnor", "--builtin", "A3", "--json", "--presentation", str(path))
    e = json.loads(out)["eigenspaces"]
    assert code == 0 and e["source"] == "external presentation"
    assert {x["order"]: x["dim"] for x in e["by_order"]} == {1: 5, 2: 0, 3: 1, 6: 0}


def test_characters_file(capsys, tmp_path):
    path = tmp_path / "chars.json"
    path.write_text(json.dumps([
        {"order": 3, "exponents": [1, 1, 1, 1, 1, 1]},
        {"order": 2, "exponents": [1, 1, 0, 0, 1, 1]},
    ]))
    code, out, _ = run(capsys, "milnor", "--builtin", "A3", "--json", "--characters", str(path))
    r = json.loads(out)
    assert code == 0
    checks = r["eigenspaces"]["cover"]["pullback_checks"]
    assert len(checks) == 2 and all(c["base_dim"] <= c["cover_dim"] for c in checks)
    assert any(c["name"] == "pullback_inequality" and c["passed"] for c in r["consistency"])


def test_wrong_presentation_fails_a_check(capsys, tmp_path):
    # Z^11 is not pi_1 of the Hesse complement: the 4-net bound catches it
    gens = 11
    rels = [[a, b, -a, -b] for a, b in itertools.combinations(range(1, gens + 1), 2)]
    meridians = [[i] for i in range(1, gens + 1)] + [[-i for i in range(gens, 0, -1)]]
    path = tmp_path / "free_abelian.json"
    path.write_text(json.dumps({"generators": gens, "relators": rels, "meridians": meridians}))
    code, out, _ = run(capsys, "analyze", "--builtin", "Hesse", "--json", "--presentation", str(path))
    r = json.loads(out)
    assert code == 2
    failed = [c["name"] for c in r["consistency"] if not c["passed"]]
    assert failed == ["bounds_below_exact"]


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "lattice", "--builtin", "Nope")
    assert code == 1 and "Nope" in err and err.count("known:") == 1

    code, _, err = run(capsys, "lattice", "--input", str(tmp_path / "missing.json"))
    assert code == 1 and "missing.json" in err

    bad = tmp_path / "bad.json"
    bad.write_text('{"lines": [\n[1, 0, 0],\n[0, 1')
    code, _, err = run(capsys, "lattice", "--input", str(bad))
    assert code == 1 and "bad.json:3" in err

    code, _, err = run(capsys, "milnor", "--builtin", "A3", "--infinity-line", "9")
    assert code == 1

    chars = tmp_path / "chars.json"
    chars.write_text(json.dumps([{"order": 3, "exponents": [1, 0, 0, 0, 0, 0]}]))
    code, _, err = run(capsys, "milnor", "--builtin", "A3", "--characters", str(chars))
    assert code == 1

    chars.write_text(json.dumps([{"order": 3, "exponents": [1, 2]}]))
    code, _, err = run(capsys, "milnor", "--builtin", "A3", "--characters", str(chars))
    assert code == 1 and "2 entries" in err


def test_input_file(capsys, tmp_path):
    path = tmp_path / "arr.json"
    path.write_text(json.dumps({"name": "triangle", "lines": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    code, out, _ = run(capsys, "analyze", "--input", str(path), "--json")
    r = json.loads(out)
    assert code == 0
    assert r["eigenspaces"]["b1_F"] == 2 and r["eigenspaces"]["trivial_monodromy"]
    jsonschema.validate(r, SCHEMA)


def test_missing_source_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["lattice"])
    assert exc.value.code == 2
