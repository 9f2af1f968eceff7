import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ecgw.cli import cli
from ecgw.document import canonical, empty_document, load, parse, save
from ecgw.errors import ParseError, ValidationError
from ecgw.exactqi import is_quasi_iso

SAMPLE = Path(__file__).parent / "data" / "sample.json"


def run(*args, env=None):
    return CliRunner().invoke(cli, [str(a) for a in args], env=env)


def test_round_trip_is_byte_identical(tmp_path):
    doc = load(SAMPLE)
    out = tmp_path / "out.json"
    save(doc, out)
    assert out.read_bytes() == SAMPLE.read_bytes()
    save(load(out), out)
    assert out.read_bytes() == SAMPLE.read_bytes()


def test_canonical_sorts_sets_and_keys():
    text = canonical({"sets": {"s": ["b", "a"]}, "version": "1"})
    assert json.loads(text)["sets"]["s"] == ["a", "b"]
    assert text.endswith("\n") and text.index('"sets"') < text.index('"version"')


def test_empty_document_is_valid():
    doc = empty_document()
    assert doc.complexes == {} and parse("{}").raw == {"version": "1"}


def _bad_doc(tmp_path):
    raw = json.loads(SAMPLE.read_text())
    # degree 0 image contains y, which d_1 hits
    raw["sets"]["yw"] = ["y"]
    raw["complexes"]["bad"] = {
        "window": [-1, 1],
        "degrees": {"1": "x", "0": "y", "-1": "w"},
        "images": {"1": "x", "0": "y"},
        "diff": {"1": "d_xy1", "0": "yw_map"},
    }
    raw["maps"]["yw_map"] = {"dom": "y", "cod": "w", "assign": {"y": "w"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    return path


def test_chain_condition_violation_names_degree(tmp_path):
    with pytest.raises(ValidationError) as err:
        load(_bad_doc(tmp_path))
    assert "complexes.bad[0]" in str(err.value)


@pytest.mark.parametrize(
    "text",
    ["not json", "[]", '{"version": "9"}', '{"widgets": {}}', '{"sets": []}'],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_unresolved_reference():
    with pytest.raises(ValidationError) as err:
        parse('{"maps": {"f": {"dom": "nope", "cod": "nope", "assign": {}}}}')
    assert "sets.nope" in str(err.value)


def test_cli_validate_exit_codes(tmp_path):
    r = run("chain", "validate", "--file", SAMPLE)
    assert r.exit_code == 0 and "valid edge" in r.output
    r = run("chain", "validate", "--file", _bad_doc(tmp_path))
    assert r.exit_code == 1 and "invalid" in r.output
    r = run("chain", "validate", "--file", tmp_path / "missing.json")
    assert r.exit_code == 2
    r = run("chain", "qiso", "--file", SAMPLE, "--map", "no_such_map")
    assert r.exit_code == 2


@pytest.mark.parametrize("name", ["into_edge", "into_point", "edge_open", "open_e"])
def test_cli_qiso_matches_library(name):
    expected = is_quasi_iso(load(SAMPLE).get("chain_maps", name))
    r = run("chain", "qiso", "--file", SAMPLE, "--map", name)
    assert r.exit_code == 0 and r.output.strip() == ("true" if expected else "false")


def test_cli_chain_commands():
    r = run("chain", "homology", "--file", SAMPLE, "--complex", "open")
    assert json.loads(r.output) == {"0": ["z"], "1": []}
    r = run("chain", "exact", "--file", SAMPLE, "--complex", "point")
    assert r.output.startswith("false: degree 0")
    r = run("chain", "coker", "--file", SAMPLE, "--map", "edge_open")
    assert json.loads(r.output)["complex"]["degrees"]["0"] == ["z"]
    r = run("chain", "ker", "--file", SAMPLE, "--map", "edge_open")
    assert r.exit_code == 2
    r = run("chain", "ker", "--file", SAMPLE, "--map", "open_e")
    assert json.loads(r.output)["complex"]["degrees"]["0"] == ["z"]


def test_cli_sdot_commands():
    r = run("sdot", "build", "--file", SAMPLE, "--staircase", "abc")
    assert r.exit_code == 0 and json.loads(r.output)["n"] == 3
    r = run("sdot", "face", "--file", SAMPLE, "--staircase", "abc", "--index", "0")
    assert json.loads(r.output)["n"] == 2
    r = run("sdot", "degeneracy", "--file", SAMPLE, "--staircase", "abc", "--index", "1", "--dot")
    assert r.output.startswith("digraph staircase")
    r = run("sdot", "face", "--file", SAMPLE, "--staircase", "abc", "--index", "7")
    assert r.exit_code == 2
    r = run("sdot", "identities", "--file", SAMPLE, "--staircase", "abc")
    assert r.exit_code == 0 and "FAIL" not in r.output


def test_cli_k0_commands():
    r = run("k0", "euler", "--file", SAMPLE)
    assert "open 1" in r.output and "edge 0" in r.output
    r = run("k0", "gw", "--file", SAMPLE, "--window", 0, 1, "--trials", 20)
    assert r.exit_code == 0
    assert r.output.splitlines()[0] == "complex chi degree_vector image_vector"
    assert "edge 0 [1,1] [1]" in r.output
    r = run("k0", "relations", "--trials", 20)
    assert r.exit_code == 0


def test_cli_audit_and_seed_env():
    a = run("audit", "--trials", 20, "--seed", 4)
    b = run("audit", "--trials", 20, env={"ECGW_SEED": "4"})
    assert a.exit_code == 0 and a.output == b.output
    c = run("audit", "--trials", 20, "--seed", 4, "--jobs", 2)
    assert c.output == a.output
    assert run("audit", "--trials", 0).exit_code == 2
    assert run("audit", "--instance", "bogus").exit_code == 2
    r = run("audit", "--suite", "criterion", "--instance", "chain", "--trials", 40)
    assert r.exit_code == 1 and "FAIL criterion:e" in r.output


def test_cli_mset_instance(tmp_path):
    table = tmp_path / "m.json"
    table.write_text(json.dumps({"elements": ["1", "m"], "identity": "1", "table": [["1", "m"], ["m", "m"]]}))
    r = run("audit", "--instance", f"mset:{table}", "--trials", 10)
    assert r.exit_code == 0, r.output
    r = run("audit", "--instance", f"mset:{tmp_path / 'none.json'}")
    assert r.exit_code == 2
    table.write_text(json.dumps({"elements": ["1"]}))
    r = run("audit", "--instance", f"mset:{table}")
    assert r.exit_code == 2 and "needs identity, table" in r.output
