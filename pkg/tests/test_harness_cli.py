"""Scenario parsing, the runner, the built-in suite and the command line."""

import json

import pytest

from grouphomology import cli
from grouphomology.harness import (
    CLAIMS,
    Scenario,
    ScenarioError,
    enumerate_scenarios,
    load_scenarios,
    resolve_suite,
    run,
    run_many,
)


def _one(**kw):
    base = {"id": "t", "claim": "lemma_1_1", "group": {"cyclic": 2}}
    base.update(kw)
    return json.dumps(base)


def test_example_1_values():
    rep = run(Scenario("ex", "example_1", {"ring": {"kind": "Z"}}))
    assert rep.status == "pass"
    assert rep.values == {"M_G": [2], "M^G": [], "Tor_1(Z/2,M)_G": [], "Tor_1(Z/2,M_G)": [2],
                          "Ext^1(Z/2,M^G)": [], "Ext^1(Z/2,M)^G": [2]}
    half = run(Scenario("ex2", "example_1", {"ring": {"kind": "Z[1/l]", "l": 2}}))
    assert half.status == "pass" and half.values["M_G"] == []


def test_lemma_1_3_over_z_is_a_precondition_failure():
    sc = {"ring": "Z", "group": {"cyclic": 2}, "module": "negation", "N": [2]}
    assert run(Scenario("a", "lemma_1_3", sc)).status == "precondition_failure"
    assert run(Scenario("b", "lemma_1_3", sc, 0, True)).status == "pass"
    ok = dict(sc, ring="Z[1/2]")
    assert run(Scenario("c", "lemma_1_3", ok, 0, True)).status == "fail"


def test_theorem_with_b_equal_a_passes():
    sc = {"ring": {"kind": "Z[1/l]", "l": 2}, "group": {"cyclic": 4},
          "subgroup": {"generators": [1]}, "module": {"random": {}}}
    assert run(Scenario("t", "theorem_1_4", sc)).status == "pass"


def test_enumerate_count():
    # 11 abelian groups of order <= 8, three seeds each
    assert len(enumerate_scenarios("lemma_1_1", 8, 3)) == 33


def test_builtin_suite_covers_every_claim():
    claims = {s.claim for s in resolve_suite("default")}
    assert claims == set(CLAIMS)


@pytest.mark.parametrize("text, where", [
    ('{"id": "t", "claim": "nope"}', "claim"),
    (_one(group={"cyclic": "6"}), "group.cyclic"),
    (_one(group={"spiral": 3}), "group"),
    (_one(ring={"kind": "Q"}), "ring.kind"),
    (_one(module={"ambient_rank": 1, "action": {"1": [[1, 0]]}}), "module.action.1"),
])
def test_field_diagnostics(text, where):
    with pytest.raises(ScenarioError) as exc:
        for s in load_scenarios(text, "f.json"):
            run(s)
    assert where in str(exc.value)


def test_json_position_diagnostics():
    with pytest.raises(ScenarioError) as exc:
        load_scenarios('[{"id": "a",\n  "claim": ]', "bad.json")
    assert exc.value.where == "bad.json:2:12"


def test_unknown_claim_rejected_at_load():
    with pytest.raises(ScenarioError):
        load_scenarios('{"id": "t", "claim": "lemma_9"}')


def test_duplicate_ids_rejected():
    with pytest.raises(ScenarioError):
        load_scenarios(json.dumps([json.loads(_one()), json.loads(_one())]))


def test_reports_deterministic_and_sorted():
    scs = enumerate_scenarios("lemma_1_1", 6, 2)[::-1]
    a = [json.dumps(r.record(), sort_keys=True) for r in run_many(scs, jobs=4)]
    b = [json.dumps(r.record(), sort_keys=True) for r in run_many(scs, jobs=1)]
    assert a == b
    ids = [json.loads(x)["id"] for x in a]
    assert ids == sorted(ids)
    assert all("timing" not in json.loads(x) for x in a)


def test_cli_homology(capsys):
    assert cli.main(["homology", "C6", "--degree", "0..3"]) == 0
    out = capsys.readouterr().out
    assert "H_1(G, M) = Z/6" in out and "H_2(G, M) = 0" in out
    assert cli.main(["cohomology", "S3", "--degree", "2", "--format", "machine"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["invariant_factors"] == [2]


def test_cli_invariants(capsys):
    assert cli.main(["coinvariants", "C2", "--module", "negation", "--format", "machine"]) == 0
    assert json.loads(capsys.readouterr().out) == {"coinvariants": [2]}
    assert cli.main(["invariants", "C2", "--module", "negation"]) == 0
    assert "M^G = 0" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"id": "g", "claim": "example_1"}))
    assert cli.main(["verify", str(good)]) == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"id": "b", "claim": "lemma_1_3", "expect_precondition_failure": True,
                               "ring": "Z[1/2]", "group": {"cyclic": 2}, "module": "negation"}))
    assert cli.main(["verify", str(bad)]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert cli.main(["verify", str(broken)]) == 2
    assert cli.main(["verify", "no-such-suite"]) == 2
    assert cli.main(["homology", "Q8"]) == 2
    capsys.readouterr()


def test_cli_enumerate_roundtrip(tmp_path, capsys):
    assert cli.main(["enumerate", "gamma_exact", "--format", "machine"]) == 0
    doc = capsys.readouterr().out
    path = tmp_path / "s.json"
    path.write_text(doc)
    assert cli.main(["verify", str(path), "--output-dir", str(tmp_path / "out")]) == 0
    lines = (tmp_path / "out" / "reports.jsonl").read_text().splitlines()
    assert [json.loads(x)["status"] for x in lines] == ["pass"] * 3
    capsys.readouterr()
