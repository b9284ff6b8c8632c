import json


from siltingkit.cli import main
from siltingkit.io import complex_from_json, builtin


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_info_a4(capsys):
    code, doc = run_json(capsys, "info", "builtin:A4")
    assert code == 0
    r = doc["results"]
    assert r["dimension"] == 16 and r["global_dimension"] == 3
    assert r["hom_projectives"]["2,1"] == 2 and r["hom_projectives"]["1,2"] == 0
    assert doc["schema"] == "siltingkit-report" and doc["schema_version"] == 1


def test_info_kronecker_text(capsys):
    code, out, _ = run(capsys, "info", "builtin:kronecker")
    assert code == 0
    assert "dimension 4" in out and "global dimension 1" in out


def test_info_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("vertices 2\narrow a 1 2\nrelation 1: a*zz\n")
    code, _, err = run(capsys, "info", str(p))
    assert code == 2
    assert "line 3" in err and "'a*zz'" in err


def test_info_budget(capsys):
    code, doc = run_json(capsys, "info", "builtin:T2", "--budget", "4")
    assert code == 3 and doc["results"]["global_dimension"] is None


def test_resolve_and_out(capsys, tmp_path):
    out = tmp_path / "e.json"
    code, text, _ = run(capsys, "resolve", "builtin:A4", "E", "--out", str(out))
    assert code == 0 and "projective dimension 3" in text
    A = builtin("A4").build()
    X = complex_from_json(out.read_text(), A)
    assert X.describe() == "[-3] P4, [-2] P3, [-1] P2, [0] P1"


def test_hom(capsys, tmp_path):
    code, doc = run_json(capsys, "hom", "builtin:A4", "E", "E")
    assert doc["results"]["hom_dims"] == {"0": 1, "3": 1}
    code, doc = run_json(capsys, "hom", "builtin:A4", "E", "aE")
    assert doc["results"]["hom_dims"] == {}
    code, doc = run_json(capsys, "hom", "builtin:A4", "P1+P2[1]", "A")
    # Hom(P1, A) = Ae_1 and Hom(P2[1], A[1]) = Ae_2
    assert doc["results"]["hom_dims"] == {"0": 1, "1": 3}


def test_twist_regular(capsys, tmp_path):
    out = tmp_path / "phi.json"
    code, doc = run_json(capsys, "twist", "builtin:A4", "E", "--d", "3", "--out", str(out))
    assert code == 0
    r = doc["results"]
    assert r["certificate"]["valid"]
    assert len(r["summands"]) == 4
    assert all(s["homology"]["2"] == [1, 1, 1, 1] for s in r["summands"])
    assert r["invariance"] == {"eps": False}
    assert any(p["context"] == "eps-invariance" for p in doc["isomorphism_provenance"])
    assert complex_from_json(out.read_text(), builtin("A4").build()).describe() == r["result"]["describe"]


def test_twist_square(capsys):
    code, doc = run_json(capsys, "twist", "builtin:A4", "E", "--d", "3", "--power", "2")
    assert code == 0
    assert sorted(doc["results"]["result"]["homology"]) == ["0", "2", "4"]


def test_twist_not_spherical(capsys):
    code, doc = run_json(capsys, "twist", "builtin:A3", "E", "--d", "2")
    assert code == 1
    cert = doc["results"]["certificate"]
    assert not cert["valid"] and cert["serre"]["isomorphic_to_twist"] == ["eps"]


def test_mutate_kronecker(capsys):
    code, doc = run_json(capsys, "mutate", "builtin:kronecker", "--keep", "1", "--direction", "left")
    assert code == 0
    assert doc["results"]["object"] == ["[0] P2", "[0] P1"]
    assert sorted(doc["results"]["result"]) == ["[-1] P2, [0] P1^2", "[0] P1"]


def test_mutate_everything_is_shift(capsys):
    code, doc = run_json(capsys, "mutate", "builtin:A4", "--keep", "")
    assert sorted(doc["results"]["result"]) == ["[-1] P1", "[-1] P2", "[-1] P3", "[-1] P4"]
    code, _, err = run(capsys, "mutate", "builtin:A4", "--keep", "7")
    assert code == 2


def test_mutate_requires_presilting(capsys):
    code, _, err = run(capsys, "mutate", "builtin:A4", "--object", "E")
    assert code == 2 and "presilting" in err


def test_explore_depth_two(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, doc = run_json(capsys, "explore", "builtin:A4", "--depth", "2", "--out", str(dot))
    assert code == 0
    nodes = doc["results"]["nodes"]
    assert len(nodes) > 1 and all(n["invariant"]["eps"] for n in nodes)
    assert dot.read_text().startswith("digraph")
    gj = tmp_path / "g.json"
    run(capsys, "explore", "builtin:kronecker", "--depth", "1", "--out", str(gj))
    assert len(json.loads(gj.read_text())["nodes"]) == 5


def test_explore_budget_exit(capsys, monkeypatch):
    code, doc = run_json(capsys, "explore", "builtin:A4", "--depth", "3", "--budget", "2")
    assert code == 3 and doc["results"]["complete"] is False
    monkeypatch.setenv("SILTINGKIT_BUDGET", "2")
    code, doc = run_json(capsys, "explore", "builtin:A4", "--depth", "3")
    assert code == 3 and doc["config"]["budget"] == 2
    monkeypatch.setenv("SILTINGKIT_BUDGET", "lots")
    code, _, err = run(capsys, "explore", "builtin:A4")
    assert code == 2


def test_check(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, _, _ = run(capsys, "check", "builtin:A4", "--module", "E", "--d", "3", "--out", str(cert))
    assert code == 0 and json.loads(cert.read_text())["valid"] is True
    code, _, _ = run(capsys, "check", "builtin:A5", "--module", "E", "--d", "4")
    assert code == 1
    code, doc = run_json(capsys, "check", "builtin:A4", "--object", "A[1]")
    assert code == 0 and doc["results"]["status"] == "certified"
    code, doc = run_json(capsys, "check", "builtin:A4", "--object", "P1+P2")
    assert code == 1
    code, _, _ = run(capsys, "check", "builtin:A4")
    assert code == 2


def test_induce(capsys):
    code, doc = run_json(capsys, "induce", "builtin:A4", "--trivial-extension", "builtin:T4")
    assert code == 0
    assert doc["results"]["end_dimension"] == 32 and doc["results"]["presilting"]


def test_paper_verify_small(capsys):
    code, doc = run_json(capsys, "paper-verify", "--n", "3", "--sections", "spherical,homology")
    assert code == 0
    notes = [c["note"] for c in doc["results"]["checks"]]
    assert "exceptional, not spherical" in notes
    code, doc = run_json(capsys, "paper-verify", "--n", "2", "--sections", "spherical,homology")
    assert code == 0
    assert any("out of range" in c["note"] for c in doc["results"]["checks"])
    code, _, _ = run(capsys, "paper-verify", "--n", "9")
    assert code == 2
    code, _, _ = run(capsys, "paper-verify", "--n", "4", "--sections", "nope")
    assert code == 2


def test_report_is_deterministic(capsys):
    docs = []
    for _ in range(2):
        code, doc = run_json(capsys, "twist", "builtin:A4", "E", "--d", "3", "--target", "P3", "--seed", "5")
        doc.pop("timing")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]
    code, doc = run_json(capsys, "twist", "builtin:A4", "E", "--d", "3", "--target", "P3", "--seed", "6")
    doc.pop("timing")
    assert json.loads(docs[0])["config_hash"] != doc["config_hash"]


def test_bad_usage(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "info")[0] == 2
    assert run(capsys, "info", "does-not-exist.txt")[0] == 2
    assert run(capsys, "resolve", "builtin:A4", "Nope")[0] == 2
