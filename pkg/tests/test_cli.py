import json

import pytest

from vclab.cli import run


def out_of(capsys):
    return capsys.readouterr().out


def test_construct_then_vcdim(tmp_path, capsys):
    fam = tmp_path / "f.fam"
    assert run(["construct", "--kind", "mz", "--n", "8", "--d", "2", "--out", str(fam)]) == 0
    capsys.readouterr()
    assert run(["vcdim", str(fam)]) == 0
    assert out_of(capsys).strip() == "2"


def test_audit_json(tmp_path, capsys):
    fam = tmp_path / "g.fam"
    run(["construct", "--kind", "mz", "--n", "10", "--d", "2", "--out", str(fam)])
    capsys.readouterr()
    assert run(["audit", str(fam), "--J", "1,2", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["deficiency"] == 0
    assert data["part_sizes"]["T5"] == 8


def test_polycert_roundtrip(tmp_path, capsys):
    fam, cert = tmp_path / "f.fam", tmp_path / "cert.json"
    run(["construct", "--kind", "mz", "--n", "8", "--d", "2", "--out", str(fam)])
    assert run(["polycert", str(fam), "--gamma", "12", "--out", str(cert)]) == 0
    assert run(["polycert", "--verify", str(cert)]) == 0
    data = json.loads(cert.read_text())
    data["bound"] += 1
    cert.write_text(json.dumps(data))
    assert run(["polycert", "--verify", str(cert)]) == 1


def test_plain_family_gets_witnesses(tmp_path, capsys):
    fam = tmp_path / "s.fam"
    run(["construct", "--kind", "stability", "--n", "8", "--d", "2", "--out", str(fam)])
    assert "|" not in fam.read_text()
    assert run(["witness", str(fam), "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["size_d_witnesses"] == 19 <= data["size_d_witness_bound"]
    assert run(["links", str(fam)]) == 0
    assert run(["sunflower", str(fam), "--audit"]) == 0


def test_shattered_member_is_a_violation(tmp_path, capsys):
    fam = tmp_path / "bad.fam"
    fam.write_text("6 3\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n1 4 5\n2 4 5\n3 4 5\n4 5 6\n")
    assert run(["witness", str(fam)]) == 1


def test_usage_errors(tmp_path):
    assert run([]) == 2
    assert run(["nope"]) == 2
    assert run(["vcdim", str(tmp_path / "missing.fam")]) == 2
    bad = tmp_path / "bad.fam"
    bad.write_text("4 2\n1 9\n")
    assert run(["vcdim", str(bad)]) == 2
    assert run(["audit", str(bad)]) == 2


def test_kk_and_shadow(tmp_path, capsys):
    assert run(["kk", "--m", "10", "--k", "3", "--s", "2"]) == 0
    assert out_of(capsys).strip() == "10"
    fam = tmp_path / "st.fam"
    run(["construct", "--kind", "star", "--n", "6", "--d", "2", "--out", str(fam)])
    assert run(["kk", str(fam)]) == 0
    capsys.readouterr()
    assert run(["shadow", str(fam), "--s", "1", "--json"]) == 0
    assert json.loads(out_of(capsys))["size"] == 6


def test_sunflower_find(tmp_path, capsys):
    fam = tmp_path / "d.fam"
    fam.write_text("6 2\n1 2\n3 4\n5 6\n")
    assert run(["sunflower", str(fam), "--r", "3", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data == {"found": True, "r": 3, "core": [], "petal_indices": [0, 1, 2]}


def test_transversal(tmp_path, capsys):
    fam = tmp_path / "st.fam"
    run(["construct", "--kind", "star", "--n", "6", "--d", "2", "--out", str(fam)])
    assert run(["transversal", str(fam), "--s", "2"]) == 0
    assert out_of(capsys).strip() == "6"


def test_search_exit_codes(capsys):
    assert run(["search", "--mode", "switness", "--n", "7", "--d", "2", "--s", "1"]) == 0
    assert out_of(capsys).strip() == "15"
    assert run(["search", "--n", "7", "--d", "2", "--nodes", "50"]) == 3
    assert run(["search", "--mode", "intersecting", "--n", "7", "--d", "2", "--nontrivial", "--json"]) == 0


def test_search_json_schema(capsys):
    run(["search", "--mode", "vc", "--n", "5", "--d", "2", "--json"])
    data = json.loads(out_of(capsys))
    assert set(data) == {"size", "complete", "nodes", "elapsed_seconds", "closed_by", "conjectured_bound",
                         "exceeds_conjecture", "family", "witnesses"}


def test_hunt_seeded(capsys):
    assert run(["hunt", "--n", "7", "--d", "2", "--s", "1", "--budget", "500", "--seed", "4", "--json"]) == 0
    a = out_of(capsys)
    run(["hunt", "--n", "7", "--d", "2", "--s", "1", "--budget", "500", "--seed", "4", "--json"])
    assert out_of(capsys) == a
    assert json.loads(a)["found"] is False


def test_construct_random_mz_is_seeded(capsys):
    run(["construct", "--kind", "mz", "--n", "9", "--d", "2", "--random", "--seed", "3"])
    a = out_of(capsys)
    run(["construct", "--kind", "mz", "--n", "9", "--d", "2", "--random", "--seed", "3"])
    assert out_of(capsys) == a
