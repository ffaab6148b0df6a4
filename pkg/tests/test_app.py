import json

import pytest

import app
from selfsim import catalog


def run(capsys, *argv):
    code = app.main(list(argv))
    return code, capsys.readouterr().out


def test_every_command_is_registered():
    assert set(app.COMMANDS) == {
        "validate", "analyze", "rho", "regular", "ktheory", "outsplit",
        "putnam2kep", "ae", "components", "embed", "selftest", "catalog",
    }


def test_analyze_worked_example(capsys):
    code, out = run(capsys, "analyze", "@example1")
    doc = json.loads(out)
    assert code == 0
    assert (doc["rho"], doc["contracting"], doc["regular"]) == ("1/2", True, "YES")


def test_analyze_table(capsys):
    code, out = run(capsys, "analyze", "@example3", "--table")
    assert code == 0
    assert "rho=0" in out and "finite" in out


def test_putnam2kep(capsys):
    code, out = run(capsys, "putnam2kep", "@putnam", "--check")
    doc = json.loads(out)
    assert code == 0
    assert (doc["A"], doc["B"]) == ([[2, 1], [2, 1]], [[1, 0], [1, 0]])
    assert doc["problems"] == []


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", "@outsplit_fig")[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{oops", encoding="utf-8")
    code, out = run(capsys, "validate", str(bad))
    assert code == 2
    assert json.loads(out)["error"] == "INPUT"
    invalid = tmp_path / "pair.json"
    invalid.write_text(json.dumps({"A": [[-1]], "B": [[0]]}), encoding="utf-8")
    code, out = run(capsys, "validate", str(invalid))
    assert code == 2
    assert json.loads(out) == {
        "error": "INVALID_PAIR",
        "message": "invalid pair document",
        "defects": ["A[1][1] is negative"],
    }


def test_precondition_failure_exits_one(capsys):
    code, out = run(capsys, "ae", "@example4", '{"cycle": ["e_1_1_0"]}', '{"cycle": ["e_1_1_1"]}')
    assert code == 1
    assert json.loads(out)["error"] == "PRECONDITION"


def test_ae_with_oracle(capsys):
    code, out = run(
        capsys, "ae", "@odometer", '{"cycle": ["e_1_1_1"]}', '{"cycle": ["e_1_1_0"]}', "--oracle", "--depth", "5"
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["equivalent"] and doc["zeta_equal"] and doc["oracle"]


def test_ae_on_an_embedding_pair(capsys):
    code, out = run(capsys, "ae", "@putnam", '{"cycle": ["e1"], "suffix": ["f"]}', '{"cycle": ["e0"], "suffix": ["f"]}')
    assert code == 0
    assert json.loads(out)["equivalent"] is True


def test_components_groups_paths(capsys):
    code, out = run(
        capsys,
        "components",
        "@embedding",
        '{"cycle": ["e_2_2_0"], "suffix": ["e_2_1_0"]}',
        '{"cycle": ["e_2_2_1"], "suffix": ["e_2_1_0"]}',
        '{"cycle": ["e_1_2_0", "e_2_1_0"]}',
    )
    doc = json.loads(out)
    assert code == 0
    assert [row["component"] for row in doc["paths"]] == [0, 0, 1]
    assert doc["paths"][2]["kind"] == "POINT"


def test_outsplit_with_conjugacy(capsys, monkeypatch):
    monkeypatch.setenv("SELFSIM_SEED", "7")
    code, out = run(capsys, "outsplit", "@putnam", "--depth", "4", "--samples", "30")
    doc = json.loads(out)
    assert code == 0
    assert doc["conjugacy"]["discrepancies"] == []
    code, out = run(capsys, "outsplit", "@outsplit_fig")
    assert (json.loads(out)["vertices"], json.loads(out)["edges"]) == (3, 7)


def test_embed_terms_and_files(capsys, tmp_path):
    code, out = run(capsys, "embed", "@embedding", "--worked-figure", "--path", '{"cycle": ["e_2_2_0"], "suffix": ["e_2_1_1"]}')
    doc = json.loads(out)
    assert code == 0
    assert doc["R"] == 6
    assert doc["terms"][0] == {"scale": "1/1296", "angle": "1/4", "interval": [-1, -1, 0]}

    svg, csv = tmp_path / "e.svg", tmp_path / "e.csv"
    code, out = run(capsys, "embed", "@embedding", "--depth", "3", "--paper-R-override", "6",
                    "--out-svg", str(svg), "--out-points", str(csv))
    doc = json.loads(out)
    assert code == 0
    assert doc["points"] > 0 and doc["guaranteed"]
    assert svg.exists() and csv.exists()


def test_rho_regular_ktheory(capsys):
    assert json.loads(run(capsys, "rho", "@example4")[1])["rho"] == "3/2"
    assert json.loads(run(capsys, "regular", "@example2")[1])["status"] == "NO"
    kt = json.loads(run(capsys, "ktheory", "@odometer")[1])
    assert (kt["K0"]["text"], kt["K1"]["text"]) == ("Z", "Z")


def test_catalog(capsys):
    code, out = run(capsys, "catalog")
    names = [row["name"] for row in json.loads(out)["fixtures"]]
    assert code == 0 and names == catalog.names()
    assert json.loads(run(capsys, "catalog", "odometer")[1]) == {"A": [[2]], "B": [[1]]}


def test_selftest_subset(capsys):
    code, out = run(capsys, "selftest", "--only", "K-theory", "out-split figure")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert len(doc["checks"]) == 2


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit):
        app.main([])
