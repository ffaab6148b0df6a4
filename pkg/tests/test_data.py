import json
from fractions import Fraction

import pytest

from selfsim import catalog
from selfsim.data import (
    document_kind,
    dumps,
    eppath_doc,
    fraction_str,
    length_str,
    load_eppath,
    load_json,
    load_pair,
    parse_eppath,
    parse_graph,
    parse_outsplit,
    parse_pair,
    report_doc,
    rho_str,
    terms_doc,
)
from selfsim.embed import EmbedOptions, zeta_terms
from selfsim.errors import InputError, InvalidPair
from selfsim.graph import INF, WeightedCycleResult
from selfsim.kep import analyze, build_graph
from selfsim.limitspace import EPPath


def test_number_formats():
    assert fraction_str(Fraction(3, 6)) == "1/2"
    assert fraction_str(4) == "4"
    assert length_str(INF) == "inf"
    assert length_str(3) == 3
    assert rho_str(WeightedCycleResult()) == "0"
    assert rho_str(WeightedCycleResult((3, 2, 1))) == "3/2"
    assert rho_str(WeightedCycleResult((2, 1, 2))) == "(2)^(1/2)"


def test_dumps_is_stable():
    assert dumps({"b": 1, "a": 2}) == dumps({"a": 2, "b": 1})


@pytest.mark.parametrize("name,kind", [
    ("example1", "pair"),
    ("putnam", "embedding"),
    ("outsplit_fig", "outsplit"),
])
def test_document_kind(name, kind):
    assert document_kind(catalog.document(name)) == kind
    assert document_kind(catalog.document("putnam")["E"]) == "graph"


def test_load_json_from_catalog_and_file(tmp_path):
    assert load_json("@odometer") == {"A": [[2]], "B": [[1]]}
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"A": [[2]], "B": [[3]]}), encoding="utf-8")
    assert load_pair(str(path)).B == ((3,),)


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(InputError):
        load_json(str(bad))
    with pytest.raises(InputError):
        load_json(str(tmp_path / "missing.json"))
    with pytest.raises(InputError):
        load_json("@nothing")


def test_parse_errors():
    with pytest.raises(InputError) as err:
        parse_graph({"vertices": ["v"]})
    assert err.value.defects == ["missing key 'edges'"]
    with pytest.raises(InputError):
        parse_pair({"A": [["x"]], "B": [[0]]})
    with pytest.raises(InputError):
        parse_eppath({"cycle": []})


def test_load_pair_validates(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"A": [[0]], "B": [[1]]}), encoding="utf-8")
    with pytest.raises(InvalidPair) as err:
        load_pair(str(path))
    assert err.value.defects == ["B[1][1] is nonzero where A[1][1] = 0"]


def test_outsplit_document():
    E, os = parse_outsplit(catalog.document("outsplit_fig"))
    assert E.vertices == ("x", "y")
    assert os.pi["4"] == "v3"


def test_eppath_round_trip_and_validation(embedding):
    g = build_graph(embedding)
    mu = EPPath.canonical(("e_2_2_0",), ("e_2_1_1",))
    assert parse_eppath(eppath_doc(mu)) == mu
    assert load_eppath(json.dumps(eppath_doc(mu)), g) == mu
    with pytest.raises(InputError):
        load_eppath('{"cycle": ["e_1_2_0"]}', g)


def test_report_and_terms_documents(pair, embedding):
    doc = report_doc(analyze(pair("example1"), 8, 8))
    assert (doc["rho"], doc["contracting"], doc["regular"]) == ("1/2", True, "YES")
    assert doc["isotropy"] == {"1": "inf", "2": "inf"}
    assert doc["regular_01"]["status"] == "YES"
    assert json.loads(dumps(doc))["rho"] == "1/2"

    terms = terms_doc(zeta_terms(embedding, EPPath.canonical(("e_1_1_0",)), EmbedOptions(R_override=6)))
    assert terms == {"terms": [{"scale": "1/1080", "angle": "0", "interval": [None, -1, 1]}]}
