"""JSON documents in and out: graphs, Katsura pairs, embedding pairs, out-splits, paths and reports."""
import json
import logging
from fractions import Fraction
from pathlib import Path as FilePath
from typing import Any, Dict, List, Tuple

from selfsim.errors import InputError
from selfsim.graph import INF, Graph, WeightedCycleResult
from selfsim.kep import AbelianGroup, AnalysisReport, KatsuraPair, Verdict
from selfsim.kep import check_pair as check_katsura
from selfsim.limitspace import ComponentClass, EPPath, check_eppath
from selfsim.outsplit import OutSplitSpec
from selfsim.putnam import Embedding, EmbeddingPair
from selfsim.putnam import check_pair as check_embedding

logger = logging.getLogger(__name__)


def fraction_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def length_str(n) -> Any:
    return "inf" if n == INF else int(n)


def rho_str(rho: WeightedCycleResult) -> str:
    if rho.value is None:
        return "0"
    p, q, L = rho.value
    base = fraction_str(Fraction(p, q))
    return base if L == 1 else f"({base})^(1/{L})"


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def _require(doc: Any, keys: List[str], what: str) -> None:
    if not isinstance(doc, dict):
        raise InputError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InputError(f"{what} is missing keys", [f"missing key {k!r}" for k in missing])


def load_json(source: str) -> Dict[str, Any]:
    """Read a document from a file path, or from the built-in catalog as ``@name``."""
    if source.startswith("@"):
        from selfsim.catalog import document

        return document(source[1:])
    try:
        text = FilePath(source).read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"cannot read {source}: {err}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"{source} is not valid JSON", [str(err)])


def document_kind(doc: Any) -> str:
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    if "A" in doc:
        return "pair"
    if "H" in doc:
        return "embedding"
    if "split" in doc:
        return "outsplit"
    if "vertices" in doc:
        return "graph"
    raise InputError("unrecognised document", [f"keys: {sorted(doc)}"])


def parse_graph(doc: Any) -> Graph:
    _require(doc, ["vertices", "edges"], "graph")
    edges = []
    for raw in doc["edges"]:
        _require(raw, ["id", "range", "source"], "edge")
        edges.append((str(raw["id"]), str(raw["range"]), str(raw["source"])))
    return Graph.build([str(v) for v in doc["vertices"]], edges)


def graph_doc(g: Graph) -> Dict[str, Any]:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "range": e.range, "source": e.source} for e in g.edges],
    }


def parse_pair(doc: Any) -> KatsuraPair:
    _require(doc, ["A", "B"], "Katsura pair")
    try:
        return KatsuraPair.of(doc["A"], doc["B"])
    except (TypeError, ValueError) as err:
        raise InputError("matrix entries must be integers", [str(err)])


def pair_doc(p: KatsuraPair) -> Dict[str, Any]:
    return {"A": [list(row) for row in p.A], "B": [list(row) for row in p.B]}


def _embedding(doc: Any, name: str) -> Embedding:
    _require(doc, ["vertices", "edges"], name)
    return Embedding(
        {str(k): str(v) for k, v in doc["vertices"].items()},
        {str(k): str(v) for k, v in doc["edges"].items()},
    )


def parse_embedding(doc: Any) -> EmbeddingPair:
    _require(doc, ["H", "E", "xi0", "xi1"], "embedding pair")
    return EmbeddingPair(parse_graph(doc["H"]), parse_graph(doc["E"]), _embedding(doc["xi0"], "xi0"), _embedding(doc["xi1"], "xi1"))


def parse_split(doc: Any) -> OutSplitSpec:
    _require(doc, ["targets", "pi", "beta"], "out-split")
    return OutSplitSpec(
        tuple(str(v) for v in doc["targets"]),
        {str(k): str(v) for k, v in doc["pi"].items()},
        {str(k): str(v) for k, v in doc["beta"].items()},
    )


def parse_outsplit(doc: Any) -> Tuple[Graph, OutSplitSpec]:
    _require(doc, ["graph", "split"], "out-split document")
    return parse_graph(doc["graph"]), parse_split(doc["split"])


def parse_eppath(doc: Any) -> EPPath:
    _require(doc, ["cycle"], "path")
    try:
        return EPPath.canonical([str(e) for e in doc["cycle"]], [str(e) for e in doc.get("suffix", [])])
    except ValueError as err:
        raise InputError(str(err))


def eppath_doc(mu: EPPath) -> Dict[str, Any]:
    return {"cycle": list(mu.cycle), "suffix": list(mu.suffix)}


def verdict_doc(v: Verdict) -> Dict[str, Any]:
    return {"status": v.status.value, "certificate": v.certificate}


def group_doc(g: AbelianGroup) -> Dict[str, Any]:
    return {"torsion": list(g.torsion), "rank": g.rank, "text": str(g)}


def report_doc(r: AnalysisReport) -> Dict[str, Any]:
    dec = r.decomposition
    doc = {
        "rho": rho_str(r.rho),
        "rho_witness": list(r.rho.witness),
        "contracting": r.contracting,
        "regular": r.regular.status.value,
        "regular_certificate": r.regular.certificate,
        "isotropy": {v: length_str(o) for v, o in r.orders.items()},
        "decomposition": {
            "infinite_vertices": list(dec.infinite_vertices),
            "finite_vertices": list(dec.finite_vertices),
            "A_inf": [list(row) for row in dec.A_inf],
            "B_inf": [list(row) for row in dec.B_inf],
            "A_fin": [list(row) for row in dec.A_fin],
            "B_fin": [list(row) for row in dec.B_fin],
        },
    }
    if r.regular_01 is not None:
        doc["regular_01"] = verdict_doc(r.regular_01)
    if r.k_theory is not None:
        doc["K0"] = group_doc(r.k_theory.K0)
        doc["K1"] = group_doc(r.k_theory.K1)
    return doc


def component_doc(c: ComponentClass) -> Dict[str, Any]:
    return {
        "kind": c.kind.value,
        "K": length_str(c.K),
        "dynamics_exponent": c.dynamics_exponent,
        "theta": None if c.theta is None else fraction_str(c.theta),
    }


def terms_doc(terms) -> Dict[str, Any]:
    return {
        "terms": [
            {"scale": fraction_str(t.scale), "angle": fraction_str(t.angle), "interval": t.interval.as_list()}
            for t in terms
        ]
    }


def load_pair(source: str) -> KatsuraPair:
    return check_katsura(parse_pair(load_json(source)))


def load_embedding(source: str) -> EmbeddingPair:
    return check_embedding(parse_embedding(load_json(source)))


def load_eppath(text: str, g: Graph) -> EPPath:
    """An eventually periodic path given inline as JSON or as a file path."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise InputError("path is not valid JSON", [str(err)])
    else:
        doc = load_json(text)
    mu = parse_eppath(doc)
    defects = check_eppath(g, mu)
    if defects:
        raise InputError(f"{mu} is not a path of the graph", defects)
    return mu
