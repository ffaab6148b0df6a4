import random

from selfsim.config import DEFAULT_DEPTH, DEFAULT_SAMPLES, default_seed
from selfsim.data import document_kind, graph_doc, load_json, parse_embedding, parse_outsplit, parse_pair
from selfsim.errors import InputError
from selfsim.graph import validate as validate_graph
from selfsim.kep import check_pair as check_katsura
from selfsim.kep import kep_system
from selfsim.outsplit import check_spec, conjugacy_check, outsplit_graph, putnam_split, source_split
from selfsim.putnam import check_pair as check_embedding
from selfsim.putnam import xi_system


def add_arguments(parser):
    parser.add_argument(
        "document",
        help="out-split document {graph, split}; a Katsura pair (split by source) or an embedding pair (split by xi-classes)",
    )
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)


def run(args) -> dict:
    doc = load_json(args.document)
    kind = document_kind(doc)
    if kind == "outsplit":
        E, os = parse_outsplit(doc)
        defects = validate_graph(E)
        if defects:
            raise InputError("invalid graph", defects)
        check_spec(E, os)
        g = outsplit_graph(E, os)
        return {"graph": graph_doc(g), "vertices": len(g.vertices), "edges": len(g.edges)}

    if kind == "pair":
        sys = kep_system(check_katsura(parse_pair(doc)))
        os = source_split(sys.graph)
    elif kind == "embedding":
        xi = check_embedding(parse_embedding(doc))
        sys = xi_system(xi)
        os, _ = putnam_split(xi)
    else:
        raise InputError("outsplit needs an out-split, a Katsura pair or an embedding pair", [f"got a {kind}"])

    g = outsplit_graph(sys.graph, os)
    report = conjugacy_check(sys, os, args.depth, args.samples, random.Random(default_seed()))
    return {
        "graph": graph_doc(g),
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "conjugacy": {
            "depth": args.depth,
            "samples": report.samples,
            "discrepancies": report.discrepancies,
            "nucleus_within_lift": report.nucleus_within_lift,
        },
    }
