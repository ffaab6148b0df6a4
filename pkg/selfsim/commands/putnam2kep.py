from selfsim.data import load_embedding, pair_doc
from selfsim.outsplit import kep_from_outsplit_check, putnam_to_kep


def add_arguments(parser):
    parser.add_argument("embedding", help="embedding pair JSON {H, E, xi0, xi1}, or @name")
    parser.add_argument("--check", action="store_true", help="compare both actions edge by edge for |k| <= 4")


def run(args) -> dict:
    xi = load_embedding(args.embedding)
    conv = putnam_to_kep(xi)
    doc = pair_doc(conv.pair)
    doc["classes"] = {name: list(conv.members[name]) for name in conv.classes}
    doc["edge_map"] = dict(conv.edge_map)
    if args.check:
        doc["problems"] = kep_from_outsplit_check(xi)
    return doc
