from selfsim.data import document_kind, load_json, parse_embedding, parse_graph, parse_outsplit, parse_pair
from selfsim.errors import InputError, InvalidPair, SpecInvalid
from selfsim.graph import validate as validate_graph
from selfsim.kep import validate_pair
from selfsim.outsplit import validate_spec
from selfsim.putnam import validate_pair as validate_embedding


def add_arguments(parser):
    parser.add_argument("document", help="JSON file, or @name for a built-in fixture")


def run(args) -> dict:
    doc = load_json(args.document)
    kind = document_kind(doc)
    if kind == "pair":
        defects, error = validate_pair(parse_pair(doc)), InvalidPair
    elif kind == "embedding":
        defects, error = validate_embedding(parse_embedding(doc)), InvalidPair
    elif kind == "outsplit":
        E, os = parse_outsplit(doc)
        defects = validate_graph(E) or validate_spec(E, os)
        error = SpecInvalid
    else:
        defects, error = validate_graph(parse_graph(doc)), InputError
    if defects:
        raise error(f"invalid {kind} document", defects)
    return {"kind": kind, "valid": True, "defects": []}
