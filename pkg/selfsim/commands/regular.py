from selfsim.config import DEFAULT_DMAX, DEFAULT_KMAX
from selfsim.data import load_pair, verdict_doc
from selfsim.kep import regular_01, regular_general


def add_arguments(parser):
    parser.add_argument("pair", help="Katsura pair JSON, or @name")
    parser.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    parser.add_argument("--dmax", type=int, default=DEFAULT_DMAX)


def run(args) -> dict:
    p = load_pair(args.pair)
    doc = verdict_doc(regular_general(p, args.kmax, args.dmax))
    if p.is_01():
        doc["regular_01"] = verdict_doc(regular_01(p))
    return doc
