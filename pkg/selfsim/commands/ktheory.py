from selfsim.data import group_doc, load_pair
from selfsim.kep import k_theory


def add_arguments(parser):
    parser.add_argument("pair", help="Katsura pair JSON, or @name")


def run(args) -> dict:
    kt = k_theory(load_pair(args.pair))
    return {"K0": group_doc(kt.K0), "K1": group_doc(kt.K1)}
