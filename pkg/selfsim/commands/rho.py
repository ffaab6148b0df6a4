from selfsim.data import load_pair, rho_str
from selfsim.kep import contraction_coefficient


def add_arguments(parser):
    parser.add_argument("pair", help="Katsura pair JSON, or @name")


def run(args) -> dict:
    rho = contraction_coefficient(load_pair(args.pair))
    return {"rho": rho_str(rho), "witness": list(rho.witness), "contracting": rho.below_one()}
