from selfsim.action import Nucleus, ae_oracle, compute_nucleus, standard_generators
from selfsim.config import DEFAULT_DEPTH
from selfsim.data import document_kind, load_eppath, load_json, parse_embedding, parse_pair
from selfsim.embed import zeta_equal
from selfsim.kep import build_graph
from selfsim.kep import check_pair as check_katsura
from selfsim.kep import kep_system
from selfsim.limitspace import ae_equivalent, component_equivalent
from selfsim.putnam import check_pair as check_embedding
from selfsim.putnam import xi_equivalent, xi_system


def add_arguments(parser):
    parser.add_argument("document", help="Katsura pair with B in {0,1}, or an embedding pair")
    parser.add_argument("mu", help='path as JSON {"cycle": [...], "suffix": [...]} or a file')
    parser.add_argument("nu", help="second path, same format")
    parser.add_argument("--oracle", action="store_true", help="also run the finite-depth nucleus check")
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="window for --oracle")


def _oracle(sys, mu, nu, depth: int) -> bool:
    found = compute_nucleus(sys, standard_generators(sys))
    F = list(found.elements) if isinstance(found, Nucleus) else standard_generators(sys)
    return ae_oracle(sys, mu.window(depth), nu.window(depth), F)


def run(args) -> dict:
    doc = load_json(args.document)
    if document_kind(doc) == "embedding":
        xi = check_embedding(parse_embedding(doc))
        mu, nu = load_eppath(args.mu, xi.E), load_eppath(args.nu, xi.E)
        out = {"equivalent": xi_equivalent(xi, mu, nu)}
        sys = xi_system(xi)
    else:
        p = check_katsura(parse_pair(doc))
        g = build_graph(p)
        mu, nu = load_eppath(args.mu, g), load_eppath(args.nu, g)
        out = {
            "equivalent": ae_equivalent(p, mu, nu),
            "same_component": component_equivalent(p, mu, nu),
            "zeta_equal": zeta_equal(p, mu, nu),
        }
        sys = kep_system(p)
    if args.oracle:
        out["oracle"] = _oracle(sys, mu, nu, args.depth)
    out["mu"], out["nu"] = str(mu), str(nu)
    return out
