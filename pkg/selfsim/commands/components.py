import random

from selfsim.config import DEFAULT_SAMPLES, default_seed
from selfsim.data import component_doc, eppath_doc, load_eppath, load_pair
from selfsim.kep import build_graph
from selfsim.limitspace import classify_component, component_equivalent, random_eppath


def add_arguments(parser):
    parser.add_argument("pair", help="Katsura pair with B in {0,1}, or @name")
    parser.add_argument("paths", nargs="*", help="paths to classify; sampled when none are given")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)


def run(args) -> dict:
    p = load_pair(args.pair)
    g = build_graph(p)
    if args.paths:
        paths = [load_eppath(text, g) for text in args.paths]
    else:
        rng = random.Random(default_seed())
        paths = [random_eppath(g, rng) for _ in range(args.samples)]

    # group by component, keeping first-seen order
    groups = []
    rows = []
    for mu in paths:
        idx = next((n for n, rep in enumerate(groups) if component_equivalent(p, mu, rep)), None)
        if idx is None:
            idx = len(groups)
            groups.append(mu)
        row = component_doc(classify_component(p, mu))
        row.update(path=eppath_doc(mu), component=idx)
        rows.append(row)
    return {"paths": rows, "components": len(groups)}
