"""Out-splits OS = (pi, beta) of graphs and group bundles, the conjugacy maps I_n,
and the conversion of an embedding pair into a Katsura pair.

An out-split edge (v, e) has id ``(v,e)``; vertex names must not contain commas.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from selfsim.action import (
    ActionSystem,
    Element,
    Nucleus,
    act_on_path,
    ae_oracle,
    compute_nucleus,
    standard_generators,
)
from selfsim.errors import DomainMismatch, NotGroupBundle, SpecInvalid
from selfsim.graph import Graph, Path, adjacency_matrix, random_path
from selfsim.kep import KatsuraPair, KepEdge, kep_system
from selfsim.putnam import EmbeddingPair, check_pair, xi_system

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OutSplitSpec:
    targets: Tuple[str, ...]
    pi: Mapping[str, str]
    beta: Mapping[str, str]


def os_edge(v: str, e: str) -> str:
    return f"({v},{e})"


def os_pair(edge_id: str) -> Tuple[str, str]:
    v, e = edge_id[1:-1].split(",", 1)
    return v, e


def validate_spec(E: Graph, os: OutSplitSpec) -> List[str]:
    defects = []
    targets = set(os.targets)
    for e in E.edges:
        if e.id not in os.pi:
            defects.append(f"pi is not defined on edge {e.id!r}")
        elif os.pi[e.id] not in targets:
            defects.append(f"pi({e.id}) = {os.pi[e.id]!r} is not a target vertex")
    for v in os.targets:
        if "," in v:
            defects.append(f"target vertex {v!r} contains a comma")
        if v not in os.beta:
            defects.append(f"beta is not defined on {v!r}")
        elif os.beta[v] not in E.vertices:
            defects.append(f"beta({v}) = {os.beta[v]!r} is not a vertex")
    if defects:
        return defects
    for e in E.edges:
        if os.beta[os.pi[e.id]] != e.source:
            defects.append(f"s != beta o pi on edge {e.id!r}")
    missed = targets - set(os.pi.values())
    for v in sorted(missed):
        defects.append(f"pi misses target vertex {v!r}")
    return defects


def check_spec(E: Graph, os: OutSplitSpec) -> None:
    defects = validate_spec(E, os)
    if defects:
        raise SpecInvalid("invalid out-split", defects)


def source_split(E: Graph) -> OutSplitSpec:
    """The trivial out-split pi = s, beta = id."""
    return OutSplitSpec(E.vertices, {e.id: e.source for e in E.edges}, {v: v for v in E.vertices})


def outsplit_graph(E: Graph, os: OutSplitSpec) -> Graph:
    check_spec(E, os)
    edges = []
    for v in os.targets:
        for e in E.edges_into(os.beta[v]):
            edges.append((os_edge(v, e), v, os.pi[e]))
    return Graph.build(os.targets, edges)


def conjugacy_I_n(E: Graph, os: OutSplitSpec, v: str, mu: Path) -> Path:
    if mu and os.beta[v] != E.r(mu[0]):
        raise DomainMismatch(f"beta({v}) = {os.beta[v]} is not the range of {mu[0]!r}")
    out = []
    for e in mu:
        out.append(os_edge(v, e))
        v = os.pi[e]
    return tuple(out)


def project(path: Path) -> Path:
    return tuple(os_pair(f)[1] for f in path)


def outsplit_bundle(sys: ActionSystem, os: OutSplitSpec, bound: int = 2) -> ActionSystem:
    """The action (g,v).(v,e) = (v, g.e) with restriction (pi(e), g|_e).

    Elements (g, v) are stored as Element(v, k, modulus of beta(v)); see ``as_pair``.
    """
    E = sys.graph
    check_spec(E, os)
    for w in E.vertices:
        for g in sys.elements_within(w, bound):
            for e in E.edges_into(w):
                f, _ = sys.act(g, e)
                if E.s(f) != E.s(e):
                    raise NotGroupBundle(f"{g} moves the source of {e!r}")
                # splits whose pi is not invariant under the action are rejected, not re-indexed
                if os.pi[f] != os.pi[e]:
                    raise SpecInvalid(f"pi is not invariant: pi({g}.{e}) != pi({e})")
    graph = outsplit_graph(E, os)
    mods = {v: sys.moduli[os.beta[v]] for v in os.targets}

    def step(g: Element, edge: str) -> Tuple[str, Element]:
        v, e = os_pair(edge)
        f, h = sys.act(Element(os.beta[v], g.exponent, sys.moduli[os.beta[v]]), e)
        return os_edge(v, f), Element(os.pi[e], h.exponent, mods[os.pi[e]])

    return ActionSystem(graph, step, mods)


def as_pair(g: Element, os: OutSplitSpec, sys: ActionSystem) -> Tuple[Element, str]:
    """Ordered-pair view (underlying element, target vertex)."""
    return sys.element(os.beta[g.vertex], g.exponent), g.vertex


def putnam_split(xi: EmbeddingPair) -> Tuple[OutSplitSpec, Dict[str, Tuple[str, ...]]]:
    """Out-split of E by the classes E^1 / (xi0(h) ~ xi1(h)); also returns class -> member edges."""
    check_pair(xi)
    members: Dict[str, Tuple[str, ...]] = {}
    pi: Dict[str, str] = {}
    for e in xi.E.edges:
        if e.id in pi:
            continue
        if e.id in xi.h_edges:
            h = xi.h_edges[e.id][0]
            group = (xi.xi0.edges[h], xi.xi1.edges[h])
            name = h
        else:
            group = (e.id,)
            name = e.id
        while name in members:
            name += "'"
        members[name] = group
        for f in group:
            pi[f] = name
    beta = {name: xi.E.s(group[0]) for name, group in members.items()}
    return OutSplitSpec(tuple(members), pi, beta), members


@dataclass(frozen=True, eq=False)
class KepConversion:
    pair: KatsuraPair
    classes: Tuple[str, ...]
    members: Mapping[str, Tuple[str, ...]]
    edge_map: Mapping[str, str] = field(default_factory=dict)


def putnam_to_kep(xi: EmbeddingPair) -> KepConversion:
    os, members = putnam_split(xi)
    graph = outsplit_graph(xi.E, os)
    A = adjacency_matrix(graph)
    B = [[max(0, a - 1) for a in row] for row in A]
    index = graph.vertex_index
    edge_map = {}
    for f in graph.edges:
        v, e = os_pair(f.id)
        m = xi.h_edges[e][1] if e in xi.h_edges else 0
        edge_map[f.id] = KepEdge(index[f.range], index[f.source], m).id
    pair = KatsuraPair.of(A, B)
    logger.info("embedding pair -> Katsura pair on %d classes", len(members))
    return KepConversion(pair, os.targets, members, edge_map)


def kep_from_outsplit_check(xi: EmbeddingPair, bound: int = 4) -> List[str]:
    """Compare the out-split G_xi action with the KEP action through the edge dictionary."""
    conv = putnam_to_kep(xi)
    os, _ = putnam_split(xi)
    split = outsplit_bundle(xi_system(xi, faithful=False), os)
    kep = kep_system(conv.pair, faithful=False)
    index = split.graph.vertex_index
    problems = []
    for f in split.graph.edges:
        for g in split.elements_within(f.range, bound):
            image, rest = split.act(g, f.id)
            k_image, k_rest = kep.act(kep.element(str(index[f.range]), g.exponent), conv.edge_map[f.id])
            if conv.edge_map[image] != k_image:
                problems.append(f"{g}.{f.id}: {conv.edge_map[image]} != {k_image}")
            modulus = split.moduli[rest.vertex]
            if Element(rest.vertex, k_rest.exponent, modulus) != rest:
                problems.append(f"{g}|{f.id}: exponent {rest.exponent} != {k_rest.exponent}")
    return problems


@dataclass
class ConjugacyReport:
    samples: int = 0
    discrepancies: List[str] = field(default_factory=list)
    nucleus_within_lift: Optional[bool] = None


def _nucleus_or_units(sys: ActionSystem) -> List[Element]:
    found = compute_nucleus(sys, standard_generators(sys))
    if isinstance(found, Nucleus):
        return sorted(found.elements, key=lambda g: (g.vertex, g.exponent))
    logger.warning("nucleus closure diverged; falling back to generators")
    return standard_generators(sys)


def conjugacy_check(
    sys: ActionSystem, os: OutSplitSpec, depth: int, samples: int, rng: random.Random
) -> ConjugacyReport:
    """Sampled check that I respects asymptotic equivalence in both directions."""
    split = outsplit_bundle(sys, os)
    F = _nucleus_or_units(sys)
    lift = [Element(w, g.exponent, split.moduli[w]) for g in F for w in os.targets if os.beta[w] == g.vertex]
    report = ConjugacyReport()

    split_nucleus = compute_nucleus(split, standard_generators(split))
    if isinstance(split_nucleus, Nucleus):
        report.nucleus_within_lift = split_nucleus.elements <= set(lift)

    for _ in range(samples):
        mu = random_path(sys.graph, rng, depth + 1)
        if mu is None:
            continue
        movers = [g for g in F if g.vertex == sys.graph.r(mu[0])]
        if movers and rng.random() < 0.5:
            nu = act_on_path(sys, rng.choice(movers), mu)[0]
        else:
            nu = random_path(sys.graph, rng, depth + 1, first=mu[0])
            if nu is None:
                continue
        v = os.pi[mu[0]]
        on_e = ae_oracle(sys, mu[1:], nu[1:], F)
        on_os = ae_oracle(split, conjugacy_I_n(sys.graph, os, v, mu[1:]), conjugacy_I_n(sys.graph, os, v, nu[1:]), lift)
        report.samples += 1
        if on_e != on_os:
            report.discrepancies.append(f"{' '.join(mu)} vs {' '.join(nu)}: E={on_e} OS={on_os}")
    logger.info("conjugacy check: %d samples, %d discrepancies", report.samples, len(report.discrepancies))
    return report
