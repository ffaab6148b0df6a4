"""Generic action-restriction engine for self-similar group bundles over a Graph.

An element a_v^k lives at a vertex v and is reduced modulo the vertex modulus
(``INF`` for the infinite cyclic group). A system supplies a single-edge step
``(g, e) -> (g.e, g|_e)``; everything on paths is derived from it.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Sequence, Set, Tuple, Union

import networkx as nx

from selfsim.config import NUCLEUS_GROWTH
from selfsim.errors import DomainMismatch, LengthMismatch
from selfsim.graph import INF, Graph, Length, Path, enumerate_paths

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Element:
    vertex: str
    exponent: int
    modulus: Length = INF

    def __post_init__(self):
        if self.modulus != INF:
            object.__setattr__(self, "exponent", self.exponent % int(self.modulus))

    @property
    def is_unit(self) -> bool:
        return self.exponent == 0

    def __mul__(self, other: "Element") -> "Element":
        if other.vertex != self.vertex:
            raise DomainMismatch(f"cannot compose elements at {self.vertex!r} and {other.vertex!r}")
        return Element(self.vertex, self.exponent + other.exponent, self.modulus)

    def inverse(self) -> "Element":
        return Element(self.vertex, -self.exponent, self.modulus)

    def __str__(self) -> str:
        return f"a_{self.vertex}^{self.exponent}"


Step = Callable[[Element, str], Tuple[str, Element]]


@dataclass(frozen=True)
class ActionSystem:
    graph: Graph
    step: Step
    moduli: Mapping[str, Length]

    def element(self, v: str, k: int) -> Element:
        return Element(v, k, self.moduli[v])

    def unit(self, v: str) -> Element:
        return self.element(v, 0)

    def act(self, g: Element, e: str) -> Tuple[str, Element]:
        if self.graph.r(e) != g.vertex:
            raise DomainMismatch(f"{g} cannot act on edge {e!r} with range {self.graph.r(e)!r}")
        return self.step(g, e)

    def elements_within(self, v: str, bound: int) -> List[Element]:
        m = self.moduli[v]
        if m != INF and m <= 2 * bound + 1:
            return [self.element(v, k) for k in range(int(m))]
        return [self.element(v, k) for k in range(-bound, bound + 1)]


def act_on_path(sys: ActionSystem, g: Element, mu: Path) -> Tuple[Path, Element]:
    """Return (g.mu, g|_mu); the empty path leaves g untouched."""
    out = []
    h = g
    for e in mu:
        f, h = sys.act(h, e)
        out.append(f)
    return tuple(out), h


def acts_trivially(sys: ActionSystem, g: Element, depth: int) -> bool:
    """True when g fixes every path of length <= depth with range d(g)."""
    for n in range(1, depth + 1):
        for mu in enumerate_paths(sys.graph, n, g.vertex):
            if act_on_path(sys, g, mu)[0] != mu:
                return False
    return True


def standard_generators(sys: ActionSystem) -> List[Element]:
    """Units and a_v^{+-1} at every vertex."""
    gens: List[Element] = []
    for v in sys.graph.vertices:
        for k in (0, 1, -1):
            g = sys.element(v, k)
            if g not in gens:
                gens.append(g)
    return gens


def _edge_axioms(sys: ActionSystem, g: Element, h: Element, e: str) -> List[str]:
    g_graph = sys.graph
    out = []
    f, rest = sys.act(g, e)
    if g_graph.r(f) != g.vertex:
        out.append(f"A0: r({g}.{e}) = {g_graph.r(f)} != {g.vertex}")
    if rest.vertex != g_graph.s(e) or rest.vertex != g_graph.s(f):
        out.append(f"A0: {g}|_{e} sits at {rest.vertex}, expected {g_graph.s(e)}")
    u = sys.unit(g.vertex)
    if sys.act(u, e) != (e, sys.unit(g_graph.s(e))):
        out.append(f"A1: unit moves {e}")
    hf, h_rest = sys.act(h, e)
    gf, g_rest = sys.act(g, hf)
    gh_f, gh_rest = sys.act(g * h, e)
    if gh_f != gf:
        out.append(f"A2: ({g}{h}).{e} = {gh_f} != {gf}")
    if gh_rest != g_rest * h_rest:
        out.append(f"restriction of {g}{h} at {e} is not the product of restrictions")
    inv = g.inverse()
    back, _ = sys.act(inv, e)
    lhs = sys.act(inv, e)[1]
    rhs = sys.act(g, back)[1].inverse()
    if lhs != rhs:
        out.append(f"A3: {inv}|_{e} = {lhs} != {rhs}")
    return out


def _path_laws(sys: ActionSystem, g: Element, h: Element, mu: Path) -> List[str]:
    g_graph = sys.graph
    out = []
    image, rest = act_on_path(sys, g, mu)
    if len(image) != len(mu):
        out.append(f"length of {g}.{mu} changed")
    if g_graph.r(image[0]) != g.vertex or g_graph.s(image[-1]) != g_graph.s(mu[-1]) or rest.vertex != g_graph.s(mu[-1]):
        out.append(f"law 1 fails for {g} on {mu}")
    for cut in range(1, len(mu)):
        _, head = act_on_path(sys, g, mu[:cut])
        if act_on_path(sys, head, mu[cut:])[1] != rest:
            out.append(f"law 2 fails for {g} on {mu} split at {cut}")
    u_image, u_rest = act_on_path(sys, sys.unit(g.vertex), mu)
    if u_image != mu or not u_rest.is_unit:
        out.append(f"law 3 fails on {mu}")
    h_image, h_rest = act_on_path(sys, h, mu)
    _, g_after = act_on_path(sys, g, h_image)
    if act_on_path(sys, g * h, mu)[1] != g_after * h_rest:
        out.append(f"law 4 fails for {g},{h} on {mu}")
    inv_image, inv_rest = act_on_path(sys, g.inverse(), mu)
    if inv_rest != act_on_path(sys, g, inv_image)[1].inverse():
        out.append(f"law 5 fails for {g} on {mu}")
    return out


def verify_axioms(sys: ActionSystem, depth: int, bound: int = 4) -> List[str]:
    """Exhaustively check the action-restriction axioms and path laws.

    Elements with |k| <= bound (or the whole finite group when it is small)
    are paired with every path up to ``depth``.
    """
    violations: List[str] = []
    for v in sys.graph.vertices:
        elems = sys.elements_within(v, bound)
        for e in sys.graph.edges_into(v):
            for g in elems:
                for h in elems:
                    violations.extend(_edge_axioms(sys, g, h, e))
        for n in range(2, depth + 1):
            paths = enumerate_paths(sys.graph, n, v)
            for g in elems:
                images = set()
                for mu in paths:
                    images.add(act_on_path(sys, g, mu)[0])
                    for h in elems:
                        violations.extend(_path_laws(sys, g, h, mu))
                if len(images) != len(paths):
                    violations.append(f"{g} is not injective on paths of length {n}")
    if violations:
        logger.info("axiom check found %d violations", len(violations))
    return violations


@dataclass(frozen=True)
class Nucleus:
    elements: FrozenSet[Element]
    restrictions: Mapping[Tuple[Element, str], Element]

    def exponents(self, v: str) -> Set[int]:
        return {g.exponent for g in self.elements if g.vertex == v}


@dataclass(frozen=True)
class Diverged:
    explored: int


def compute_nucleus(
    sys: ActionSystem, generators: Iterable[Element], max_iters: int = 0
) -> Union[Nucleus, Diverged]:
    closure: Set[Element] = set(generators)
    frontier = list(closure)
    cap = max_iters or NUCLEUS_GROWTH * max(len(closure), 1)
    table: Dict[Tuple[Element, str], Element] = {}
    grown = 0
    while frontier:
        g = frontier.pop()
        for e in sys.graph.edges_into(g.vertex):
            _, h = sys.act(g, e)
            table[(g, e)] = h
            if h not in closure:
                closure.add(h)
                frontier.append(h)
                grown += 1
                if grown > cap:
                    logger.debug("nucleus closure diverged after %d new elements", grown)
                    return Diverged(len(closure))

    d = nx.DiGraph()
    d.add_nodes_from(closure)
    d.add_edges_from((g, h) for (g, _), h in table.items())
    cyclic = set()
    for scc in nx.strongly_connected_components(d):
        if len(scc) > 1 or any(d.has_edge(g, g) for g in scc):
            cyclic |= scc
    core = set(cyclic)
    for g in cyclic:
        core |= nx.descendants(d, g)
    restrictions = {key: h for key, h in table.items() if key[0] in core}
    logger.debug("nucleus: %d of %d closure elements", len(core), len(closure))
    return Nucleus(frozenset(core), restrictions)


def ae_oracle(sys: ActionSystem, mu: Path, nu: Path, F: Iterable[Element]) -> bool:
    """Finite-depth witness of asymptotic equivalence using elements of F."""
    if len(mu) != len(nu):
        raise LengthMismatch(f"paths of lengths {len(mu)} and {len(nu)}")
    by_vertex: Dict[str, List[Element]] = {}
    for g in F:
        by_vertex.setdefault(g.vertex, []).append(g)
    n = len(mu)
    for t in range(1, n + 1):
        tail_mu, tail_nu = mu[n - t:], nu[n - t:]
        v = sys.graph.r(tail_mu[0])
        if not any(act_on_path(sys, g, tail_mu)[0] == tail_nu for g in by_vertex.get(v, ())):
            return False
    return True


def corrupt(sys: ActionSystem, bad: Sequence[Tuple[Element, str]]) -> ActionSystem:
    """Copy of `sys` whose step returns a wrong restriction on the listed pairs."""
    broken = set(bad)

    def step(g: Element, e: str) -> Tuple[str, Element]:
        f, h = sys.step(g, e)
        if (g, e) in broken:
            h = Element(h.vertex, h.exponent + 1, h.modulus)
        return f, h

    return ActionSystem(sys.graph, step, sys.moduli)
