"""Finite directed multigraphs and the graph algorithms the rest of the package uses.

Paths are tuples of edge ids written left to right, so ``mu = (e1, e2)``
means s(e1) = r(e2). A path of length n occupies positions -n..-1.
For networkx every edge is drawn as an arrow s(e) -> r(e); a path
therefore reads against the arrows.
"""
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple, Union

import networkx as nx
from sympy import integer_nthroot

logger = logging.getLogger(__name__)

INF = math.inf
Length = Union[int, float]
Path = Tuple[str, ...]


class Edge(NamedTuple):
    id: str
    range: str
    source: str


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str, str]]) -> "Graph":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _into(self) -> Dict[str, Tuple[str, ...]]:
        into: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            into.setdefault(e.range, []).append(e.id)
        return {v: tuple(ids) for v, ids in into.items()}

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i + 1 for i, v in enumerate(self.vertices)}

    def r(self, e: str) -> str:
        return self.edge_map[e].range

    def s(self, e: str) -> str:
        return self.edge_map[e].source

    def edges_into(self, v: str) -> Tuple[str, ...]:
        """vE^1: edges with range v."""
        return self._into.get(v, ())

    def to_networkx(self, support: Optional[Iterable[str]] = None) -> nx.MultiDiGraph:
        keep = None if support is None else set(support)
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            if keep is None or e.id in keep:
                g.add_edge(e.source, e.range, key=e.id)
        return g


def validate(g: Graph) -> List[str]:
    defects = []
    seen_v: Set[str] = set()
    for v in g.vertices:
        if v in seen_v:
            defects.append(f"duplicate vertex {v!r}")
        seen_v.add(v)
    seen_e: Set[str] = set()
    for e in g.edges:
        if e.id in seen_e:
            defects.append(f"duplicate edge {e.id!r}")
        seen_e.add(e.id)
        if e.range not in seen_v:
            defects.append(f"edge {e.id!r} has undeclared range {e.range!r}")
        if e.source not in seen_v:
            defects.append(f"edge {e.id!r} has undeclared source {e.source!r}")
    return defects


def is_path(g: Graph, mu: Path) -> bool:
    if any(e not in g.edge_map for e in mu):
        return False
    return all(g.s(a) == g.r(b) for a, b in zip(mu, mu[1:]))


def sources_and_sinks(g: Graph) -> Tuple[Set[str], Set[str]]:
    ranges = {e.range for e in g.edges}
    sources_ = {e.source for e in g.edges}
    return {v for v in g.vertices if v not in ranges}, {v for v in g.vertices if v not in sources_}


def adjacency_matrix(g: Graph) -> List[List[int]]:
    idx = g.vertex_index
    n = len(g.vertices)
    a = [[0] * n for _ in range(n)]
    for e in g.edges:
        a[idx[e.range] - 1][idx[e.source] - 1] += 1
    return a


def enumerate_paths(g: Graph, n: int, range_vertex: Optional[str] = None) -> List[Path]:
    if n < 1:
        return []
    if range_vertex is None:
        paths: List[Path] = [(e.id,) for e in g.edges]
    else:
        paths = [(e,) for e in g.edges_into(range_vertex)]
    for _ in range(n - 1):
        paths = [mu + (e,) for mu in paths for e in g.edges_into(g.s(mu[-1]))]
    return paths


@dataclass(frozen=True)
class Component:
    vertices: FrozenSet[str]
    nontrivial: bool


def _simple_digraph(g: Graph, support: Optional[Iterable[str]] = None) -> nx.DiGraph:
    return nx.DiGraph(g.to_networkx(support))


def strongly_connected_components(g: Graph, support: Optional[Iterable[str]] = None) -> List[Component]:
    d = _simple_digraph(g, support)
    comps = []
    for scc in nx.strongly_connected_components(d):
        nontrivial = len(scc) > 1 or any(d.has_edge(v, v) for v in scc)
        comps.append(Component(frozenset(scc), nontrivial))
    order = g.vertex_index
    comps.sort(key=lambda c: min(order[v] for v in c.vertices))
    return comps


def _cyclic_vertices(g: Graph, support: Optional[Iterable[str]]) -> Set[str]:
    out: Set[str] = set()
    for comp in strongly_connected_components(g, support):
        if comp.nontrivial:
            out |= comp.vertices
    return out


def _longest(d: nx.DiGraph, v: str, cyclic: Set[str]) -> Length:
    upstream = nx.ancestors(d, v) | {v}
    if upstream & cyclic:
        return INF
    return nx.dag_longest_path_length(d.subgraph(upstream))


def longest_path_into(g: Graph, v: str, support: Optional[Iterable[str]] = None) -> Length:
    """Longest path y with r(y) = v; infinite when a cycle feeds v."""
    support = None if support is None else list(support)
    return _longest(_simple_digraph(g, support), v, _cyclic_vertices(g, support))


def longest_path_from(g: Graph, v: str, support: Optional[Iterable[str]] = None) -> Length:
    """Longest path y with s(y) = v."""
    support = None if support is None else list(support)
    return _longest(_simple_digraph(g, support).reverse(copy=False), v, _cyclic_vertices(g, support))


@dataclass(frozen=True)
class WeightedCycleResult:
    """Maximum geometric cycle mean, value = (p/q)^(1/L); `value` is None for an acyclic support."""

    value: Optional[Tuple[int, int, int]] = None
    witness: Path = field(default=())

    @property
    def is_none(self) -> bool:
        return self.value is None

    def below_one(self) -> bool:
        if self.value is None:
            return True
        p, q, _ = self.value
        return p < q


def compare_means(a: Tuple[Fraction, int], b: Tuple[Fraction, int]) -> int:
    """Sign of a[0]^(1/a[1]) - b[0]^(1/b[1]), by cross-multiplied integer powers."""
    (x, lx), (y, ly) = a, b
    left = x.numerator ** ly * y.denominator ** lx
    right = y.numerator ** lx * x.denominator ** ly
    return (left > right) - (left < right)


def reduce_mean(x: Fraction, length: int) -> Tuple[int, int, int]:
    """Write x^(1/length) with the smallest exponent that keeps the base rational."""
    for d in range(length, 1, -1):
        if length % d:
            continue
        p, exact_p = integer_nthroot(x.numerator, d)
        q, exact_q = integer_nthroot(x.denominator, d)
        if exact_p and exact_q:
            return int(p), int(q), length // d
    return x.numerator, x.denominator, length


def _cycle_product(cycle: List[str], weight: Callable[[str], Fraction]) -> Fraction:
    prod = Fraction(1)
    for e in cycle:
        prod *= weight(e)
    return prod


def _split_cycles(g: Graph, walk: List[str]) -> List[List[str]]:
    """Cut an arrow-ordered walk into its simple cycles."""
    cycles = []
    stack: List[str] = []
    pos = {g.s(walk[0]): 0} if walk else {}
    verts = [g.s(walk[0])] if walk else []
    for e in walk:
        stack.append(e)
        v = g.r(e)
        if v in pos:
            start = pos[v]
            cycles.append(stack[start:])
            for u in verts[start + 1:]:
                pos.pop(u, None)
            del stack[start:]
            del verts[start + 1:]
        else:
            pos[v] = len(stack)
            verts.append(v)
    return cycles


def _karp(g: Graph, comp: Set[str], edges: List[Edge], weight: Callable[[str], Fraction]) -> Optional[List[str]]:
    n = len(comp)
    best: List[Dict[str, Fraction]] = [{v: Fraction(1) for v in comp}]
    pred: List[Dict[str, str]] = [{}]
    for _ in range(n):
        cur: Dict[str, Fraction] = {}
        back: Dict[str, str] = {}
        for e in edges:
            if e.source not in best[-1]:
                continue
            val = best[-1][e.source] * weight(e.id)
            if e.range not in cur or val > cur[e.range]:
                cur[e.range] = val
                back[e.range] = e.id
        best.append(cur)
        pred.append(back)

    top = None
    top_v = None
    for v in comp:
        if v not in best[n]:
            continue
        worst = None
        for k in range(n):
            if v not in best[k]:
                continue
            cand = (best[n][v] / best[k][v], n - k)
            if worst is None or compare_means(cand, worst) < 0:
                worst = cand
        if worst is not None and (top is None or compare_means(worst, top) > 0):
            top, top_v = worst, v
    if top_v is None:
        return None

    walk = []
    v = top_v
    for k in range(n, 0, -1):
        e = pred[k][v]
        walk.append(e)
        v = g.s(e)
    walk.reverse()
    cycles = _split_cycles(g, walk)
    return max(cycles, key=lambda c: _Mean(_cycle_product(c, weight), len(c)))


@dataclass(frozen=True)
class _Mean:
    product: Fraction
    length: int

    def __lt__(self, other: "_Mean") -> bool:
        return compare_means((self.product, self.length), (other.product, other.length)) < 0


def max_geometric_mean_cycle(
    g: Graph,
    weight: Callable[[str], Fraction],
    support: Optional[Iterable[str]] = None,
) -> WeightedCycleResult:
    support = [e.id for e in g.edges] if support is None else list(support)
    keep = set(support)
    best: Optional[List[str]] = None
    best_mean: Optional[_Mean] = None
    for comp in strongly_connected_components(g, support):
        if not comp.nontrivial:
            continue
        inner = [e for e in g.edges if e.id in keep and e.source in comp.vertices and e.range in comp.vertices]
        cycle = _karp(g, set(comp.vertices), inner, weight)
        if cycle is None:
            continue
        mean = _Mean(_cycle_product(cycle, weight), len(cycle))
        if best_mean is None or best_mean < mean:
            best, best_mean = cycle, mean
    if best is None:
        return WeightedCycleResult()
    # arrow order reversed into path notation
    witness = tuple(reversed(best))
    value = reduce_mean(best_mean.product, best_mean.length)
    logger.debug("max geometric mean cycle %s via %s", value, witness)
    return WeightedCycleResult(value, witness)


def count_paths(g: Graph, n: int) -> int:
    """|E^n|, from powers of the adjacency matrix."""
    a = adjacency_matrix(g)
    vec = [1] * len(g.vertices)
    for _ in range(n):
        vec = [sum(row[j] * vec[j] for j in range(len(vec))) for row in a]
    return sum(vec)


def random_path(g: Graph, rng: random.Random, n: int, first: Optional[str] = None) -> Optional[Path]:
    """Uniform-edge random walk of length n, or None when it hits a source."""
    path = [first or rng.choice(g.edges).id]
    while len(path) < n:
        options = g.edges_into(g.s(path[-1]))
        if not options:
            return None
        path.append(rng.choice(options))
    return tuple(path)
