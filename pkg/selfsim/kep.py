"""Katsura pairs (A, B) and the Katsura-Exel-Pardo action on E_A.

Vertices are "1".."N"; the edge e_{i,j,m} has id ``e_i_j_m``, range i and
source j. A group element a_i^k acts on e_{i,j,m} through the division
identity k*B_ij + m = k'*A_ij + m' with 0 <= m' < A_ij.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx
from sympy import Matrix, ZZ, eye, multiplicity, primefactors
from sympy.matrices.normalforms import smith_normal_form

from selfsim.action import ActionSystem, Element
from selfsim.errors import DomainMismatch, InvalidPair, PreconditionFailed, ZeroRow
from selfsim.graph import (
    INF,
    Graph,
    Length,
    Path,
    WeightedCycleResult,
    longest_path_from,
    max_geometric_mean_cycle,
    strongly_connected_components,
)

logger = logging.getLogger(__name__)

Matrix_ = Tuple[Tuple[int, ...], ...]


class Tri(str, Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Verdict:
    status: Tri
    certificate: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class KatsuraPair:
    A: Matrix_
    B: Matrix_

    @classmethod
    def of(cls, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> "KatsuraPair":
        return cls(tuple(tuple(int(x) for x in row) for row in A), tuple(tuple(int(x) for x in row) for row in B))

    @property
    def N(self) -> int:
        return len(self.A)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(str(i) for i in range(1, self.N + 1))

    def a(self, i: int, j: int) -> int:
        return self.A[i - 1][j - 1]

    def b(self, i: int, j: int) -> int:
        return self.B[i - 1][j - 1]

    def is_01(self) -> bool:
        return all(x in (0, 1) for row in self.B for x in row)


class KepEdge(NamedTuple):
    i: int
    j: int
    m: int

    @property
    def id(self) -> str:
        return f"e_{self.i}_{self.j}_{self.m}"


def kep_edge(edge_id: str) -> KepEdge:
    try:
        tag, i, j, m = edge_id.split("_")
        if tag != "e":
            raise ValueError(edge_id)
        return KepEdge(int(i), int(j), int(m))
    except ValueError:
        raise DomainMismatch(f"{edge_id!r} is not a KEP edge id")


def validate_pair(p: KatsuraPair) -> List[str]:
    defects = []
    n = p.N
    if any(len(row) != n for row in p.A):
        defects.append("A is not square")
    if len(p.B) != n or any(len(row) != n for row in p.B):
        defects.append("B does not have the shape of A")
    if defects:
        return defects
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if p.a(i, j) < 0:
                defects.append(f"A[{i}][{j}] is negative")
            elif p.a(i, j) == 0 and p.b(i, j) != 0:
                defects.append(f"B[{i}][{j}] is nonzero where A[{i}][{j}] = 0")
    return defects


def check_pair(p: KatsuraPair) -> KatsuraPair:
    defects = validate_pair(p)
    if defects:
        raise InvalidPair("invalid Katsura pair", defects)
    return p


@lru_cache(maxsize=None)
def build_graph(p: KatsuraPair) -> Graph:
    check_pair(p)
    edges = []
    for i in range(1, p.N + 1):
        for j in range(1, p.N + 1):
            for m in range(p.a(i, j)):
                edges.append((KepEdge(i, j, m).id, str(i), str(j)))
    return Graph.build(p.vertices, edges)


def edge_ratio(p: KatsuraPair, edge_id: str) -> Fraction:
    e = kep_edge(edge_id)
    return Fraction(p.b(e.i, e.j), p.a(e.i, e.j))


def kep_step(
    p: KatsuraPair, g: Element, edge_id: str, moduli: Optional[Dict[str, Length]] = None
) -> Tuple[str, Element]:
    e = kep_edge(edge_id)
    if g.vertex != str(e.i):
        raise DomainMismatch(f"{g} cannot act on {edge_id}")
    a, b = p.a(e.i, e.j), p.b(e.i, e.j)
    k_hat, m_hat = divmod(g.exponent * b + e.m, a)
    target = str(e.j)
    modulus = INF if moduli is None else moduli[target]
    return KepEdge(e.i, e.j, m_hat).id, Element(target, k_hat, modulus)


@lru_cache(maxsize=None)
def kep_system(p: KatsuraPair, faithful: bool = True) -> ActionSystem:
    """The KEP action; ``faithful`` reduces exponents mod the isotropy orders."""
    build_graph(p)
    moduli = dict(isotropy_orders(p)) if faithful else {v: INF for v in p.vertices}

    def step(g: Element, edge_id: str) -> Tuple[str, Element]:
        return kep_step(p, g, edge_id, moduli)

    return ActionSystem(build_graph(p), step, moduli)


def restriction_exponent(p: KatsuraPair, m: int, mu: Path) -> Fraction:
    """Closed form for the exponent of a^m|_mu, using the digits of mu and a^m.mu."""
    sys = kep_system(p, faithful=False)
    image = []
    g = Element(str(kep_edge(mu[0]).i), m)
    for e in mu:
        f, g = sys.act(g, e)
        image.append(f)
    ratios = [edge_ratio(p, e) for e in mu]
    a_vals = [Fraction(p.a(kep_edge(e).i, kep_edge(e).j)) for e in mu]
    n = len(mu)
    total = Fraction(m)
    for r in ratios:
        total *= r
    for t in range(n):
        b_after = Fraction(1)
        for u in range(t + 1, n):
            b_after *= p.b(kep_edge(mu[u]).i, kep_edge(mu[u]).j)
        a_from = Fraction(1)
        for u in range(t, n):
            a_from *= a_vals[u]
        total += (kep_edge(mu[t]).m - kep_edge(image[t]).m) * b_after / a_from
    return total


@dataclass(frozen=True)
class Decomposition:
    infinite_vertices: Tuple[str, ...]
    finite_vertices: Tuple[str, ...]
    A_inf: Matrix_
    B_inf: Matrix_
    A_fin: Matrix_
    B_fin: Matrix_
    edges_inf: Tuple[str, ...]
    edges_fin: Tuple[str, ...]

    def infinite_part(self) -> KatsuraPair:
        return KatsuraPair(self.A_inf, self.B_inf)

    def finite_part(self) -> KatsuraPair:
        return KatsuraPair(self.A_fin, self.B_fin)


def _support_digraph(p: KatsuraPair, vertices: Optional[Iterable[str]] = None) -> nx.DiGraph:
    """Vertex-level arrows j -> i for B_ij != 0."""
    keep = set(p.vertices if vertices is None else vertices)
    d = nx.DiGraph()
    d.add_nodes_from(v for v in p.vertices if v in keep)
    for i in range(1, p.N + 1):
        for j in range(1, p.N + 1):
            if p.b(i, j) != 0 and str(i) in keep and str(j) in keep:
                d.add_edge(str(j), str(i))
    return d


def _cycle_products(p: KatsuraPair, cycle: List[str]) -> Tuple[int, int]:
    a, b = 1, 1
    for u, w in zip(cycle, cycle[1:] + cycle[:1]):
        a *= p.a(int(w), int(u))
        b *= abs(p.b(int(w), int(u)))
    return a, b


def _sub(m: Matrix_, idx: List[int], support: Matrix_) -> Matrix_:
    return tuple(tuple(m[i][j] if support[i][j] != 0 else 0 for j in idx) for i in idx)


@lru_cache(maxsize=None)
def decompose(p: KatsuraPair) -> Decomposition:
    build_graph(p)
    d = _support_digraph(p)
    infinite: Set[str] = set()
    for cycle in nx.simple_cycles(d):
        a, b = _cycle_products(p, cycle)
        if b % a:
            infinite |= set(cycle)
    for v in list(infinite):
        infinite |= nx.descendants(d, v)
    inf_v = tuple(v for v in p.vertices if v in infinite)
    fin_v = tuple(v for v in p.vertices if v not in infinite)
    inf_idx = [int(v) - 1 for v in inf_v]
    fin_idx = [int(v) - 1 for v in fin_v]

    g = build_graph(p)
    edges_inf, edges_fin = [], []
    for e in g.edges:
        k = kep_edge(e.id)
        if p.b(k.i, k.j) == 0:
            continue
        if e.source in infinite:
            edges_inf.append(e.id)
        if e.range not in infinite:
            if e.source in infinite:
                raise RuntimeError(f"finite vertices are not invariant: {e.id}")
            edges_fin.append(e.id)
    return Decomposition(
        inf_v,
        fin_v,
        _sub(p.A, inf_idx, p.B),
        _sub(p.B, inf_idx, p.B),
        _sub(p.A, fin_idx, p.B),
        _sub(p.B, fin_idx, p.B),
        tuple(edges_inf),
        tuple(edges_fin),
    )


@lru_cache(maxsize=None)
def isotropy_orders(p: KatsuraPair) -> Dict[str, Length]:
    dec = decompose(p)
    g = build_graph(p)
    orders: Dict[str, int] = {v: 1 for v in dec.finite_vertices}
    for _ in range(10000):
        updated = {}
        for v in dec.finite_vertices:
            val = 1
            for e in g.edges_into(v):
                k = kep_edge(e)
                b = p.b(k.i, k.j)
                if b == 0:
                    continue
                t = p.a(k.i, k.j) * orders[str(k.j)]
                val = math.lcm(val, t // math.gcd(abs(b), t))
            updated[v] = val
        if updated == orders:
            break
        orders = updated
    else:
        raise RuntimeError("isotropy fixpoint did not stabilise")
    result: Dict[str, Length] = {v: INF for v in dec.infinite_vertices}
    result.update(orders)
    return {v: result[v] for v in p.vertices}


def _ratio_walks(p: KatsuraPair, start: str, depth: int, edges: Optional[Set[str]] = None):
    """Yield (path, |B_mu|/A_mu) over paths mu in start E^*, one path per (source, ratio) state."""
    g = build_graph(p)
    frontier = {(start, Fraction(1)): ()}
    for _ in range(depth):
        nxt: Dict[Tuple[str, Fraction], Path] = {}
        for (v, ratio), path in frontier.items():
            for e in g.edges_into(v):
                if edges is not None and e not in edges:
                    continue
                r = ratio * edge_ratio(p, e)
                if r == 0:
                    continue
                key = (g.s(e), r)
                if key not in nxt:
                    nxt[key] = path + (e,)
                    yield nxt[key], r
        frontier = nxt


def denominator_scan(p: KatsuraPair, depth: int) -> Dict[str, int]:
    """Brute-force lcm of A_mu/gcd(A_mu,|B_mu|) over paths of length <= depth."""
    out = {}
    for v in p.vertices:
        val = 1
        for _, r in _ratio_walks(p, v, depth):
            val = math.lcm(val, r.denominator)
        out[v] = val
    return out


def kernel_member(p: KatsuraPair, i: str, k: int, depth: int) -> Verdict:
    if k == 0:
        return Verdict(Tri.YES, {"reason": "unit"})
    for path, r in _ratio_walks(p, i, depth):
        if (k * r).denominator != 1:
            return Verdict(Tri.NO, {"witness": list(path)})
    order = isotropy_orders(p)[i]
    if order != INF and k % order == 0:
        return Verdict(Tri.YES, {"order": order})
    return Verdict(Tri.UNKNOWN, {"depth": depth})


def contraction_coefficient(p: KatsuraPair) -> WeightedCycleResult:
    dec = decompose(p)
    if not dec.edges_inf:
        return WeightedCycleResult()
    weight = lambda e: abs(edge_ratio(p, e))
    return max_geometric_mean_cycle(build_graph(p), weight, dec.edges_inf)


def is_contracting(p: KatsuraPair) -> bool:
    return contraction_coefficient(p).below_one()


def _arrows_to_path(arrows: Iterable[Tuple[str, str]]) -> List[str]:
    """Vertex arrows j -> i become the edges e_{i,j,0}, in path order."""
    return [KepEdge(int(w), int(u), 0).id for u, w in reversed(list(arrows))]


def _edge_digraph(p: KatsuraPair, edges: Iterable[str]) -> nx.DiGraph:
    d = nx.DiGraph()
    for e in edges:
        k = kep_edge(e)
        d.add_edge(str(k.j), str(k.i))
    return d


@lru_cache(maxsize=None)
def regular_01(p: KatsuraPair) -> Verdict:
    if not p.is_01():
        raise PreconditionFailed("regular_01 needs B with entries in {0, 1}")
    dec = decompose(p)
    g = build_graph(p)

    unit_inf = [e for e in dec.edges_inf if kep_edge(e).m == 0 and p.a(kep_edge(e).i, kep_edge(e).j) == 1]
    d_inf = _edge_digraph(p, unit_inf)
    try:
        arrows = nx.find_cycle(d_inf)
        return Verdict(Tri.NO, {"clause": "infinite", "cycle": _arrows_to_path(arrows)})
    except nx.NetworkXNoCycle:
        bound_inf = nx.dag_longest_path_length(d_inf) if d_inf.number_of_nodes() else 0

    comps = strongly_connected_components(g, dec.edges_fin)
    d_fin = _edge_digraph(p, dec.edges_fin)
    bound_fin = 0
    for e in dec.edges_fin:
        k = kep_edge(e)
        if k.m != 0 or p.a(k.i, k.j) < 2:
            continue
        reach = longest_path_from(g, g.r(e), dec.edges_fin)
        if reach == INF:
            downstream = nx.descendants(d_fin, g.r(e)) | {g.r(e)}
            comp = next(c for c in comps if c.nontrivial and c.vertices & downstream)
            arrows = nx.find_cycle(d_fin.subgraph(comp.vertices))
            return Verdict(Tri.NO, {"clause": "finite", "edge": e, "cycle": _arrows_to_path(arrows)})
        bound_fin = max(bound_fin, int(reach) + 1)
    return Verdict(Tri.YES, {"bound_infinite": bound_inf, "bound_finite": bound_fin})


def _finite_part_regular(p: KatsuraPair) -> Verdict:
    dec = decompose(p)
    orders = isotropy_orders(p)
    g = build_graph(p)
    fin = set(dec.edges_fin)
    d = nx.DiGraph()
    for v in dec.finite_vertices:
        o = int(orders[v])
        for k in range(1, o):
            d.add_node((v, k))
            for e in g.edges_into(v):
                if e not in fin:
                    continue
                ke = kep_edge(e)
                a, b = p.a(ke.i, ke.j), p.b(ke.i, ke.j)
                if (k * b) % a:
                    continue
                target = (k * b // a) % int(orders[g.s(e)])
                if target:
                    d.add_edge((v, k), (g.s(e), target), edge=e)
    try:
        cycle = nx.find_cycle(d)
    except nx.NetworkXNoCycle:
        return Verdict(Tri.YES, {"states": d.number_of_nodes()})
    states = [f"{v}:{k}" for (v, k), _ in cycle]
    edges = [d.edges[u, w]["edge"] for u, w in cycle]
    return Verdict(Tri.NO, {"states": states, "path": edges})


def _divisible_closed_walk(p: KatsuraPair, dec: Decomposition, d_max: int, cap: int = 50000) -> Optional[List[str]]:
    d = _edge_digraph(p, dec.edges_inf)
    for cycle in nx.simple_cycles(d):
        a, b = _cycle_products(p, cycle)
        if b % a == 0:
            return _arrows_to_path(zip(cycle, cycle[1:] + cycle[:1]))
    for start in dec.infinite_vertices:
        if start not in d:
            continue
        frontier: Dict[Tuple[str, Fraction], List[Tuple[str, str]]] = {(start, Fraction(1)): []}
        for _ in range(d_max):
            nxt: Dict[Tuple[str, Fraction], List[Tuple[str, str]]] = {}
            for (v, ratio), walk in frontier.items():
                for w in d.successors(v):
                    r = ratio * Fraction(p.b(int(w), int(v)), p.a(int(w), int(v)))
                    arrows = walk + [(v, w)]
                    if w == start and r.denominator == 1:
                        return _arrows_to_path(arrows)
                    nxt.setdefault((w, r), arrows)
            frontier = nxt
            if len(frontier) > cap:
                logger.debug("closed-walk search stopped at %d states", len(frontier))
                break
    return None


def _valuation_certificate(p: KatsuraPair, dec: Decomposition) -> Optional[int]:
    """A prime p with v_p(B_e) <= v_p(A_e) on every edge inside a cycle of E_{A,inf}
    and no cycle made only of equality edges."""
    d = _edge_digraph(p, dec.edges_inf)
    inner = []
    for scc in nx.strongly_connected_components(d):
        for u, w in d.subgraph(scc).edges():
            inner.append((u, w))
    if not inner:
        return None
    primes = sorted({q for u, w in inner for q in primefactors(p.a(int(w), int(u)))})
    for q in primes:
        equal = nx.DiGraph()
        ok = True
        for u, w in inner:
            va = multiplicity(q, p.a(int(w), int(u)))
            vb = multiplicity(q, abs(p.b(int(w), int(u))))
            if vb > va:
                ok = False
                break
            if vb == va:
                equal.add_edge(u, w)
        if ok and nx.is_directed_acyclic_graph(equal):
            return q
    return None


def _fixed_path_search(p: KatsuraPair, dec: Decomposition, k_max: int, d_max: int) -> List[str]:
    """Elements a_v^k (|k| <= k_max) fixing some path of length d_max with a nontrivial restriction."""
    g = build_graph(p)
    inf_edges = set(dec.edges_inf)
    found = []
    for v in dec.infinite_vertices:
        for k in [x for x in range(-k_max, k_max + 1) if x]:
            layer = {(v, k)}
            for _ in range(d_max):
                nxt = set()
                for u, x in layer:
                    for e in g.edges_into(u):
                        if e not in inf_edges or kep_edge(e).m:
                            continue
                        ke = kep_edge(e)
                        a, b = p.a(ke.i, ke.j), p.b(ke.i, ke.j)
                        if (x * b) % a == 0 and x * b // a:
                            nxt.add((g.s(e), x * b // a))
                layer = nxt
                if not layer:
                    break
            if layer:
                found.append(f"a_{v}^{k}")
    return found


def _infinite_part_regular(p: KatsuraPair, k_max: int, d_max: int) -> Verdict:
    dec = decompose(p)
    if not dec.infinite_vertices:
        return Verdict(Tri.YES, {"reason": "empty"})
    rho = contraction_coefficient(p)
    if rho.below_one():
        return Verdict(Tri.YES, {"reason": "contracting"})
    walk = _divisible_closed_walk(p, dec, d_max)
    if walk is not None:
        return Verdict(Tri.NO, {"reason": "divisible cycle", "cycle": walk})
    prime = _valuation_certificate(p, dec)
    if prime is not None:
        return Verdict(Tri.YES, {"reason": "valuation", "prime": prime})
    evidence = _fixed_path_search(p, dec, k_max, d_max)
    logger.debug("infinite-part regularity inconclusive; long fixed paths for %s", evidence)
    return Verdict(Tri.UNKNOWN, {"reason": "inconclusive", "k_max": k_max, "d_max": d_max, "long_fixed": evidence})


def regular_general(p: KatsuraPair, k_max: int, d_max: int) -> Verdict:
    fin = _finite_part_regular(p)
    inf = _infinite_part_regular(p, k_max, d_max)
    if Tri.NO in (fin.status, inf.status):
        status = Tri.NO
    elif fin.status == inf.status == Tri.YES:
        status = Tri.YES
    else:
        status = Tri.UNKNOWN
    logger.info("regularity %s (finite %s, infinite %s)", status.value, fin.status.value, inf.status.value)
    return Verdict(status, {"finite": {"status": fin.status.value, **fin.certificate},
                            "infinite": {"status": inf.status.value, **inf.certificate}})


@dataclass(frozen=True)
class AbelianGroup:
    torsion: Tuple[int, ...]
    rank: int

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) or "0"


def smith_diagonal(m: Sequence[Sequence[int]]) -> List[int]:
    if not m:
        return []
    snf = smith_normal_form(Matrix(m), domain=ZZ)
    return [abs(int(snf[i, i])) for i in range(min(snf.shape))]


def _coker_and_nullity(m: Sequence[Sequence[int]]) -> Tuple[AbelianGroup, int]:
    diag = smith_diagonal(m)
    torsion = tuple(d for d in diag if d > 1)
    free = sum(1 for d in diag if d == 0)
    return AbelianGroup(torsion, free), free


@dataclass(frozen=True)
class KTheory:
    K0: AbelianGroup
    K1: AbelianGroup


def k_theory(p: KatsuraPair) -> KTheory:
    check_pair(p)
    for i, row in enumerate(p.A, start=1):
        if not any(row):
            raise ZeroRow(f"A has a zero row at vertex {i}")
    n = p.N
    i_minus_a = (eye(n) - Matrix(p.A)).tolist()
    i_minus_b = (eye(n) - Matrix(p.B)).tolist()
    coker_a, null_a = _coker_and_nullity(i_minus_a)
    coker_b, null_b = _coker_and_nullity(i_minus_b)
    return KTheory(
        AbelianGroup(coker_a.torsion, coker_a.rank + null_b),
        AbelianGroup(coker_b.torsion, coker_b.rank + null_a),
    )


@dataclass(frozen=True)
class AnalysisReport:
    contracting: bool
    rho: WeightedCycleResult
    regular: Verdict
    orders: Dict[str, Length]
    decomposition: Decomposition
    regular_01: Optional[Verdict] = None
    k_theory: Optional[KTheory] = None


def analyze(p: KatsuraPair, k_max: int, d_max: int) -> AnalysisReport:
    check_pair(p)
    rho = contraction_coefficient(p)
    try:
        kt: Optional[KTheory] = k_theory(p)
    except ZeroRow:
        kt = None
    report = AnalysisReport(
        contracting=rho.below_one(),
        rho=rho,
        regular=regular_general(p, k_max, d_max),
        orders=isotropy_orders(p),
        decomposition=decompose(p),
        regular_01=regular_01(p) if p.is_01() else None,
        k_theory=kt,
    )
    logger.info("analysis: contracting=%s regular=%s", report.contracting, report.regular.status.value)
    return report
