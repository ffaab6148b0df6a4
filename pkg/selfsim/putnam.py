"""Embedding pairs xi = (xi0, xi1): H -> E and the binary-carry action of G_xi on E."""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Tuple

from selfsim.action import ActionSystem, Element, acts_trivially
from selfsim.errors import DomainMismatch, InvalidPair
from selfsim.graph import INF, Graph, Length, longest_path_into, validate
from selfsim.limitspace import EPPath, common_period, horizon

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Embedding:
    vertices: Mapping[str, str]
    edges: Mapping[str, str]


@dataclass(frozen=True, eq=False)
class EmbeddingPair:
    H: Graph
    E: Graph
    xi0: Embedding
    xi1: Embedding

    def xi(self, i: int) -> Embedding:
        return self.xi1 if i else self.xi0

    @cached_property
    def h_edges(self) -> Dict[str, Tuple[str, int]]:
        """E-edge -> (H-edge h, i) for every edge xi^i(h) of H^1_xi."""
        out = {}
        for i in (0, 1):
            for h, e in self.xi(i).edges.items():
                out[e] = (h, i)
        return out

    @cached_property
    def h_vertices(self) -> Dict[str, str]:
        """E-vertex -> H-vertex over H^0_xi."""
        return {w: v for v, w in self.xi0.vertices.items()}


def _check_embedding(xi: EmbeddingPair, i: int) -> List[str]:
    emb = xi.xi(i)
    name = f"xi{i}"
    defects = []
    for v in xi.H.vertices:
        if v not in emb.vertices:
            defects.append(f"{name} is not defined on vertex {v!r}")
        elif emb.vertices[v] not in xi.E.vertices:
            defects.append(f"{name}({v}) = {emb.vertices[v]!r} is not a vertex of E")
    for h in xi.H.edges:
        if h.id not in emb.edges:
            defects.append(f"{name} is not defined on edge {h.id!r}")
        elif emb.edges[h.id] not in xi.E.edge_map:
            defects.append(f"{name}({h.id}) = {emb.edges[h.id]!r} is not an edge of E")
    if defects:
        return defects
    if len(set(emb.vertices.values())) != len(emb.vertices):
        defects.append(f"{name} is not injective on vertices")
    if len(set(emb.edges.values())) != len(emb.edges):
        defects.append(f"{name} is not injective on edges")
    for h in xi.H.edges:
        e = emb.edges[h.id]
        if xi.E.r(e) != emb.vertices[h.range]:
            defects.append(f"homomorphism: {name} does not preserve the range of {h.id!r}")
        if xi.E.s(e) != emb.vertices[h.source]:
            defects.append(f"homomorphism: {name} does not preserve the source of {h.id!r}")
    return defects


def validate_pair(xi: EmbeddingPair) -> List[str]:
    defects = [f"H: {d}" for d in validate(xi.H)] + [f"E: {d}" for d in validate(xi.E)]
    if defects:
        return defects
    defects = _check_embedding(xi, 0) + _check_embedding(xi, 1)
    if defects:
        return defects
    if dict(xi.xi0.vertices) != dict(xi.xi1.vertices):
        defects.append("vertex maps: xi0 and xi1 differ on H^0")
    shared = set(xi.xi0.edges.values()) & set(xi.xi1.edges.values())
    for e in sorted(shared):
        defects.append(f"disjointness: {e!r} lies in both xi0(H^1) and xi1(H^1)")
    return defects


def check_pair(xi: EmbeddingPair) -> EmbeddingPair:
    defects = validate_pair(xi)
    if defects:
        raise InvalidPair("invalid embedding pair", defects)
    return xi


def ell(xi: EmbeddingPair, v: str) -> Length:
    return longest_path_into(xi.H, v)


def moduli(xi: EmbeddingPair, faithful: bool = True) -> Dict[str, Length]:
    out: Dict[str, Length] = {}
    for w in xi.E.vertices:
        if w not in xi.h_vertices:
            out[w] = 1
        elif not faithful:
            out[w] = INF
        else:
            length = ell(xi, xi.h_vertices[w])
            out[w] = INF if length == INF else 2 ** int(length)
    return out


def xi_step(
    xi: EmbeddingPair, g: Element, e: str, mods: Mapping[str, Length]
) -> Tuple[str, Element]:
    if xi.E.r(e) != g.vertex:
        raise DomainMismatch(f"{g} cannot act on {e!r}")
    target = xi.E.s(e)
    if e not in xi.h_edges:
        return e, Element(target, 0, mods[target])
    h, i = xi.h_edges[e]
    j = (g.exponent + i) % 2
    n = (g.exponent + i - j) // 2
    return xi.xi(j).edges[h], Element(target, n, mods[target])


def xi_system(xi: EmbeddingPair, faithful: bool = True) -> ActionSystem:
    """The G_xi action; with ``faithful=False`` vertices of H^0_xi carry all of Z."""
    check_pair(xi)
    mods = moduli(xi, faithful)

    def step(g: Element, e: str) -> Tuple[str, Element]:
        return xi_step(xi, g, e, mods)

    return ActionSystem(xi.E, step, mods)


def kernel_exponent_acts_trivially(xi: EmbeddingPair, v: str, k: int, depth: int) -> bool:
    """Whether (k, xi0(v)) in the unreduced Z-action fixes every path up to ``depth``."""
    sys = xi_system(xi, faithful=False)
    return acts_trivially(sys, sys.element(xi.xi0.vertices[v], k), depth)


def _carry_tail(xi: EmbeddingPair, mu: EPPath, nu: EPPath, hi: int, i: int) -> bool:
    """Every position <= hi has mu_k = xi^i(y_k) and nu_k = xi^(1-i)(y_k) for one H-edge y_k."""
    lo = min(hi, horizon(mu, nu)) - common_period(mu, nu)
    for pos in range(lo, hi + 1):
        a = xi.h_edges.get(mu.edge_at(pos))
        b = xi.h_edges.get(nu.edge_at(pos))
        if a is None or b is None or a[0] != b[0] or a[1] != i or b[1] != 1 - i:
            return False
    return True


def xi_equivalent(xi: EmbeddingPair, mu: EPPath, nu: EPPath) -> bool:
    """Binary-carry identification on eventually periodic paths.

    Let j be the rightmost position where mu and nu differ. They are
    identified when, for some i, mu carries xi^i and nu carries xi^(1-i) of
    the same H-edge at every position left of j, and either j = -1 with the
    same holds at j, or mu_j, nu_j flip the roles, or the edge right of j is
    common and lies outside H^1_xi.
    """
    if mu == nu:
        return True
    lo = horizon(mu, nu) - common_period(mu, nu)
    j = next((pos for pos in range(-1, lo - 1, -1) if mu.edge_at(pos) != nu.edge_at(pos)), None)
    if j is None:
        return True
    for i in (0, 1):
        if j == -1 and _carry_tail(xi, mu, nu, -1, i):
            return True
        a = xi.h_edges.get(mu.edge_at(j))
        b = xi.h_edges.get(nu.edge_at(j))
        if a and b and a[0] == b[0] and a[1] == 1 - i and b[1] == i and _carry_tail(xi, mu, nu, j - 1, i):
            return True
        if j <= -2 and mu.edge_at(j + 1) not in xi.h_edges and _carry_tail(xi, mu, nu, j, i):
            return True
    return False


def raise_tail(xi: EmbeddingPair, mu: EPPath, i: int = 1) -> EPPath:
    """Replace each cycle edge in H^1_xi by xi^i of its H-edge."""
    cycle = [xi.xi(i).edges[xi.h_edges[e][0]] if e in xi.h_edges else e for e in mu.cycle]
    return EPPath.canonical(cycle, mu.suffix)


def carry_partner(xi: EmbeddingPair, mu: EPPath) -> Optional[EPPath]:
    """Add one from the far left: xi1 edges become xi0 until the first xi0 edge (flipped) or non-H edge."""
    if any(xi.h_edges.get(e, (None, 0))[1] != 1 for e in mu.cycle):
        return None
    suffix = list(mu.suffix)
    for idx, e in enumerate(suffix):
        if e not in xi.h_edges:
            break
        h, i = xi.h_edges[e]
        suffix[idx] = xi.xi(1 - i).edges[h]
        if i == 0:
            break
    return EPPath.canonical([xi.xi0.edges[xi.h_edges[e][0]] for e in mu.cycle], suffix)
