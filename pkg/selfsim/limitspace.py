"""Eventually periodic left-infinite paths and the limit-space deciders for KEP pairs with B in {0, 1}.

An ``EPPath`` stands for ``...cycle cycle suffix`` with the last suffix edge
at position -1. Series over such paths become finite sums plus one geometric
tail, so every equality here is an exact rational comparison.
"""
import logging
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import networkx as nx

from selfsim.errors import PreconditionFailed
from selfsim.graph import INF, Graph, Length, Path, strongly_connected_components
from selfsim.kep import KatsuraPair, KepEdge, Tri, build_graph, kep_edge, regular_01

logger = logging.getLogger(__name__)


def _primitive_root(cycle: Path) -> Path:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class EPPath:
    cycle: Path
    suffix: Path = ()

    @classmethod
    def canonical(cls, cycle, suffix=()) -> "EPPath":
        cycle, suffix = _primitive_root(tuple(cycle)), tuple(suffix)
        if not cycle:
            raise ValueError("an eventually periodic path needs a nonempty cycle")
        # absorb leading suffix edges that continue the cycle
        while suffix and suffix[0] == cycle[0]:
            cycle = cycle[1:] + cycle[:1]
            suffix = suffix[1:]
        return cls(cycle, suffix)

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def head(self) -> int:
        return len(self.suffix)

    def edge_at(self, pos: int) -> str:
        if pos >= 0:
            raise IndexError(f"positions are negative, got {pos}")
        if -pos <= self.head:
            return self.suffix[self.head + pos]
        q = (-pos - self.head - 1) % self.period
        return self.cycle[self.period - 1 - q]

    def window(self, n: int) -> Path:
        """The truncation occupying positions -n..-1."""
        return tuple(self.edge_at(pos) for pos in range(-n, 0))

    def __str__(self) -> str:
        return f"({' '.join(self.cycle)})^inf {' '.join(self.suffix)}".rstrip()


def check_eppath(g: Graph, mu: EPPath) -> List[str]:
    defects = []
    for e in mu.cycle + mu.suffix:
        if e not in g.edge_map:
            defects.append(f"unknown edge {e!r}")
    if defects:
        return defects
    ring = mu.cycle + mu.cycle[:1]
    for a, b in zip(ring, ring[1:]):
        if g.s(a) != g.r(b):
            defects.append(f"cycle breaks between {a} and {b}")
    tail = mu.cycle[-1:] + mu.suffix
    for a, b in zip(tail, tail[1:]):
        if g.s(a) != g.r(b):
            defects.append(f"path breaks between {a} and {b}")
    return defects


def shift(mu: EPPath) -> EPPath:
    suffix = mu.suffix or mu.cycle
    return EPPath.canonical(mu.cycle, suffix[:-1])


def horizon(*paths: EPPath) -> int:
    """A position left of which every path in ``paths`` repeats with one common period."""
    return -max(mu.head for mu in paths) - 1


def common_period(*paths: EPPath) -> int:
    return math.lcm(*(mu.period for mu in paths))


def periodic_sum(
    mu: EPPath, start: int, term: Callable[[str], Fraction], weight: Callable[[str], Fraction]
) -> Fraction:
    """Sum over k <= start of term(mu_k) / prod_{j=k}^{start} weight(mu_j)."""
    total = Fraction(0)
    scale = Fraction(1)
    pos = start
    anchor = min(start, horizon(mu))
    while pos > anchor:
        e = mu.edge_at(pos)
        scale /= weight(e)
        total += term(e) * scale
        pos -= 1
    block, w = Fraction(0), Fraction(1)
    for k in range(mu.period):
        e = mu.edge_at(anchor - k)
        w *= weight(e)
        block += term(e) / w
    if w == 1:
        if block:
            raise ValueError(f"series over {mu} diverges")
        return total
    return total + scale * block / (1 - 1 / w)


def theta1(p: KatsuraPair, mu: EPPath, start: int = -1) -> Fraction:
    """A-ary digit expansion of the tail ending at ``start``, mod 1."""
    value = periodic_sum(mu, start, lambda e: Fraction(kep_edge(e).m), lambda e: Fraction(_a(p, e)))
    return value % 1


def _a(p: KatsuraPair, e: str) -> int:
    k = kep_edge(e)
    return p.a(k.i, k.j)


def _b(p: KatsuraPair, e: str) -> int:
    k = kep_edge(e)
    return p.b(k.i, k.j)


def _require_01(p: KatsuraPair, regular: bool = True) -> None:
    if not p.is_01():
        raise PreconditionFailed("B must have entries in {0, 1}")
    if regular and regular_01(p).status != Tri.YES:
        raise PreconditionFailed("the pair is not regular")


def tail_break(p: KatsuraPair, mu: EPPath) -> Optional[int]:
    """Right end K of the maximal infinite B = 1 interval [-inf, K]; None if the cycle meets B = 0."""
    if any(_b(p, e) == 0 for e in mu.cycle):
        return None
    for pos in range(-mu.head, 0):
        if _b(p, mu.edge_at(pos)) == 0:
            return pos - 1
    return -1


def _sources_agree(g: Graph, mu: EPPath, nu: EPPath, hi: int) -> bool:
    lo = min(hi, horizon(mu, nu)) - common_period(mu, nu)
    return all(g.s(mu.edge_at(pos)) == g.s(nu.edge_at(pos)) for pos in range(lo, hi + 1))


def _same_component(p: KatsuraPair, mu: EPPath, nu: EPPath) -> Optional[int]:
    k = tail_break(p, mu)
    if k is None or tail_break(p, nu) != k:
        return None
    if any(mu.edge_at(pos) != nu.edge_at(pos) for pos in range(k + 1, 0)):
        return None
    if not _sources_agree(build_graph(p), mu, nu, k):
        return None
    return k


def ae_equivalent(p: KatsuraPair, mu: EPPath, nu: EPPath) -> bool:
    """Exact asymptotic equivalence.

    Away from equality, mu ~ nu needs an infinite B = 1 tail [-inf, K] that is
    maximal, agreeing suffixes right of K, the same source vertices left of K,
    and equal digit expansions theta1 at K. Both paths are periodic left of
    their suffixes, so spine agreement is checked over one common period past
    the longer suffix.
    """
    _require_01(p)
    if mu == nu:
        return True
    k = _same_component(p, mu, nu)
    return k is not None and theta1(p, mu, k) == theta1(p, nu, k)


def component_equivalent(p: KatsuraPair, mu: EPPath, nu: EPPath) -> bool:
    _require_01(p, regular=False)
    return mu == nu or _same_component(p, mu, nu) is not None


class Kind(str, Enum):
    POINT = "POINT"
    CIRCLE = "CIRCLE"


@dataclass(frozen=True)
class ComponentClass:
    kind: Kind
    K: Length
    dynamics_exponent: Optional[int] = None
    theta: Optional[Fraction] = None


def classify_component(p: KatsuraPair, mu: EPPath) -> ComponentClass:
    _require_01(p)
    k = tail_break(p, mu)
    if k is None:
        return ComponentClass(Kind.POINT, INF)
    depth = -(k + 1)
    if all(_a(p, e) == 1 for e in mu.cycle):
        return ComponentClass(Kind.POINT, depth)
    return ComponentClass(Kind.CIRCLE, depth, _a(p, mu.edge_at(k)), theta1(p, mu, k))


def random_eppath(
    g: Graph, rng: random.Random, max_cycle: int = 4, max_suffix: int = 4, support=None
) -> EPPath:
    """Seeded sample: a closed walk inside a random nontrivial component, then a random suffix."""
    keep = {e.id for e in g.edges} if support is None else set(support)
    comps = [c for c in strongly_connected_components(g, keep) if c.nontrivial]
    if not comps:
        raise ValueError("graph has no cycle, so no eventually periodic paths")
    comp = rng.choice(comps).vertices
    inner = [e for e in g.edges if e.id in keep and e.range in comp and e.source in comp]
    start = rng.choice(sorted(comp))

    cycle: List[str] = []
    v = start
    for _ in range(rng.randint(1, max_cycle)):
        e = rng.choice([x for x in inner if x.range == v])
        cycle.append(e.id)
        v = e.source
    if v != start:
        arrows = nx.DiGraph((e.source, e.range) for e in inner)
        hops = nx.shortest_path(arrows, start, v)
        closing = []
        for a, b in zip(hops, hops[1:]):
            closing.append(rng.choice([e.id for e in inner if e.source == a and e.range == b]))
        cycle.extend(reversed(closing))

    suffix: List[str] = []
    v = start
    for _ in range(rng.randint(0, max_suffix)):
        options = [e for e in g.edges_into(v) if e in keep]
        if not options:
            break
        e = rng.choice(options)
        suffix.append(e)
        v = g.s(e)
    return EPPath.canonical(cycle, suffix)


def sibling(p: KatsuraPair, mu: EPPath, rng: random.Random) -> EPPath:
    """Random path over the same vertex spine: every digit m is redrawn."""

    def redraw(path: Path) -> Tuple[str, ...]:
        out = []
        for e in path:
            k = kep_edge(e)
            out.append(KepEdge(k.i, k.j, rng.randrange(p.a(k.i, k.j))).id)
        return tuple(out)

    return EPPath.canonical(redraw(mu.cycle), redraw(mu.suffix))


def carry_partner(p: KatsuraPair, mu: EPPath) -> Optional[EPPath]:
    """A path with the same spine and theta1 as ``mu``, obtained by adding one to its B = 1 tail.

    Needs an infinite B = 1 tail whose cycle digits are all maximal; None otherwise.
    """
    k = tail_break(p, mu)
    if k is None or any(kep_edge(e).m != _a(p, e) - 1 for e in mu.cycle):
        return None

    def zero(e: str) -> str:
        x = kep_edge(e)
        return KepEdge(x.i, x.j, 0).id

    suffix = list(mu.suffix)
    for pos in range(-mu.head, k + 1):
        idx = mu.head + pos
        x = kep_edge(suffix[idx])
        if x.m < _a(p, suffix[idx]) - 1:
            suffix[idx] = KepEdge(x.i, x.j, x.m + 1).id
            break
        suffix[idx] = zero(suffix[idx])
    return EPPath.canonical(tuple(zero(e) for e in mu.cycle), suffix)


def maximize_tail(p: KatsuraPair, mu: EPPath) -> EPPath:
    """Same spine as ``mu`` with every cycle digit set to A - 1."""
    cycle = []
    for e in mu.cycle:
        x = kep_edge(e)
        cycle.append(KepEdge(x.i, x.j, p.a(x.i, x.j) - 1).id)
    return EPPath.canonical(cycle, mu.suffix)
