"""Planar embedding of the limit space of a Katsura pair.

Every maximal run of constant B-value on a path contributes one complex
term R^(3 I+) * Omega * exp(2 pi i theta). Terms are kept as exact
rationals; mpmath only enters when a point is finally evaluated.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

import mpmath

from selfsim.config import DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS, FIGURE_R
from selfsim.errors import Degenerate, PreconditionFailed
from selfsim.graph import Path
from selfsim.kep import KatsuraPair, check_pair, kep_edge
from selfsim.limitspace import EPPath, ae_equivalent, horizon, periodic_sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbedOptions:
    R_override: Optional[int] = None
    finite_range_term: bool = True


def worked_figure() -> EmbedOptions:
    """R = 6 and no range term on finite intervals, as in the worked circle figure."""
    return EmbedOptions(R_override=FIGURE_R, finite_range_term=False)


class Constants(NamedTuple):
    M: int
    N: int
    R: int


def constants(p: KatsuraPair, options: EmbedOptions = EmbedOptions()) -> Constants:
    check_pair(p)
    M = max(max(row) for row in p.A)
    if M <= 1:
        raise Degenerate(f"max entry of A is {M}; the embedding needs at least 2")
    R = options.R_override or M * (p.N + 1)
    return Constants(M, p.N, R)


class Interval(NamedTuple):
    lo: Optional[int]
    hi: int
    type: int
    period: Optional[int] = None

    def as_list(self) -> list:
        return [self.lo, self.hi, self.type] + ([self.period] if self.period else [])


@dataclass(frozen=True)
class EmbedTerm:
    scale: Fraction
    angle: Fraction
    interval: Interval


def _type(p: KatsuraPair, e: str) -> int:
    """Interval type: 1 where B is nonzero. B outside {0, 1} is accepted without guarantees."""
    k = kep_edge(e)
    return int(p.b(k.i, k.j) != 0)


def _weight(p: KatsuraPair, e: str, kind: int) -> Fraction:
    k = kep_edge(e)
    return Fraction(p.a(k.i, k.j) + (1 - kind))


def _runs(bs: List[int], top: int) -> List[Tuple[int, int, int]]:
    """Maximal constant runs (lo, hi, value) of bs, where bs[0] sits at position ``top`` and positions decrease."""
    runs = []
    start = 0
    for idx in range(1, len(bs) + 1):
        if idx == len(bs) or bs[idx] != bs[start]:
            runs.append((top - idx + 1, top - start, bs[start]))
            start = idx
    return runs


def interval_decomp(p: KatsuraPair, mu) -> List[Interval]:
    """Intervals from position -1 leftward; ``mu`` is an EPPath or a finite Path.

    On an EPPath with a B-constant cycle the leftmost interval has lo = None.
    With a mixed cycle, one representative per periodic family is returned
    with ``period`` set; its translates by multiples of -period are implied.
    """
    if not isinstance(mu, EPPath):
        bs = [_type(p, e) for e in reversed(mu)]
        return [Interval(lo, hi, t) for lo, hi, t in _runs(bs, -1)]

    edge = horizon(mu)
    P = mu.period
    if len({_type(p, e) for e in mu.cycle}) == 1:
        bs = [_type(p, mu.edge_at(pos)) for pos in range(-1, edge - 1, -1)]
        runs = _runs(bs, -1)
        lo, hi, t = runs[-1]
        return [Interval(a, b, c) for a, b, c in runs[:-1]] + [Interval(None, hi, t)]

    width = -edge + 3 * P + 2
    bs = [_type(p, mu.edge_at(pos)) for pos in range(-1, -width - 1, -1)]
    out = []
    for lo, hi, t in _runs(bs, -1)[:-1]:
        if hi >= edge:
            out.append(Interval(lo, hi, t))
        elif hi >= edge - P:
            out.append(Interval(lo, hi, t, P))
    return out


def _vertex(p: KatsuraPair, e: str, end: str) -> int:
    k = kep_edge(e)
    return k.j if end == "s" else k.i


def omega(p: KatsuraPair, mu, interval: Interval, R: int, range_term: bool = True) -> Fraction:
    """Omega of the segment of ``mu`` on ``interval``: base-R expansion of source labels."""
    if interval.lo is None:
        return periodic_sum(mu, interval.hi, lambda e: Fraction(_vertex(p, e, "s")), lambda e: Fraction(R))
    seg = _segment(mu, interval)
    n = len(seg)
    total = sum(Fraction(_vertex(p, e, "s"), R ** j) for j, e in enumerate(reversed(seg), start=1))
    if range_term:
        total += Fraction(_vertex(p, seg[0], "r"), R ** (n + 1))
    return total


def theta(p: KatsuraPair, mu, interval: Interval) -> Fraction:
    """Digit expansion over the interval with A (type 1) or A + 1 (type 0) denominators, mod 1."""
    kind = interval.type
    digit = lambda e: Fraction(kep_edge(e).m)
    weight = lambda e: _weight(p, e, kind)
    if interval.lo is None:
        return periodic_sum(mu, interval.hi, digit, weight) % 1
    total, scale = Fraction(0), Fraction(1)
    for e in reversed(_segment(mu, interval)):
        scale /= weight(e)
        total += digit(e) * scale
    return total % 1


def _segment(mu, interval: Interval) -> Path:
    if isinstance(mu, EPPath):
        return tuple(mu.edge_at(pos) for pos in range(interval.lo, interval.hi + 1))
    n = len(mu)
    return tuple(mu[n + interval.lo:n + interval.hi + 1])


def _term(p: KatsuraPair, mu, interval: Interval, R: int, options: EmbedOptions) -> EmbedTerm:
    range_term = options.finite_range_term
    scale = Fraction(R) ** (3 * interval.hi) * omega(p, mu, interval, R, range_term)
    if interval.period:
        scale /= 1 - Fraction(1, R ** (3 * interval.period))
    return EmbedTerm(scale, theta(p, mu, interval), interval)


def zeta_terms(p: KatsuraPair, mu, options: EmbedOptions = EmbedOptions()) -> List[EmbedTerm]:
    R = constants(p, options).R
    return [_term(p, mu, interval, R, options) for interval in interval_decomp(p, mu)]


def _mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def evaluate(terms: List[EmbedTerm], precision: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    if precision < MIN_PRECISION_BITS:
        raise ValueError(f"precision must be at least {MIN_PRECISION_BITS} bits")
    with mpmath.workprec(precision):
        total = mpmath.mpc(0)
        for t in terms:
            total += _mpf(t.scale) * mpmath.expjpi(2 * _mpf(t.angle))
        return +total


def zeta_value(
    p: KatsuraPair, mu: EPPath, options: EmbedOptions = EmbedOptions(), precision: int = DEFAULT_PRECISION_BITS
) -> mpmath.mpc:
    return evaluate(zeta_terms(p, mu, options), precision)


@dataclass(frozen=True)
class Truncation:
    value: mpmath.mpc
    terms: Tuple[EmbedTerm, ...]
    bound: Fraction


def tail_bound(p: KatsuraPair, prefix: Path, R: int) -> Fraction:
    """Upper bound for |zeta(mu) - zeta_k(prefix)| over every mu ending in ``prefix``.

    New intervals left of the prefix contribute at most
    N/(R-1) * sum_{h <= -k-1} R^(3h). The leftmost truncated interval
    [-k, h] of length n can still grow: its Omega moves by at most
    2N R^-n/(R-1) and its angle by at most the reciprocal of its weight product.
    """
    N, k = p.N, len(prefix)
    omega_max = Fraction(N, R - 1)
    far = omega_max * Fraction(1, R ** (3 * (k + 1))) / (1 - Fraction(1, R ** 3))
    leftmost = interval_decomp(p, prefix)[-1]
    n = leftmost.hi - leftmost.lo + 1
    spread = Fraction(1)
    for e in _segment(prefix, leftmost):
        spread /= _weight(p, e, leftmost.type)
    near = Fraction(R) ** (3 * leftmost.hi) * (omega_max * min(Fraction(2), 7 * spread) + 2 * N * Fraction(1, R ** n) / (R - 1))
    return near + far


def zeta_truncated(
    p: KatsuraPair, prefix: Path, options: EmbedOptions = EmbedOptions(), precision: int = DEFAULT_PRECISION_BITS
) -> Truncation:
    if not prefix:
        raise ValueError("truncation depth must be at least 1")
    R = constants(p, options).R
    terms = tuple(zeta_terms(p, prefix, options))
    return Truncation(evaluate(list(terms), precision), terms, tail_bound(p, prefix, R))


def zeta_equal(p: KatsuraPair, mu: EPPath, nu: EPPath) -> bool:
    """zeta(mu) == zeta(nu), decided structurally, never from floats."""
    if not p.is_01():
        raise PreconditionFailed("exact fibers need B with entries in {0, 1}")
    return ae_equivalent(p, mu, nu)
