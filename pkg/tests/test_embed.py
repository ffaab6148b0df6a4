from fractions import Fraction

import mpmath
import pytest

from selfsim.embed import (
    EmbedOptions,
    Interval,
    constants,
    interval_decomp,
    omega,
    tail_bound,
    worked_figure,
    zeta_equal,
    zeta_terms,
    zeta_truncated,
    zeta_value,
)
from selfsim.errors import Degenerate, PreconditionFailed
from selfsim.graph import enumerate_paths
from selfsim.kep import KatsuraPair, build_graph
from selfsim.limitspace import EPPath, random_eppath

SIX = EmbedOptions(R_override=6)


def ep(cycle, suffix=()):
    return EPPath.canonical(cycle, suffix)


def circle_path(n):
    return ep(("e_1_1_0",), ("e_1_2_0",) + ("e_2_2_0",) * (n - 1))


def test_constants(embedding):
    assert constants(embedding) == (3, 2, 9)
    assert constants(embedding, SIX).R == 6
    with pytest.raises(Degenerate):
        constants(KatsuraPair.of([[1]], [[1]]))


def test_interval_decomposition(embedding):
    mu = ep(("e_2_2_0",), ("e_2_1_1",))
    assert interval_decomp(embedding, mu) == [Interval(-1, -1, 0), Interval(None, -2, 1)]
    assert interval_decomp(embedding, ("e_1_2_0", "e_2_1_0")) == [Interval(-1, -1, 0), Interval(-2, -2, 1)]


def test_mixed_cycle_gives_periodic_families(embedding):
    intervals = interval_decomp(embedding, ep(("e_1_2_0", "e_2_1_0")))
    assert intervals == [Interval(-1, -1, 0), Interval(-2, -2, 1, 2), Interval(-3, -3, 0, 2)]


def test_omega_of_the_fixed_tails(embedding):
    tail = Interval(None, -1, 1)
    assert omega(embedding, ep(("e_1_1_0",)), tail, 6) == Fraction(1, 5)
    assert omega(embedding, ep(("e_2_2_0",)), tail, 6) == Fraction(2, 5)


@pytest.mark.parametrize("mu,radius", [
    (ep(("e_1_1_0",)), Fraction(1, 1080)),
    (ep(("e_2_2_0",)), Fraction(1, 540)),
] + [(circle_path(n), Fraction(1, 540) - Fraction(1, 1080 * 6 ** n)) for n in range(1, 6)])
def test_circle_radii(embedding, mu, radius):
    terms = zeta_terms(embedding, mu, SIX)
    assert [t.scale for t in terms] == [radius]


def test_small_circle_centres(embedding):
    found = set()
    for m in range(3):
        terms = zeta_terms(embedding, ep(("e_2_2_0",), (f"e_2_1_{m}",)), worked_figure())
        found.add((terms[0].scale, terms[0].angle))
    assert found == {(Fraction(1, 6 ** 4), a) for a in (Fraction(0), Fraction(1, 4), Fraction(1, 2))}


def test_default_options_keep_the_range_term(embedding):
    terms = zeta_terms(embedding, ep(("e_2_2_0",), ("e_2_1_0",)), SIX)
    assert terms[0].scale == Fraction(1, 6 ** 3) * (Fraction(1, 6) + Fraction(2, 36))


def test_zeta_value_matches_exact_terms(embedding):
    z = zeta_value(embedding, ep(("e_1_1_0",)), SIX)
    assert mpmath.almosteq(z, mpmath.mpf(1) / 1080)


def test_truncation_stays_within_its_bound(embedding, rng):
    g = build_graph(embedding)
    R = constants(embedding).R
    for _ in range(20):
        mu = random_eppath(g, rng)
        exact = zeta_value(embedding, mu)
        for k in (2, 4, 6):
            approx = zeta_truncated(embedding, mu.window(k))
            with mpmath.workprec(256):
                bound = mpmath.mpf(approx.bound.numerator) / approx.bound.denominator
                assert abs(exact - approx.value) <= bound
            assert approx.bound == tail_bound(embedding, mu.window(k), R)


def test_prefix_points_are_distinct(embedding):
    paths = enumerate_paths(build_graph(embedding), 3)
    values = {tuple((t.scale, t.angle) for t in zeta_terms(embedding, mu)) for mu in paths}
    assert len(values) == len(paths)


def test_zeta_equal_follows_asymptotic_equivalence(odometer, pair):
    assert zeta_equal(odometer, ep(("e_1_1_1",)), ep(("e_1_1_0",)))
    assert not zeta_equal(odometer, ep(("e_1_1_1",), ("e_1_1_0",)), ep(("e_1_1_0",), ("e_1_1_0",)))
    with pytest.raises(PreconditionFailed):
        zeta_equal(pair("example4"), ep(("e_1_1_0",)), ep(("e_1_1_0",)))
