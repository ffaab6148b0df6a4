from fractions import Fraction
from math import prod

import pytest
from sympy import Matrix, eye

from selfsim.action import Element, Nucleus, act_on_path, compute_nucleus, standard_generators
from selfsim.errors import DomainMismatch, InvalidPair, PreconditionFailed, ZeroRow
from selfsim.graph import INF, enumerate_paths
from selfsim.kep import (
    AbelianGroup,
    KatsuraPair,
    Tri,
    analyze,
    build_graph,
    check_pair,
    contraction_coefficient,
    decompose,
    denominator_scan,
    is_contracting,
    isotropy_orders,
    k_theory,
    kep_edge,
    kep_step,
    kep_system,
    kernel_member,
    regular_01,
    regular_general,
    restriction_exponent,
    smith_diagonal,
    validate_pair,
)
from selfsim.data import rho_str

EXPECTED = [
    ("example1", "1/2", True, Tri.YES),
    ("example2", "1", False, Tri.NO),
    ("example3", "0", True, Tri.NO),
    ("example4", "3/2", False, Tri.YES),
]


@pytest.mark.parametrize("A,B,needle", [
    ([[1, -1], [0, 1]], [[0, 0], [0, 0]], "negative"),
    ([[0]], [[1]], "nonzero where"),
    ([[1, 1]], [[1, 1]], "not square"),
    ([[1]], [[1], [1]], "shape"),
])
def test_validate_pair_defects(A, B, needle):
    p = KatsuraPair.of(A, B)
    assert any(needle in d for d in validate_pair(p))
    with pytest.raises(InvalidPair):
        check_pair(p)


def test_edge_ids():
    assert kep_edge("e_2_1_3") == (2, 1, 3)
    assert kep_edge("e_2_1_3").id == "e_2_1_3"
    with pytest.raises(DomainMismatch):
        kep_edge("f_1_1_0")


def test_kep_step_carries_into_the_restriction(pair, odometer):
    p = pair("example1")
    assert kep_step(p, Element("1", 1), "e_1_1_1") == ("e_1_1_0", Element("1", 1))
    assert kep_step(p, Element("1", 1), "e_1_2_0") == ("e_1_2_0", Element("2", 1))
    assert kep_step(odometer, Element("1", -1), "e_1_1_0") == ("e_1_1_1", Element("1", -1))
    with pytest.raises(DomainMismatch):
        kep_step(p, Element("2", 1), "e_1_1_0")


def test_graph_has_one_edge_per_digit(pair):
    g = build_graph(pair("example1"))
    assert len(g.edges) == 6
    assert g.r("e_1_2_0") == "1" and g.s("e_1_2_0") == "2"


@pytest.mark.parametrize("name,rho,contracting,regular", EXPECTED)
def test_worked_examples(pair, name, rho, contracting, regular):
    p = pair(name)
    assert rho_str(contraction_coefficient(p)) == rho
    assert is_contracting(p) is contracting
    assert regular_general(p, 8, 8).status == regular


def test_example3_has_only_a_finite_part(pair):
    p = pair("example3")
    dec = decompose(p)
    assert dec.infinite_vertices == ()
    assert dec.finite_vertices == ("1", "2")
    assert contraction_coefficient(p).value is None
    assert isotropy_orders(p) == {"1": 2, "2": 1}


def test_isotropy_matches_denominator_scan(pair):
    for name in ("example3", "a2b2"):
        p = pair(name)
        orders = isotropy_orders(p)
        scan = denominator_scan(p, 5)
        assert {v: orders[v] for v in decompose(p).finite_vertices} == {v: scan[v] for v in decompose(p).finite_vertices}
    assert isotropy_orders(pair("odometer")) == {"1": INF}


def test_trivial_action_pair_is_regular(pair):
    p = pair("a2b2")
    assert isotropy_orders(p) == {"1": 1}
    assert regular_general(p, 8, 8).status == Tri.YES
    assert kernel_member(p, "1", 1, 4).status == Tri.YES


def test_kernel_member(odometer):
    verdict = kernel_member(odometer, "1", 1, 4)
    assert verdict.status == Tri.NO
    assert verdict.certificate["witness"] == ["e_1_1_0"]
    assert kernel_member(odometer, "1", 0, 4).status == Tri.YES


def test_regular_01_certificates(pair):
    assert regular_01(pair("example1")).status == Tri.YES
    no_inf = regular_01(pair("example2"))
    assert no_inf.status == Tri.NO and no_inf.certificate["clause"] == "infinite"
    no_fin = regular_01(pair("example3"))
    assert no_fin.status == Tri.NO and no_fin.certificate["clause"] == "finite"
    with pytest.raises(PreconditionFailed):
        regular_01(pair("example4"))


def test_example4_is_certified_by_a_prime(pair):
    verdict = regular_general(pair("example4"), 8, 8)
    assert verdict.certificate["infinite"]["reason"] == "valuation"
    assert verdict.certificate["infinite"]["prime"] == 2


def test_restriction_exponent_closed_form(pair):
    p = pair("example1")
    sys = kep_system(p, faithful=False)
    for mu in enumerate_paths(build_graph(p), 3):
        for m in range(-3, 4):
            _, rest = act_on_path(sys, sys.element(str(kep_edge(mu[0]).i), m), mu)
            assert restriction_exponent(p, m, mu) == Fraction(rest.exponent)


def test_smith_diagonal_and_group_names():
    assert smith_diagonal([[2, 0], [0, 3]]) == [1, 6]
    assert str(AbelianGroup((2,), 2)) == "Z/2 + Z^2"
    assert str(AbelianGroup((), 0)) == "0"


def test_odometer_k_theory(odometer):
    kt = k_theory(odometer)
    assert (str(kt.K0), str(kt.K1)) == ("Z", "Z")


def test_k_theory_rejects_zero_row():
    with pytest.raises(ZeroRow):
        k_theory(KatsuraPair.of([[1, 0], [0, 0]], [[0, 0], [0, 0]]))


def _random_pair(rng):
    A = [[rng.randint(0, 3) for _ in range(3)] for _ in range(3)]
    for i in range(3):
        A[i][i] = max(A[i][i], 1)
    B = [[rng.randint(-2, 2) if A[i][j] else 0 for j in range(3)] for i in range(3)]
    return KatsuraPair.of(A, B)


def test_k0_torsion_order_is_the_determinant(rng):
    checked = 0
    for _ in range(100):
        p = _random_pair(rng)
        det = abs(int((eye(3) - Matrix(p.A)).det()))
        if det == 0:
            continue
        assert prod(k_theory(p).K0.torsion) == det
        checked += 1
    assert checked


def _random_01_pair(rng):
    A = [[rng.randint(0, 2) for _ in range(3)] for _ in range(3)]
    for i in range(3):
        A[i][i] = max(A[i][i], 1)
    B = [[rng.randint(0, 1) if A[i][j] else 0 for j in range(3)] for i in range(3)]
    return KatsuraPair.of(A, B)


def test_regular_01_agrees_with_the_general_decision(rng):
    decided = 0
    for _ in range(200):
        p = _random_01_pair(rng)
        general = regular_general(p, 6, 6).status
        if general == Tri.UNKNOWN:
            continue
        assert regular_01(p).status == general
        decided += 1
    assert decided


@pytest.mark.parametrize("name", ["example1", "example2", "example3", "example4"])
def test_contracting_pairs_have_a_finite_nucleus(pair, name):
    p = pair(name)
    sys = kep_system(p)
    found = compute_nucleus(sys, standard_generators(sys))
    assert isinstance(found, Nucleus) or not is_contracting(p)


def test_analyze_report(pair):
    report = analyze(pair("example1"), 8, 8)
    assert report.contracting
    assert report.regular.status == Tri.YES
    assert report.regular_01.status == Tri.YES
    assert report.k_theory is not None
    assert analyze(pair("example4"), 8, 8).regular_01 is None
