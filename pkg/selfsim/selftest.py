"""Regression replay of the worked examples; ``selfsim selftest`` exits 0 when every check passes."""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Tuple

from selfsim import catalog
from selfsim.action import Nucleus, ae_oracle, compute_nucleus, standard_generators, verify_axioms
from selfsim.data import parse_embedding, parse_outsplit, parse_pair, rho_str
from selfsim.embed import EmbedOptions, worked_figure, zeta_equal, zeta_terms
from selfsim.embed_viz import RenderConfig, render
from selfsim.graph import count_paths
from selfsim.kep import (
    KatsuraPair,
    build_graph,
    contraction_coefficient,
    is_contracting,
    k_theory,
    kep_system,
    regular_general,
)
from selfsim.limitspace import (
    EPPath,
    ae_equivalent,
    carry_partner,
    common_period,
    horizon,
    maximize_tail,
    random_eppath,
    sibling,
)
from selfsim.outsplit import conjugacy_check, outsplit_bundle, outsplit_graph, putnam_split, putnam_to_kep, source_split
from selfsim.putnam import EmbeddingPair, raise_tail, xi_equivalent, xi_system
from selfsim.putnam import carry_partner as xi_carry

logger = logging.getLogger(__name__)

Check = Callable[[], Tuple[bool, str]]
CHECKS: List[Tuple[str, Check]] = []


def check(name: str):
    def register(fn: Check) -> Check:
        CHECKS.append((name, fn))
        return fn

    return register


@dataclass
class Outcome:
    name: str
    passed: bool
    detail: str


def pair(name: str) -> KatsuraPair:
    return parse_pair(catalog.document(name))


def putnam() -> EmbeddingPair:
    return parse_embedding(catalog.document("putnam"))


EXAMPLES = {
    "example1": ("1/2", True, "YES"),
    "example2": ("1", False, "NO"),
    "example3": ("0", True, "NO"),
    "example4": ("3/2", False, "YES"),
}


@check("rho and verdicts on the four Katsura examples")
def _examples() -> Tuple[bool, str]:
    got = {}
    for name in EXAMPLES:
        p = pair(name)
        got[name] = (rho_str(contraction_coefficient(p)), is_contracting(p), regular_general(p, 8, 8).status.value)
    bad = {k: v for k, v in got.items() if v != EXAMPLES[k]}
    return not bad, f"mismatches: {bad}" if bad else "ok"


@check("embedding pair converts to A = [[2,1],[2,1]], B = [[1,0],[1,0]]")
def _putnam_to_kep() -> Tuple[bool, str]:
    conv = putnam_to_kep(putnam())
    ok = conv.pair == KatsuraPair.of([[2, 1], [2, 1]], [[1, 0], [1, 0]])
    return ok, f"A={conv.pair.A} B={conv.pair.B}"


@check("out-split figure has 3 vertices and 7 edges")
def _outsplit_fig() -> Tuple[bool, str]:
    E, os = parse_outsplit(catalog.document("outsplit_fig"))
    g = outsplit_graph(E, os)
    return (len(g.vertices), len(g.edges)) == (3, 7), f"{len(g.vertices)} vertices, {len(g.edges)} edges"


def _circle_path(n: int) -> EPPath:
    # (e_1_1)^inf e_1_2 (e_2_2)^(n-1): n sources equal to vertex 2
    return EPPath.canonical(("e_1_1_0",), ("e_1_2_0",) + ("e_2_2_0",) * (n - 1))


@check("embedding radii 1/1080, 1/540 and 1/540 - 1/(1080*6^n) with R = 6")
def _radii() -> Tuple[bool, str]:
    p = pair("embedding")
    opts = EmbedOptions(R_override=6)
    expected = {EPPath.canonical(("e_1_1_0",)): Fraction(1, 1080), EPPath.canonical(("e_2_2_0",)): Fraction(1, 540)}
    for n in range(1, 6):
        expected[_circle_path(n)] = Fraction(1, 540) - Fraction(1, 1080 * 6 ** n)
    bad = []
    for mu, radius in expected.items():
        terms = zeta_terms(p, mu, opts)
        if len(terms) != 1 or terms[0].scale != radius:
            bad.append(str(mu))
    return not bad, f"wrong radius on {bad}" if bad else "ok"


@check("three circle centres 1/6^4, i/6^4, -1/6^4 with angles 0, 1/4, 1/2")
def _centres() -> Tuple[bool, str]:
    p = pair("embedding")
    found = set()
    for m in range(3):
        terms = zeta_terms(p, EPPath.canonical(("e_2_2_0",), (f"e_2_1_{m}",)), worked_figure())
        found.add((terms[0].scale, terms[0].angle))
    expected = {(Fraction(1, 6 ** 4), Fraction(a)) for a in (0, Fraction(1, 4), Fraction(1, 2))}
    return found == expected, f"{sorted(found)}"


@check("axioms hold to depth 4 on the Katsura examples, the embedding pair and their out-splits")
def _axioms() -> Tuple[bool, str]:
    systems = []
    for name in EXAMPLES:
        sys = kep_system(pair(name))
        systems += [(name, sys), (f"{name} split", outsplit_bundle(sys, source_split(sys.graph)))]
    xi = putnam()
    os, _ = putnam_split(xi)
    systems += [("putnam", xi_system(xi)), ("putnam split", outsplit_bundle(xi_system(xi), os))]
    bad = [name for name, sys in systems if verify_axioms(sys, 4, 4)]
    return not bad, f"violations in {bad}" if bad else "ok"


def _kep_samples(p: KatsuraPair, rng: random.Random, n: int) -> Iterator[Tuple[EPPath, EPPath]]:
    g = build_graph(p)
    for _ in range(n):
        mu = random_eppath(g, rng, 3, 3)
        roll = rng.random()
        if roll < 0.4:
            mu = maximize_tail(p, mu)
            nu = carry_partner(p, mu) or sibling(p, mu, rng)
        elif roll < 0.7:
            nu = sibling(p, mu, rng)
        else:
            nu = random_eppath(g, rng, 3, 3)
        yield mu, nu


def _depth(mu: EPPath, nu: EPPath, floor: int = 10) -> int:
    return max(floor, -horizon(mu, nu) + 2 * common_period(mu, nu) + 2)


def _nucleus(sys) -> list:
    found = compute_nucleus(sys, standard_generators(sys))
    return list(found.elements) if isinstance(found, Nucleus) else standard_generators(sys)


@check("exact ae decider matches zeta_equal and the depth-10 oracle")
def _ae_oracle() -> Tuple[bool, str]:
    rng = random.Random(0)
    bad = []
    for name in ("odometer", "example1", "embedding"):
        p = pair(name)
        sys = kep_system(p)
        F = _nucleus(sys)
        for mu, nu in _kep_samples(p, rng, 200):
            decided = ae_equivalent(p, mu, nu)
            if decided != zeta_equal(p, mu, nu):
                bad.append(f"{name}: zeta_equal disagrees on {mu} / {nu}")
            if decided and not ae_oracle(sys, mu.window(10), nu.window(10), F):
                bad.append(f"{name}: oracle rejects {mu} / {nu}")
    return not bad, "; ".join(bad[:3]) or "ok"


def xi_samples(xi: EmbeddingPair, rng: random.Random, n: int) -> Iterator[Tuple[EPPath, EPPath]]:
    for _ in range(n):
        mu = random_eppath(xi.E, rng, 3, 3)
        roll = rng.random()
        if roll < 0.5:
            mu = raise_tail(xi, mu)
            nu = xi_carry(xi, mu) or mu
        elif roll < 0.6:
            nu = mu
        else:
            nu = random_eppath(xi.E, rng, 3, 3)
        yield mu, nu


@check("binary-carry relation equals the nucleus ae check on the embedding pair")
def _xi_oracle() -> Tuple[bool, str]:
    xi = putnam()
    sys = xi_system(xi)
    F = _nucleus(sys)
    bad = []
    for mu, nu in xi_samples(xi, random.Random(0), 200):
        n = _depth(mu, nu)
        if xi_equivalent(xi, mu, nu) != ae_oracle(sys, mu.window(n), nu.window(n), F):
            bad.append(f"{mu} / {nu}")
    return not bad, "; ".join(bad[:3]) or "ok"


@check("out-split conjugacy: no discrepancies at depth 6 over 200 samples")
def _conjugacy() -> Tuple[bool, str]:
    xi = putnam()
    os, _ = putnam_split(xi)
    odo = kep_system(pair("odometer"))
    reports = [
        conjugacy_check(xi_system(xi), os, 6, 200, random.Random(0)),
        conjugacy_check(odo, source_split(odo.graph), 6, 200, random.Random(0)),
    ]
    bad = [d for r in reports for d in r.discrepancies]
    return not bad, "; ".join(bad[:3]) or "ok"


@check("odometer nucleus is {-1, 0, 1}; embedding-pair nucleus within {-1, 0, 1}")
def _nuclei() -> Tuple[bool, str]:
    odo = compute_nucleus(kep_system(pair("odometer")), standard_generators(kep_system(pair("odometer"))))
    xi_sys = xi_system(putnam())
    xi_nuc = compute_nucleus(xi_sys, standard_generators(xi_sys))
    ok = (
        isinstance(odo, Nucleus)
        and odo.exponents("1") == {-1, 0, 1}
        and isinstance(xi_nuc, Nucleus)
        and xi_nuc.exponents("v") <= {-1, 0, 1}
    )
    return ok, f"odometer {getattr(odo, 'elements', odo)}"


@check("K-theory of A = (2), B = (1) is (Z, Z)")
def _ktheory() -> Tuple[bool, str]:
    kt = k_theory(pair("odometer"))
    return (str(kt.K0), str(kt.K1)) == ("Z", "Z"), f"K0={kt.K0} K1={kt.K1}"


@check("renderer: depth-6 point table has |E^6| rows and the concentric circles")
def _render() -> Tuple[bool, str]:
    p = pair("embedding")
    cfg = RenderConfig(depth=6, options=EmbedOptions(R_override=6))
    r = render(p, cfg)
    rows_ok = len(r.points) == count_paths(build_graph(p), 6)
    radii = {c.radius for c in r.circles if abs(c.center) == 0}
    wanted = {Fraction(1, 540) - Fraction(1, 1080 * 6 ** n) for n in range(1, 6)}
    return rows_ok and wanted <= radii, f"{len(r.points)} rows, {len(r.circles)} circles"


def run(only: Optional[List[str]] = None) -> List[Outcome]:
    outcomes = []
    for name, fn in CHECKS:
        if only and not any(s in name for s in only):
            continue
        try:
            passed, detail = fn()
        except Exception as err:  # a crashing check is a failed check
            logger.exception("selftest check %r raised", name)
            passed, detail = False, f"{type(err).__name__}: {err}"
        logger.info("%s: %s", "PASS" if passed else "FAIL", name)
        outcomes.append(Outcome(name, passed, detail))
    return outcomes
