from fractions import Fraction

import pandas as pd
import pytest

from selfsim.embed import EmbedOptions
from selfsim.embed_viz import (
    NO_GUARANTEE,
    UNCLASSIFIED,
    RenderConfig,
    completion,
    injectivity_guaranteed,
    make_figure,
    prefixes,
    render,
    spine_cycle,
    to_svg,
    write_outputs,
)
from selfsim.errors import InputError
from selfsim.graph import count_paths
from selfsim.kep import KatsuraPair, Tri, build_graph, regular_01
from selfsim.limitspace import Kind, classify_component

SIX = EmbedOptions(R_override=6)


@pytest.fixture
def rendering(embedding):
    cfg = RenderConfig(depth=4, options=SIX)
    return render(embedding, cfg), cfg


def test_config_is_checked(embedding):
    with pytest.raises(InputError):
        render(embedding, RenderConfig(depth=0))
    with pytest.raises(InputError):
        render(embedding, RenderConfig(depth=2, precision=16))
    with pytest.raises(InputError):
        render(embedding, RenderConfig(depth=2, workers=0))


def test_prefixes_enumerate_below_the_threshold(embedding):
    paths, sampled = prefixes(embedding, RenderConfig(depth=3))
    assert not sampled
    assert len(paths) == count_paths(build_graph(embedding), 3)


def test_prefixes_sample_above_the_threshold(embedding):
    paths, sampled = prefixes(embedding, RenderConfig(depth=6, threshold=50, seed=3))
    assert sampled and len(paths) == 50
    again, _ = prefixes(embedding, RenderConfig(depth=6, threshold=50, seed=3))
    assert paths == again


def test_point_table_and_circles(embedding, rendering):
    r, _ = rendering
    assert list(r.points.columns) == ["path_id", "re", "im", "kind"]
    assert len(r.points) == count_paths(build_graph(embedding), 4)
    assert set(r.points["kind"]) <= {"point", "circle"}
    radii = {c.radius for c in r.circles if c.center == 0}
    wanted = {Fraction(1, 540) - Fraction(1, 1080 * 6 ** n) for n in range(1, 4)}
    assert wanted <= radii
    assert r.guaranteed and not r.sampled
    assert r.components >= len(r.circles) > 0


def test_svg_output(rendering):
    r, cfg = rendering
    svg = to_svg(r, cfg)
    assert svg.startswith("<?xml")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == len(r.points) + len(r.circles)
    assert NO_GUARANTEE not in svg


def test_unguaranteed_pairs_are_labelled(pair):
    p = pair("example4")
    assert not injectivity_guaranteed(p)
    cfg = RenderConfig(depth=3)
    r = render(p, cfg)
    assert r.circles == []
    assert NO_GUARANTEE in to_svg(r, cfg)


def test_write_outputs(tmp_path, rendering):
    r, cfg = rendering
    out = write_outputs(r, cfg, tmp_path / "e.svg", tmp_path / "e.csv", tmp_path / "e.html")
    assert len(out) == 3
    df = pd.read_csv(tmp_path / "e.csv")
    assert len(df) == len(r.points)
    assert (tmp_path / "e.svg").read_text(encoding="utf-8").startswith("<?xml")
    assert len(make_figure(r).data) == 2


ALTERNATING = KatsuraPair.of([[0, 2], [2, 0]], [[0, 1], [1, 0]])


def test_spine_cycles():
    assert spine_cycle(ALTERNATING, 1) == ("e_1_2_0", "e_2_1_0")
    assert spine_cycle(ALTERNATING, 2) == ("e_2_1_0", "e_1_2_0")
    p = KatsuraPair.of([[2, 1], [1, 2]], [[0, 1], [0, 1]])
    assert spine_cycle(p, 1) is None
    assert spine_cycle(p, 2) == ("e_2_2_0",)
    assert completion(p, ("e_1_2_0",)) is None


def test_circles_without_self_loops():
    p = ALTERNATING
    assert regular_01(p).status == Tri.YES
    mu = completion(p, ("e_1_2_1", "e_2_1_0"))
    assert classify_component(p, mu).kind == Kind.CIRCLE

    r = render(p, RenderConfig(depth=6))
    assert r.guaranteed
    assert len(r.points) == 128
    assert set(r.points["kind"]) == {"circle"}
    assert r.components == 2
    assert {c.center for c in r.circles} == {0}
    assert {c.radius for c in r.circles} == {Fraction(1, 945), Fraction(13, 7560)}


def test_unguaranteed_points_are_unclassified(pair):
    r = render(pair("example4"), RenderConfig(depth=3))
    assert set(r.points["kind"]) == {UNCLASSIFIED}
    assert r.components == 0
    assert len(make_figure(r).data) == 3


def test_parallel_points_match_sequential(embedding):
    one = render(embedding, RenderConfig(depth=3, options=SIX))
    two = render(embedding, RenderConfig(depth=3, options=SIX, workers=2))
    pd.testing.assert_frame_equal(one.points, two.points)
    assert one.circles == two.circles
