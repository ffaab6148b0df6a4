import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import mpmath
import networkx as nx
import pandas as pd
import plotly.graph_objects as go

from selfsim.config import CANVAS_PX, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS, SAMPLE_THRESHOLD
from selfsim.embed import EmbedOptions, constants, evaluate, zeta_terms, zeta_truncated
from selfsim.errors import InputError
from selfsim.graph import Path, count_paths, enumerate_paths, random_path
from selfsim.kep import KatsuraPair, KepEdge, Tri, build_graph, kep_edge, regular_01
from selfsim.limitspace import EPPath, Kind, classify_component, component_equivalent

logger = logging.getLogger(__name__)

NO_GUARANTEE = "no injectivity guarantee"
UNCLASSIFIED = "unclassified"


@dataclass
class RenderConfig:
    depth: int
    canvas_px: int = CANVAS_PX
    precision: int = DEFAULT_PRECISION_BITS
    stroke: str = "rgb(26,28,40)"
    point_color: str = "rgba(35,120,190,0.8)"
    point_radius: float = 1.2
    options: EmbedOptions = field(default_factory=EmbedOptions)
    threshold: int = SAMPLE_THRESHOLD
    seed: int = 0
    workers: int = 1

    def check(self) -> None:
        if self.workers < 1:
            raise InputError("workers must be at least 1")
        if self.depth < 1:
            raise InputError("depth must be at least 1")
        if self.precision < MIN_PRECISION_BITS:
            raise InputError(f"precision must be at least {MIN_PRECISION_BITS} bits")


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: Fraction


@dataclass
class Rendering:
    points: pd.DataFrame
    circles: List[Circle]
    scale: float
    guaranteed: bool
    sampled: bool
    components: int = 0


class SVG:
    def __init__(self):
        self.svg = ""

    def header(self, width, height, extra=""):
        self.svg += f"""<?xml version="1.0" standalone="no"?>
<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" xmlns="http://www.w3.org/2000/svg" {extra}>
"""

    def group_start(self, attr):
        g_attr = [f'{key}="{value}"' for key, value in attr.items() if key in ["id", "class"]]
        self.svg += f'<g {" ".join(g_attr)}>\n'
        if "title" in attr:
            self.svg += f'<title>{attr["title"]}</title>\n'

    def group_end(self):
        self.svg += "</g>\n"

    def circle(self, cx, cy, r, stroke, fill="none", extra=""):
        self.svg += f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}" stroke="{stroke}" fill="{fill}" {extra}/>\n'

    def string_ttf(self, x, y, string, extra=""):
        self.svg += f'<text x="{x:.2f}" y="{y:.2f}" {extra}>{string}</text>\n'

    def get_svg(self):
        return f"{self.svg}</svg>\n"


def injectivity_guaranteed(p: KatsuraPair) -> bool:
    return p.is_01() and regular_01(p).status == Tri.YES


def prefixes(p: KatsuraPair, cfg: RenderConfig) -> Tuple[List[Path], bool]:
    """All depth-k paths, or a seeded sample of ``cfg.threshold`` of them."""
    g = build_graph(p)
    if count_paths(g, cfg.depth) <= cfg.threshold:
        return enumerate_paths(g, cfg.depth), False
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.threshold:
        mu = random_path(g, rng, cfg.depth)
        if mu is not None:
            out.append(mu)
    logger.debug("sampled %d prefixes of depth %d", len(out), cfg.depth)
    return out, True


def _point_row(job: Tuple[KatsuraPair, Path, EmbedOptions, int]) -> Tuple[float, float]:
    p, mu, options, precision = job
    z = zeta_truncated(p, mu, options, precision).value
    return float(z.real), float(z.imag)


def point_table(p: KatsuraPair, paths: List[Path], kinds: List[str], cfg: RenderConfig) -> pd.DataFrame:
    """One row per prefix; ``cfg.workers`` > 1 spreads the zeta_k evaluations over processes."""
    jobs = [(p, mu, cfg.options, cfg.precision) for mu in paths]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            values = list(pool.map(_point_row, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        values = [_point_row(job) for job in jobs]
    rows = [
        {"path_id": ".".join(mu), "re": re, "im": im, "kind": kind}
        for mu, (re, im), kind in zip(paths, values, kinds)
    ]
    return pd.DataFrame(rows, columns=["path_id", "re", "im", "kind"])


@lru_cache(maxsize=None)
def spine_cycle(p: KatsuraPair, i: int) -> Optional[Path]:
    """Shortest cycle of B = 1 edges leaving vertex i, preferring one with an A >= 2 edge.

    Edges carry digit 0; None when no such cycle passes through i.
    """
    arrows = nx.DiGraph()
    arrows.add_nodes_from(range(1, p.N + 1))
    arrows.add_edges_from(
        (r, s) for r in range(1, p.N + 1) for s in range(1, p.N + 1) if p.a(r, s) >= 1 and p.b(r, s) == 1
    )
    best = None
    for j in arrows.successors(i):
        try:
            walk = [i] + nx.shortest_path(arrows, j, i)
        except nx.NetworkXNoPath:
            continue
        hops = list(zip(walk, walk[1:]))
        rank = (all(p.a(r, s) == 1 for r, s in hops), len(hops))
        if best is None or rank < best[0]:
            best = (rank, tuple(KepEdge(r, s, 0).id for r, s in hops))
    return None if best is None else best[1]


def completion(p: KatsuraPair, prefix: Path) -> Optional[EPPath]:
    """(spine cycle)^inf prefix, or None when the leftmost vertex lies on no B = 1 cycle."""
    cycle = spine_cycle(p, kep_edge(prefix[0]).i)
    if cycle is None:
        return None
    return EPPath.canonical(cycle, prefix)


def components(p: KatsuraPair, paths: List[Path], cfg: RenderConfig) -> Tuple[List[str], List[Circle], int]:
    """Component kind of each prefix's completion, one circle per CIRCLE class, and the class count.

    Completions are bucketed by their exact circle geometry and split into
    classes with component_equivalent inside each bucket.
    """
    if not injectivity_guaranteed(p):
        return [UNCLASSIFIED] * len(paths), [], 0
    kinds: List[str] = []
    found: List[Circle] = []
    buckets: Dict[Tuple, List[EPPath]] = {}
    classes = 0
    for prefix in paths:
        mu = completion(p, prefix)
        if mu is None:
            kinds.append(Kind.POINT.value.lower())
            classes += 1
            continue
        kind = classify_component(p, mu).kind
        kinds.append(kind.value.lower())
        terms = zeta_terms(p, mu, cfg.options)
        tail, rest = terms[-1], terms[:-1]
        key = (kind, tail.scale, tuple((t.scale, t.angle, t.interval) for t in rest))
        reps = buckets.setdefault(key, [])
        if any(component_equivalent(p, mu, rep) for rep in reps):
            continue
        reps.append(mu)
        classes += 1
        if kind == Kind.CIRCLE:
            center = evaluate(rest, cfg.precision) if rest else mpmath.mpc(0)
            found.append(Circle(complex(center), tail.scale))
    return kinds, found, classes


def render(p: KatsuraPair, cfg: RenderConfig) -> Rendering:
    cfg.check()
    R = constants(p, cfg.options).R
    guaranteed = injectivity_guaranteed(p)
    paths, sampled = prefixes(p, cfg)
    kinds, found, classes = components(p, paths, cfg)
    points = point_table(p, paths, kinds, cfg)
    # every zeta value lies within N/(R-1) * R^-3 / (1 - R^-3) of the origin
    extent = p.N / (R - 1) / (R ** 3 - 1) * 1.1
    scale = cfg.canvas_px / (2 * extent)
    logger.info(
        "rendered %d points in %d components with %d circles (sampled=%s)", len(points), classes, len(found), sampled
    )
    return Rendering(points, found, scale, guaranteed, sampled, classes)


def to_svg(r: Rendering, cfg: RenderConfig) -> str:
    half = cfg.canvas_px / 2
    svg = SVG()
    svg.header(cfg.canvas_px, cfg.canvas_px, f'data-scale="{r.scale:.6f}"')
    if not r.guaranteed:
        svg.string_ttf(8, 16, NO_GUARANTEE, 'font-size="12" class="warning"')
    svg.group_start({"id": "circles", "title": f"{len(r.circles)} limit circles"})
    for c in r.circles:
        svg.circle(half + c.center.real * r.scale, half - c.center.imag * r.scale, float(c.radius) * r.scale, cfg.stroke, extra='stroke-width="0.6"')
    svg.group_end()
    svg.group_start({"id": "points"})
    for _, row in r.points.iterrows():
        svg.circle(half + row["re"] * r.scale, half - row["im"] * r.scale, cfg.point_radius, "none", cfg.point_color)
    svg.group_end()
    return svg.get_svg()


def make_figure(r: Rendering) -> go.Figure:
    fig = go.Figure()
    colors = (
        ("point", "rgba(170,55,45,0.85)"),
        ("circle", "rgba(35,120,190,0.85)"),
        (UNCLASSIFIED, "rgba(90,90,90,0.85)"),
    )
    for kind, color in colors:
        df = r.points[r.points["kind"] == kind]
        if kind == UNCLASSIFIED and df.empty:
            continue
        fig.add_trace(
            go.Scatter(
                x=df["re"],
                y=df["im"],
                mode="markers",
                marker=dict(size=3, color=color),
                text=df["path_id"],
                hoverinfo="text",
                name=kind,
            )
        )
    for c in r.circles:
        fig.add_shape(
            type="circle",
            x0=c.center.real - float(c.radius),
            x1=c.center.real + float(c.radius),
            y0=c.center.imag - float(c.radius),
            y1=c.center.imag + float(c.radius),
            line=dict(width=1, color="rgba(26,28,40,0.6)"),
        )
    fig.update_layout(
        title=None if r.guaranteed else NO_GUARANTEE,
        xaxis=dict(visible=False),
        yaxis=dict(visible=False, scaleanchor="x", scaleratio=1),
        margin=dict(l=10, r=10, t=30, b=10),
        plot_bgcolor="rgba(0,0,0,0)",
    )
    return fig


def write_outputs(r: Rendering, cfg: RenderConfig, out_svg=None, out_points=None, out_html=None) -> List[str]:
    written = []
    if out_svg:
        with open(out_svg, "w", encoding="utf-8") as f:
            f.write(to_svg(r, cfg))
        written.append(str(out_svg))
    if out_points:
        r.points.to_csv(out_points, index=False)
        written.append(str(out_points))
    if out_html:
        make_figure(r).write_html(str(out_html), include_plotlyjs="cdn")
        written.append(str(out_html))
    return written
