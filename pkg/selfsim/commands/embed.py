from selfsim.config import DEFAULT_DEPTH, DEFAULT_PRECISION_BITS, default_seed
from selfsim.data import fraction_str, load_eppath, load_pair, terms_doc
from selfsim.embed import EmbedOptions, constants, worked_figure, zeta_terms, zeta_value
from selfsim.embed_viz import RenderConfig, render, write_outputs
from selfsim.kep import build_graph


def add_arguments(parser):
    parser.add_argument("pair", help="Katsura pair JSON, or @name")
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    parser.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS)
    parser.add_argument("--paper-R-override", type=int, dest="paper_R_override", help="use this base R instead of M(N+1)")
    parser.add_argument("--worked-figure", action="store_true", help="R = 6 and no range term on finite intervals")
    parser.add_argument("--path", help="print the exact terms of one eventually periodic path instead of rendering")
    parser.add_argument("--out-svg")
    parser.add_argument("--out-points", help="CSV with columns path_id,re,im,kind")
    parser.add_argument("--out-html", help="interactive plotly figure")
    parser.add_argument("--workers", type=int, default=1, help="processes for point generation")


def options(args) -> EmbedOptions:
    if args.worked_figure:
        return worked_figure()
    return EmbedOptions(R_override=args.paper_R_override)


def run(args) -> dict:
    p = load_pair(args.pair)
    opts = options(args)
    if args.path:
        mu = load_eppath(args.path, build_graph(p))
        doc = terms_doc(zeta_terms(p, mu, opts))
        z = zeta_value(p, mu, opts, args.precision_bits)
        doc["R"] = constants(p, opts).R
        doc["approx"] = [float(z.real), float(z.imag)]
        return doc

    cfg = RenderConfig(
        depth=args.depth, precision=args.precision_bits, options=opts, seed=default_seed(), workers=args.workers
    )
    r = render(p, cfg)
    written = write_outputs(r, cfg, args.out_svg, args.out_points, args.out_html)
    return {
        "R": constants(p, opts).R,
        "points": len(r.points),
        "sampled": r.sampled,
        "components": r.components,
        "guaranteed": r.guaranteed,
        "circles": [
            {"center": [c.center.real, c.center.imag], "radius": fraction_str(c.radius)} for c in r.circles
        ],
        "scale": r.scale,
        "written": written,
    }
