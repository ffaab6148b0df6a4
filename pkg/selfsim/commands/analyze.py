import pandas as pd

from selfsim.config import DEFAULT_DMAX, DEFAULT_KMAX
from selfsim.data import length_str, load_pair, report_doc, rho_str
from selfsim.kep import analyze


def add_arguments(parser):
    parser.add_argument("pair", help="Katsura pair JSON, or @name")
    parser.add_argument("--kmax", type=int, default=DEFAULT_KMAX, help="exponent bound for the fixed-path search")
    parser.add_argument("--dmax", type=int, default=DEFAULT_DMAX, help="walk length bound for regularity certificates")
    parser.add_argument("--table", action="store_true", help="print a per-vertex summary table instead of JSON")


def summary(report) -> pd.DataFrame:
    dec = report.decomposition
    rows = []
    for v, order in report.orders.items():
        rows.append(
            {
                "vertex": v,
                "part": "infinite" if v in dec.infinite_vertices else "finite",
                "isotropy": length_str(order),
            }
        )
    df = pd.DataFrame(rows, columns=["vertex", "part", "isotropy"])
    df.attrs["caption"] = f"rho={rho_str(report.rho)} contracting={report.contracting} regular={report.regular.status.value}"
    return df


def run(args):
    report = analyze(load_pair(args.pair), args.kmax, args.dmax)
    if args.table:
        return summary(report)
    return report_doc(report)
