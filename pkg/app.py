import argparse
import logging
import sys

import pandas as pd

from selfsim.config import APP_TITLE, LOG_FORMAT, log_level
from selfsim.data import dumps
from selfsim.errors import VALIDATION_ERRORS, SelfSimError
from selfsim.commands import ae as cmd_ae
from selfsim.commands import analyze as cmd_analyze
from selfsim.commands import catalog as cmd_catalog
from selfsim.commands import components as cmd_components
from selfsim.commands import embed as cmd_embed
from selfsim.commands import ktheory as cmd_ktheory
from selfsim.commands import outsplit as cmd_outsplit
from selfsim.commands import putnam2kep as cmd_putnam2kep
from selfsim.commands import regular as cmd_regular
from selfsim.commands import rho as cmd_rho
from selfsim.commands import selftest as cmd_selftest
from selfsim.commands import validate as cmd_validate

logger = logging.getLogger("selfsim")


COMMANDS = {
    "validate": (cmd_validate, "check a graph, pair, embedding pair or out-split document"),
    "analyze": (cmd_analyze, "contraction, regularity, isotropy, decomposition and K-theory of a Katsura pair"),
    "rho": (cmd_rho, "contraction coefficient of a Katsura pair"),
    "regular": (cmd_regular, "regularity verdict with certificate"),
    "ktheory": (cmd_ktheory, "K0 and K1 of the Katsura algebra"),
    "outsplit": (cmd_outsplit, "out-split a graph; with an action, check conjugacy"),
    "putnam2kep": (cmd_putnam2kep, "convert an embedding pair to a Katsura pair"),
    "ae": (cmd_ae, "decide asymptotic equivalence of two eventually periodic paths"),
    "components": (cmd_components, "classify limit-space components of paths"),
    "embed": (cmd_embed, "planar embedding: exact terms, SVG, point CSV and HTML figure"),
    "selftest": (cmd_selftest, "replay the worked examples"),
    "catalog": (cmd_catalog, "list or print the built-in fixtures"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfsim", description=APP_TITLE)
    parser.add_argument("--log-level", default=None, help="overrides SELFSIM_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (module, help_text) in COMMANDS.items():
        module.add_arguments(sub.add_parser(name, help=help_text, description=help_text))
    return parser


def emit(result) -> None:
    if isinstance(result, pd.DataFrame):
        caption = result.attrs.get("caption")
        if caption:
            print(caption)
        print(result.to_string(index=False))
    else:
        print(dumps(result))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=(args.log_level or log_level()).upper(), format=LOG_FORMAT, stream=sys.stderr)

    module, _ = COMMANDS[args.command]
    try:
        result = module.run(args)
    except VALIDATION_ERRORS as err:
        print(dumps({"error": err.code, "message": str(err), "defects": err.defects}))
        return 2
    except SelfSimError as err:
        logger.error("%s failed: %s", args.command, err)
        print(dumps({"error": err.code, "message": str(err), "defects": err.defects}))
        return 1
    except Exception:
        logger.exception("%s failed", args.command)
        return 1

    emit(result)
    if isinstance(result, dict) and result.get("ok") is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
