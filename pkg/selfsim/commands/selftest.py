from selfsim import selftest


def add_arguments(parser):
    parser.add_argument("--only", nargs="*", help="run checks whose name contains one of these words")


def run(args) -> dict:
    outcomes = selftest.run(args.only)
    return {
        "ok": all(o.passed for o in outcomes),
        "checks": [{"name": o.name, "passed": o.passed, "detail": o.detail} for o in outcomes],
    }
