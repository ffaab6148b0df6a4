from selfsim import catalog


def add_arguments(parser):
    parser.add_argument("name", nargs="?", help="print this fixture's document")
    parser.add_argument("--table", action="store_true", help="print the listing as a table")


def run(args):
    if args.name:
        return catalog.document(args.name)
    df = catalog.table()
    if args.table:
        return df
    return {"fixtures": df.to_dict(orient="records")}
