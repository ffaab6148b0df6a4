"""Built-in fixtures, addressable on the command line as ``@name``."""
import copy
from typing import Any, Dict, List

import pandas as pd

from selfsim.errors import InputError

PAIRS: Dict[str, Dict[str, Any]] = {
    "example1": {"A": [[2, 1], [1, 2]], "B": [[1, 1], [0, 1]]},
    "example2": {"A": [[2, 1], [1, 2]], "B": [[1, 1], [1, 1]]},
    "example3": {"A": [[1, 2], [2, 1]], "B": [[1, 1], [0, 1]]},
    "example4": {"A": [[2]], "B": [[3]]},
    "odometer": {"A": [[2]], "B": [[1]]},
    "a2b2": {"A": [[2]], "B": [[2]]},
    "embedding": {"A": [[2, 2], [3, 2]], "B": [[1, 1], [0, 1]]},
}

DESCRIPTIONS = {
    "example1": "contracting and regular",
    "example2": "neither contracting nor regular",
    "example3": "contracting but not regular",
    "example4": "not contracting but regular",
    "odometer": "the 2-odometer",
    "a2b2": "A = B = (2): the action is trivial",
    "embedding": "planar embedding with concentric circles",
    "putnam": "embedding pair e -> e0, e1 inside a three-loop graph",
    "outsplit_fig": "two-vertex graph split into three vertices",
}

PUTNAM = {
    "H": {"vertices": ["v"], "edges": [{"id": "e", "range": "v", "source": "v"}]},
    "E": {
        "vertices": ["v"],
        "edges": [
            {"id": "e0", "range": "v", "source": "v"},
            {"id": "e1", "range": "v", "source": "v"},
            {"id": "f", "range": "v", "source": "v"},
        ],
    },
    "xi0": {"vertices": {"v": "v"}, "edges": {"e": "e0"}},
    "xi1": {"vertices": {"v": "v"}, "edges": {"e": "e1"}},
}

OUTSPLIT_FIG = {
    "graph": {
        "vertices": ["x", "y"],
        "edges": [
            {"id": "1", "range": "x", "source": "x"},
            {"id": "2", "range": "y", "source": "x"},
            {"id": "3", "range": "x", "source": "y"},
            {"id": "4", "range": "x", "source": "y"},
        ],
    },
    "split": {
        "targets": ["v1", "v2", "v3"],
        "pi": {"1": "v1", "2": "v2", "3": "v3", "4": "v3"},
        "beta": {"v1": "x", "v2": "x", "v3": "y"},
    },
}


def _all() -> Dict[str, Dict[str, Any]]:
    docs = dict(PAIRS)
    docs["putnam"] = PUTNAM
    docs["outsplit_fig"] = OUTSPLIT_FIG
    return docs


def names() -> List[str]:
    return list(_all())


def document(name: str) -> Dict[str, Any]:
    docs = _all()
    if name not in docs:
        raise InputError(f"unknown fixture {name!r}", [f"known: {', '.join(docs)}"])
    return copy.deepcopy(docs[name])


def table() -> pd.DataFrame:
    rows = []
    for name, doc in _all().items():
        kind = "pair" if "A" in doc else "embedding" if "H" in doc else "outsplit"
        rows.append({"name": name, "kind": kind, "description": DESCRIPTIONS[name]})
    return pd.DataFrame(rows, columns=["name", "kind", "description"])
