import os

APP_TITLE = "selfsim: self-similar groupoid actions on finite graphs"

DEFAULT_DEPTH = 6
DEFAULT_SAMPLES = 200
DEFAULT_KMAX = 8
DEFAULT_DMAX = 8
DEFAULT_PRECISION_BITS = 128
MIN_PRECISION_BITS = 64

# Above this many depth-k prefixes the renderer samples instead of enumerating.
SAMPLE_THRESHOLD = 20000
CANVAS_PX = 800

# compute_nucleus gives up after this many times the generator count of new elements.
NUCLEUS_GROWTH = 10

# Base R used by the worked embedding figure (M=2, N=2).
FIGURE_R = 6

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def default_seed() -> int:
    raw = os.environ.get("SELFSIM_SEED", "").strip()
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SELFSIM_SEED must be an integer, got {raw!r}")


def log_level() -> str:
    return os.environ.get("SELFSIM_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"
