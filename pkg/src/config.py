# src/config.py
from fractions import Fraction
from pathlib import Path
import logging
import os
import shutil

logger = logging.getLogger(__name__)

# ---------------------------------------------------------
# Project paths
# ---------------------------------------------------------

PROJECT_ROOT = Path(__file__).resolve().parents[1]

DATA_DIR = Path(os.environ.get("ORDERTYPE_DATA_DIR", PROJECT_ROOT / "data"))
DATA_INPUTS = DATA_DIR / "inputs"
DATA_FINAL = DATA_DIR / "final"

ACCEPTANCE_SUMMARY_FILE = "acceptance_summary.csv"

# ---------------------------------------------------------
# Output folders are made by whoever writes into them
# ---------------------------------------------------------

def ensure_directory(path: Path) -> Path:
    """
    Called by every saver right before it writes an artifact (records,
    embeddings, SVGs, the acceptance CSV). A stray file sitting where the
    artifact folder belongs is kept as <name>_backup.
    """
    path = Path(path)
    if path.is_dir():
        return path
    if path.exists():
        moved = shutil.move(str(path), str(path.with_name(f"{path.name}_backup")))
        logger.warning("ensure_directory: %s was a file, kept it as %s", path, moved)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------
# File formats
# ---------------------------------------------------------

FORMAT_VERSION = 1

# ---------------------------------------------------------
# Exact geometry
# ---------------------------------------------------------

PERTURB_EPSILON = Fraction(1, 1024)
PERTURB_MAX_HALVINGS = 64

# ---------------------------------------------------------
# Realizability search defaults
# ---------------------------------------------------------

DEFAULT_SEED = 0
DEFAULT_RESTARTS = 20
DEFAULT_ITERATIONS = 50_000
DEFAULT_TEMPERATURE = 1.0
DEFAULT_COOLING = 0.995
DEFAULT_MARGIN = Fraction(1)
DEFAULT_GRID = 8
GRID_UNIVERSE_LIMIT = 6
MAX_SNAP_BITS = 52

# Random walk generator: coordinates are drawn from [0, SAMPLE_GRID)^2
SAMPLE_GRID = 1000
SAMPLE_REJECTION_BUDGET = 1000
