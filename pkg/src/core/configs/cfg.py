import logging
import os

from dotenv import load_dotenv

load_dotenv()
log = logging.getLogger(__name__)

# Default seed of every randomised engine (overridden by --seed)
DEFAULT_SEED = int(os.getenv("BERGE_SEED", "20240607"))

# Parallel restart workers for the heuristic engine (1 = sequential, deterministic)
WORKERS = int(os.getenv("BERGE_WORKERS", "1"))

# Base name of the yaml file in configs/ holding the solver defaults
SOLVER_CONFIG_FILE = os.getenv("BERGE_SOLVER_CONFIG", "solver")

# Largest edge count the brute-force oracle accepts
ORACLE_MAX_EDGES = 30

# Largest ground set accepted by the exhaustive shadow routines
SHADOW_MAX_N = 16

# Guaranteed-success thresholds on n, keyed by k (k >= 5 uses the last entry)
GUARANTEED_N = {3: 108, 4: 54, 5: 38}

# Largest multiplicity spread accepted when lifting a multigraph to hyperedges
MAX_SPREAD = 5
