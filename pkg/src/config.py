import os
from pathlib import Path

# Root directory
ROOT_DIR = Path(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
LOGS_DIR = ROOT_DIR / "logs"
RESULTS_DIR = ROOT_DIR / "results"

# Ensure directories exist
os.makedirs(LOGS_DIR, exist_ok=True)
os.makedirs(RESULTS_DIR, exist_ok=True)

# Search budgets (node expansions per call)
DEFAULT_BUDGET = int(os.environ.get("HOLESCOPE_BUDGET", 2_000_000))
DEFAULT_CONTROL_BUDGET = 4096  # Exhaustive control check when 2^n fits
DEFAULT_CONTROL_SAMPLES = 256  # Sampled subgraphs otherwise

# Analysis defaults
DEFAULT_LMAX = 20
DEFAULT_RHO = 2
DEFAULT_NUMAX = 3
DEFAULT_SEED = 0
DEFAULT_JET_CAP = 40

# Corpus settings
CORPUS_RANDOM_COUNT = 50
CORPUS_RANDOM_MAX_N = 30
CORPUS_LMAX = 12

# Schema versions
REPORT_SCHEMA_VERSION = "1.0"
CERTIFICATE_SCHEMA_VERSION = "1.0"

# Logging configuration
LOG_FILE = LOGS_DIR / "holescope.log"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
