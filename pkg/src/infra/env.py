import os

from dotenv import load_dotenv

load_dotenv()

# Tolerances
EQUALITY_TOLERANCE = float(os.getenv("EQUALITY_TOLERANCE", "1e-9"))
FEASIBILITY_TOLERANCE = float(os.getenv("FEASIBILITY_TOLERANCE", "1e-9"))
ROOT_TOLERANCE = float(os.getenv("ROOT_TOLERANCE", "1e-12"))
ROOT_SCAN_CELLS = int(os.getenv("ROOT_SCAN_CELLS", "256"))
MERGE_TOLERANCE = float(os.getenv("MERGE_TOLERANCE", "1e-12"))
SUM_TOLERANCE = float(os.getenv("SUM_TOLERANCE", "1e-12"))
DENSITY_TOLERANCE = float(os.getenv("DENSITY_TOLERANCE", "1e-9"))

# Max-entropy dual solver
MAXENT_MAX_ITERATIONS = int(os.getenv("MAXENT_MAX_ITERATIONS", "10000"))
MAXENT_GRADIENT_TOLERANCE = float(os.getenv("MAXENT_GRADIENT_TOLERANCE", "1e-9"))

# Duality bound search
DUALITY_DELTA_POINTS = int(os.getenv("DUALITY_DELTA_POINTS", "25"))

# Mutual information oracle
MI_QUADRATURE_TOLERANCE = float(os.getenv("MI_QUADRATURE_TOLERANCE", "1e-10"))

# Sweeps
SWEEP_N_JOBS = int(os.getenv("SWEEP_N_JOBS", "1"))

TIMING_LOG_FILE = os.getenv("TIMING_LOG_FILE", "timing.log")

API_HOST = os.getenv("API_HOST", "0.0.0.0")
API_PORT = int(os.getenv("API_PORT", "8080"))
