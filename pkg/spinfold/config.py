"""
Configuration for the spinfold verification harness

Defaults are read from the environment (optionally via a .env file next to
the package or in the project root). The CLI layers a TOML file and then
explicit flags on top of these values.

Tolerances:
- TOL_IDENTITY: max |coefficient| accepted for float-field identities
- TOL_EDGE: max |coefficient| accepted in the interior of long-range residuals
- TOL_ORACLE: max matrix entry difference accepted by the matrix oracle
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
# Try project root first, then the package directory
env_path_root = Path(__file__).parent.parent / '.env'
env_path_local = Path(__file__).parent / '.env'

if env_path_root.exists():
    load_dotenv(dotenv_path=env_path_root)
elif env_path_local.exists():
    load_dotenv(dotenv_path=env_path_local)
else:
    load_dotenv()  # Fallback to default behavior

# ============================================================================
# LOGGING
# ============================================================================

LOG_DIR = os.getenv('SPINFOLD_LOG_DIR', 'logs')
LOG_LEVEL = os.getenv('SPINFOLD_LOG_LEVEL', 'INFO')

# ============================================================================
# EXECUTION
# ============================================================================

THREADS = int(os.getenv('SPINFOLD_THREADS', '1'))
ORACLE_MAX_SITES = int(os.getenv('SPINFOLD_ORACLE_MAX_SITES', '14'))

# ============================================================================
# RESIDUAL CLASSIFICATION
# ============================================================================

EDGE_WINDOW = int(os.getenv('SPINFOLD_EDGE_WINDOW', '2'))
TOL_IDENTITY = float(os.getenv('SPINFOLD_TOL_IDENTITY', '1e-10'))
TOL_EDGE = float(os.getenv('SPINFOLD_TOL_EDGE', '1e-5'))
TOL_ORACLE = float(os.getenv('SPINFOLD_TOL_ORACLE', '1e-12'))

# Coefficients below this magnitude are dropped from printed reports only
REPORT_PRUNE = float(os.getenv('SPINFOLD_REPORT_PRUNE', '1e-14'))

# ============================================================================
# MODEL DEFAULTS
# ============================================================================

DEFAULT_CHAIN_LENGTH = 4
DEFAULT_LAMBDA = '1'
DEFAULT_MU = '3/2'
DEFAULT_KAPPA = 1.0
DEFAULT_SEED = 7

# Interior kernel sample used by `spinfold kernels`
KERNEL_Z_MAX = 6
