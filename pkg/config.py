"""
Runtime configuration, read from the environment (and a local .env file).
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Deepest level at which all 2^l cylinder masses are enumerated
EXHAUSTIVE_DEPTH = int(os.getenv('DESK_EXHAUSTIVE_DEPTH', '14'))

# Default table depth D
DEPTH_CAP = int(os.getenv('DESK_DEPTH_CAP', '14'))

# Precision refinements allowed per interval query
REFINE_BUDGET = int(os.getenv('DESK_REFINE_BUDGET', '64'))

# Default cap standing in for "never settles"
SETTLING_CAP = int(os.getenv('DESK_SETTLING_CAP', '100000'))

# Non-power-of-two weights are enclosed to relative width 2^-WEIGHT_PRECISION
WEIGHT_PRECISION = int(os.getenv('DESK_WEIGHT_PRECISION', '30'))

LOG_LEVEL = os.getenv('DESK_LOG_LEVEL', 'WARNING')

SEED = int(os.getenv('DESK_SEED', '0'))

# Operator used by `rea demo` and `rea lift` when none is given
DEFAULT_OPERATOR = os.getenv(
    'DESK_OPERATOR',
    str(Path(__file__).resolve().parent / 'data' / 'worked_operator.json'),
)
