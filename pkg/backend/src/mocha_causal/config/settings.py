"""Global settings and default constants."""

import logging
import os
import sys
from pathlib import Path
from typing import Any

from platformdirs import user_data_dir

logger = logging.getLogger(__name__)

APP_NAME = "MochaCausal"
APP_AUTHOR = "MochaCausal"


def is_frozen() -> bool:
    """Check if running as a PyInstaller bundle."""
    return getattr(sys, "frozen", False) and hasattr(sys, "_MEIPASS")


def determine_project_root() -> Path:
    """
    Determine the project root directory.

    Checks the ``MOCHA_ROOT`` environment variable first, then walks up from this
    file looking for repository indicators.

    Returns:
        Path: The determined project root directory
    """
    if "MOCHA_ROOT" in os.environ:
        path = Path(os.environ["MOCHA_ROOT"])
        if path.exists():
            logger.debug(f"Using project root from MOCHA_ROOT: {path}")
            return path
        logger.warning(
            f"MOCHA_ROOT set to '{os.environ['MOCHA_ROOT']}', but path does not exist."
        )

    # backend/src/mocha_causal/config/settings.py -> repository root
    current_path = Path(__file__).resolve().parent.parent.parent.parent.parent
    indicators = [".git", "pyproject.toml", "config/config.yaml"]

    check_path = current_path
    for i in range(4):
        if any((check_path / indicator).exists() for indicator in indicators):
            logger.debug(f"Detected project root at depth {i}: {check_path}")
            return check_path
        check_path = check_path.parent

    logger.debug(f"Project root not detected, falling back to {current_path}")
    return current_path


def get_data_dir() -> Path:
    """Get the directory used for logs and other run artifacts."""
    if is_frozen():
        path = Path(user_data_dir(APP_NAME, APP_AUTHOR))
    else:
        path = determine_project_root() / "data"
    return path


def get_config_dir() -> Path:
    """Get the directory holding the bundled YAML configuration."""
    if is_frozen():
        return Path(sys.executable).parent / "config"
    return determine_project_root() / "config"


PROJECT_ROOT = determine_project_root() if not is_frozen() else Path(".")
DATA_DIR = get_data_dir()
CONFIG_DIR = get_config_dir()

# Model hyper-parameters
EMBED_HALF_DIM = 8
ATTENTION_DIM = 8
DECAY_HIDDEN_DIM = 16
MAX_ORDER_CAP = 3
EDGE_BETA = 1.0
EDGE_THRESHOLD = 0.5
GAMMA_ACYCLIC = 0.1
GAMMA_SPARSE = 0.01
INTEGRATION_SUBSTEPS = 10
EPSILON = 1e-9
INITIAL_BASE_RATE = 0.1
LEAKY_RELU_SLOPE = 0.2

# Acyclicity series truncation
TRACE_SERIES_TOLERANCE = 1e-12

# Training
LEARNING_RATE = 1e-2
MAX_EPOCHS = 200
BATCH_SIZE = 16
EARLY_STOP_PATIENCE = 20
VALIDATION_FRACTION = 0.2
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8
DIVERGENCE_PATIENCE = 3

# Simulation
THINNING_SAFETY_FACTOR = 1.5
THINNING_STALENESS_HORIZON = 1.0
THINNING_PROBE_POINTS = 8
KAPPA_PROBE_POINTS = 256
MAX_SIMULATED_EVENTS = 10_000

# Evaluation
HORIZON_CAP_MULTIPLIER = 20.0
PREDICTION_GRID_POINTS = 400
TRUNCATION_MASS_WARNING = 0.05
EVALUATION_MAX_WORKERS = 4

# Gradient verification
GRADCHECK_STEP = 1e-4
GRADCHECK_TOLERANCE = 1e-4


def get_settings() -> dict[str, Any]:
    """
    Get all settings as a dictionary.

    Returns:
        Dict containing all settings
    """
    return {
        name: value
        for name, value in globals().items()
        if name.isupper() and not name.startswith("_")
    }
