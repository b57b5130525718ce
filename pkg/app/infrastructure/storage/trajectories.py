import os

import joblib
import structlog

from app.domain.errors import ConfigError
from app.domain.models import Trajectory

logger = structlog.get_logger()

TRAJECTORY_FILE = "trajectory.joblib"


def save_trajectory(trajectory: Trajectory, run_dir: str) -> str:
    if not trajectory.frozen:
        raise ValueError("Only finished (frozen) trajectories are persisted")
    os.makedirs(run_dir, exist_ok=True)
    path = os.path.join(run_dir, TRAJECTORY_FILE)
    joblib.dump(trajectory, path, compress=3)
    logger.info("Trajectory saved", path=path, snapshots=len(trajectory.snapshots))
    return path


def load_trajectory(run_dir: str) -> Trajectory:
    path = run_dir if run_dir.endswith(".joblib") else os.path.join(run_dir, TRAJECTORY_FILE)
    if not os.path.exists(path):
        raise ConfigError(f"No trajectory at {path}; run 'simulate' first")
    loaded = joblib.load(path)
    if not isinstance(loaded, Trajectory):
        raise ConfigError(f"{path} does not hold a trajectory")
    return loaded
