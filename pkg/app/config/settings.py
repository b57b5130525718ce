import os
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    # Output root for simulate/sweep/report artefacts
    PLAP_OUT: str = os.getenv("PLAP_OUT", "runs")

    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True

    # Sweep scheduler
    SWEEP_WORKERS: int = 4
    SWEEP_MAX_RUNS: int = 10_000

    # Eigensolver defaults
    EIG_TOL: float = 1e-8
    EIG_MAX_ITER: int = 100_000
    EIG_ORACLE_SEED: int = 12345

    class Config:
        env_file = ".env"
        extra = "ignore"
        case_sensitive = True

settings = Settings()
