# config.py
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from core.errors import InputError
from core.fdalg import Tolerance

load_dotenv()


@dataclass
class Settings:
    # Tolerances (see core.fdalg.Tolerance)
    eps_struct: float = 1e-9
    eps_cluster: float = 1e-8

    seed: int = 0
    log_level: str = "INFO"

    # Self-test sizes
    diag_instances: int = 200
    divisibility_instances: int = 50
    isometry_pairs: int = 500
    functor_homs: int = 100

    # Exhaustive comparison: every shape with this many blocks of at most this size
    comparison_max_blocks: int = 3
    comparison_max_size: int = 3

    # Dimension theory: every model, projection and pair up to these bounds
    dimension_max_atoms: int = 4
    dimension_max_index: int = 4

    def tolerance(self) -> Tolerance:
        return Tolerance(eps_struct=self.eps_struct, eps_cluster=self.eps_cluster)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise InputError(f"{name} must be a number, got {raw!r}") from exc


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{name} must be an integer, got {raw!r}") from exc


def get_settings() -> Settings:
    return Settings(
        eps_struct=_env_float("AWSTAR_TOL_STRUCT", 1e-9),
        eps_cluster=_env_float("AWSTAR_TOL_CLUSTER", 1e-8),
        seed=_env_int("AWSTAR_SEED", 0),
        log_level=(os.getenv("AWSTAR_LOG_LEVEL") or "INFO").upper(),
    )
