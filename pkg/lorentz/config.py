import os
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigurationError

load_dotenv()


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return value


# Worker cap for sampled checks and capacity starts
LORENTZ_THREADS = _env_int("LORENTZ_THREADS", 1, minimum=1)

DEFAULT_SEED = _env_int("LORENTZ_SEED", 0)
DEFAULT_SAMPLES = _env_int("LORENTZ_SAMPLES", 256, minimum=1)
DEFAULT_CHAINS = _env_int("LORENTZ_CHAINS", 256, minimum=1)

LOG_LEVEL = os.getenv("LORENTZ_LOG_LEVEL", "WARNING").upper()


def resolve_seed(seed: Optional[int]) -> int:
    return DEFAULT_SEED if seed is None else int(seed)


def resolve_samples(n_samples: Optional[int]) -> int:
    return DEFAULT_SAMPLES if n_samples is None else int(n_samples)


def resolve_chains(n_chains: Optional[int]) -> int:
    return DEFAULT_CHAINS if n_chains is None else int(n_chains)
