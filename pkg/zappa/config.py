import os


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    raw = raw.strip()
    if not raw.isdigit() or int(raw) < 1:
        raise ValueError(
            f"Invalid {name} environment variable. "
            f"Must be a positive integer, got {raw!r}."
        )
    return int(raw)


# Brute-force cap on |G| for automorphism enumeration
MAX_GROUP_ORDER = _positive_int("ZAPPA_MAX_GROUP_ORDER", 512)

# Parallelism for parameter sweeps
WORKERS = _positive_int("ZAPPA_WORKERS", os.cpu_count() or 1)

# Optional Sentry DSN for error monitoring
SENTRY_DSN = os.getenv("SENTRY_DSN")
SENTRY_TRACES_SAMPLE_RATE = float(os.getenv("SENTRY_TRACES_SAMPLE_RATE", "0.0"))

# Database for stored sweep runs
DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///./zappa.db")


def get_max_group_order() -> int:
    """Current brute-force cap, re-read from the environment."""
    return _positive_int("ZAPPA_MAX_GROUP_ORDER", 512)


def get_workers() -> int:
    return _positive_int("ZAPPA_WORKERS", os.cpu_count() or 1)
