#!/usr/bin/env python3
"""
Centralized configuration for the ffdist toolkit.
Every limit below can be overridden from the environment or a .env file.
"""

import os
from dotenv import load_dotenv

load_dotenv()

# ============================================================================
# PARALLELISM
# ============================================================================

# Worker cap for verify-all suites, diameter tables and configuration counts
FFDIST_THREADS = max(1, int(os.getenv("FFDIST_THREADS", str(os.cpu_count() or 1))))

# ============================================================================
# RESOURCE GUARDS (overridable with --force)
# ============================================================================

# q^d ceiling for dense spectra and BFS
MAX_POINTS = int(os.getenv("FFDIST_MAX_POINTS", str(2 ** 20)))

# |E|^k ceiling for configuration counting
MAX_CONFIG_WORK = int(os.getenv("FFDIST_MAX_CONFIG_WORK", str(10 ** 9)))

# |E|^k ceiling for the naive configuration filter
MAX_NAIVE_CONFIG_WORK = int(os.getenv("FFDIST_MAX_NAIVE_CONFIG_WORK", str(10 ** 6)))

# q^{2d} ceiling for brute-force pair counts
MAX_PAIR_BRUTE = int(os.getenv("FFDIST_MAX_PAIR_BRUTE", str(10 ** 7)))

# q^d ceiling for the quadratic oracles (naive DFT, pairwise BFS)
MAX_NAIVE_POINTS = int(os.getenv("FFDIST_MAX_NAIVE_POINTS", "4096"))

# Largest q for which a full q x q character matrix is built
MAX_CHARACTER_MATRIX_Q = int(os.getenv("FFDIST_MAX_CHARACTER_MATRIX_Q", "4096"))

# Largest field size accepted without --force
MAX_Q = int(os.getenv("FFDIST_MAX_Q", str(10 ** 5)))

# ============================================================================
# FIELD TABLES
# ============================================================================

# Extension fields up to this size get a full q x q addition table
FIELD_TABLE_LIMIT = int(os.getenv("FFDIST_FIELD_TABLE_LIMIT", "1024"))

# ============================================================================
# EXPERIMENT DEFAULTS
# ============================================================================

DEFAULT_SEED = int(os.getenv("FFDIST_SEED", "42"))

# The C in |E| >= C q^{d(k-1)/k} q^{n/k}; a report input, never a truth
SIZE_CONSTANT = float(os.getenv("FFDIST_SIZE_CONSTANT", "4"))

# ============================================================================
# REPORTS
# ============================================================================

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12

# ============================================================================
# LOGGING CONFIGURATION
# ============================================================================

LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("LOG_FILE", "")

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'

# ============================================================================
# GUARDS
# ============================================================================

class ResourceGuardError(RuntimeError):
    """Raised when a computation would exceed a configured resource limit."""


def check_guard(name: str, value: int, limit: int, force: bool = False) -> None:
    """
    Refuse work whose size exceeds a configured limit.

    Args:
        name: Human readable description of the measured quantity
        value: Size the caller is about to allocate or iterate
        limit: Configured ceiling
        force: Skip the check (the CLI's --force)

    Raises:
        ResourceGuardError: If value > limit and force is not set
    """
    if force or value <= limit:
        return
    raise ResourceGuardError(
        f"{name} = {value} exceeds the limit {limit}; pass --force to override"
    )


# ============================================================================
# VALIDATION HELPERS
# ============================================================================

def validate_config():
    """
    Validates that every limit is usable.
    Returns (is_valid, problems)
    """
    positive = {
        "FFDIST_THREADS": FFDIST_THREADS,
        "FFDIST_MAX_POINTS": MAX_POINTS,
        "FFDIST_MAX_CONFIG_WORK": MAX_CONFIG_WORK,
        "FFDIST_MAX_NAIVE_CONFIG_WORK": MAX_NAIVE_CONFIG_WORK,
        "FFDIST_MAX_PAIR_BRUTE": MAX_PAIR_BRUTE,
        "FFDIST_MAX_NAIVE_POINTS": MAX_NAIVE_POINTS,
        "FFDIST_MAX_CHARACTER_MATRIX_Q": MAX_CHARACTER_MATRIX_Q,
        "FFDIST_MAX_Q": MAX_Q,
        "FFDIST_SIZE_CONSTANT": SIZE_CONSTANT,
    }

    problems = [f"{k} must be positive" for k, v in positive.items() if v <= 0]

    if LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        problems.append(f"LOG_LEVEL {LOG_LEVEL!r} is not a logging level")

    return len(problems) == 0, problems


# ============================================================================
# EXPORT ALL
# ============================================================================

__all__ = [
    # Parallelism
    "FFDIST_THREADS",
    # Guards
    "MAX_POINTS",
    "MAX_CONFIG_WORK",
    "MAX_NAIVE_CONFIG_WORK",
    "MAX_PAIR_BRUTE",
    "MAX_NAIVE_POINTS",
    "MAX_CHARACTER_MATRIX_Q",
    "MAX_Q",
    "ResourceGuardError",
    "check_guard",
    # Tables
    "FIELD_TABLE_LIMIT",
    # Defaults
    "DEFAULT_SEED",
    "SIZE_CONSTANT",
    # Reports
    "SCHEMA_VERSION",
    "SIGNIFICANT_DIGITS",
    # Logging
    "LOG_LEVEL",
    "LOG_FILE",
    "LOG_FORMAT",
    # Helpers
    "validate_config",
]


if __name__ == "__main__":
    print("=" * 60)
    print("FFDIST CONFIGURATION")
    print("=" * 60)

    is_valid, problems = validate_config()

    print(f"\n✅ Threads:            {FFDIST_THREADS}")
    print(f"   Max points (q^d):   {MAX_POINTS}")
    print(f"   Max config work:    {MAX_CONFIG_WORK}")
    print(f"   Max pair brute:     {MAX_PAIR_BRUTE}")
    print(f"   Max naive points:   {MAX_NAIVE_POINTS}")
    print(f"   Max q:              {MAX_Q}")
    print(f"   Default seed:       {DEFAULT_SEED}")
    print(f"   Size constant C:    {SIZE_CONSTANT}")
    print(f"   Log level:          {LOG_LEVEL}")

    if is_valid:
        print("\n✅ Configuration is valid")
    else:
        print("\n❌ Configuration problems:")
        for problem in problems:
            print(f"   - {problem}")
