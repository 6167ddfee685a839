# config.py
from __future__ import annotations
import os
import logging
from typing import Optional
from pathlib import Path
from dotenv import load_dotenv, find_dotenv

# Load .env once, globally
load_dotenv(find_dotenv() or (Path(__file__).parent / ".env"))

def _clean(val: Optional[str], default: Optional[str] = None) -> Optional[str]:
    if val is None:
        return default
    v = val.strip()
    if (v.startswith('"') and v.endswith('"')) or (v.startswith("'") and v.endswith("'")):
        v = v[1:-1].strip()
    return v or default

def _maybe_int(name: str, default: Optional[int] = None) -> Optional[int]:
    v = _clean(os.getenv(name))
    try:
        return int(v) if v is not None else default
    except ValueError:
        return default

# ----- Logging -----
LOG_LEVEL = (_clean(os.getenv("ALGEBRA_LOG_LEVEL"), "WARNING") or "WARNING").upper()

# ----- Sampled verification -----
SAMPLES = _maybe_int("ALGEBRA_SAMPLES", 1000)
SEED = _maybe_int("ALGEBRA_SEED", 0)
# coordinates of random order elements are drawn from [-COORD_RANGE, COORD_RANGE]
COORD_RANGE = _maybe_int("ALGEBRA_COORD_RANGE", 3)

# ----- Finite groups -----
MAX_GROUP_ORDER = _maybe_int("ALGEBRA_MAX_GROUP_ORDER", 2000)
ASSOC_FULL_CHECK_MAX = _maybe_int("ALGEBRA_ASSOC_FULL_CHECK_MAX", 400)
ASSOC_SAMPLE_TRIPLES = _maybe_int("ALGEBRA_ASSOC_SAMPLE_TRIPLES", 20000)
IDENTIFY_MAX_ORDER = 48

# ----- Words / relation corpora -----
CORPUS_SIZE = _maybe_int("ALGEBRA_CORPUS_SIZE", 200)
CORPUS_MAX_LENGTH = _maybe_int("ALGEBRA_CORPUS_MAX_LENGTH", 40)
WORD_LENGTH = _maybe_int("ALGEBRA_WORD_LENGTH", 20)

# ----- Output -----
JSON_INDENT = _maybe_int("ALGEBRA_JSON_INDENT", 2)

# Builtin orders checked by the battery subcommand
BATTERY_ORDERS = [
    "Z",
    "Zsqrt:1", "Zsqrt:2", "Zsqrt:3", "Zsqrt:4", "Zsqrt:5",
    "Zsqrt:6", "Zsqrt:7", "Zsqrt:8", "Zsqrt:9", "Zsqrt:10",
    "I1", "I2", "I3", "I7", "I11",
    "L", "O2", "O3", "O5",
]

BATTERY_GROUPS = [
    "C1", "C2", "C3", "C4", "C5", "C6", "Q8", "S3", "D8", "C3:C4", "SL(2,3)",
    "G16_6", "G16_13", "Q8xC3", "G32_50",
]

def validate_config() -> None:
    for name, value in (
        ("ALGEBRA_SAMPLES", SAMPLES),
        ("ALGEBRA_MAX_GROUP_ORDER", MAX_GROUP_ORDER),
        ("ALGEBRA_ASSOC_FULL_CHECK_MAX", ASSOC_FULL_CHECK_MAX),
        ("ALGEBRA_CORPUS_SIZE", CORPUS_SIZE),
        ("ALGEBRA_CORPUS_MAX_LENGTH", CORPUS_MAX_LENGTH),
        ("ALGEBRA_WORD_LENGTH", WORD_LENGTH),
        ("ALGEBRA_COORD_RANGE", COORD_RANGE),
    ):
        if value is None or value <= 0:
            raise RuntimeError(f"{name} must be a positive integer")
    if SEED is None or SEED < 0:
        raise RuntimeError("ALGEBRA_SEED must be a non-negative integer")
    if not isinstance(logging.getLevelName(LOG_LEVEL), int):
        raise RuntimeError(f"Unknown ALGEBRA_LOG_LEVEL: {LOG_LEVEL}")
