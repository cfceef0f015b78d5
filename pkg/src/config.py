"""Application configuration constants for the separated dgL engine."""

from __future__ import annotations

import os

# Truncation used when a model constructor is called without an explicit one
DEFAULT_TRUNC: int = int(os.environ.get("SEPDGL_TRUNC", "8"))

# Logging configuration (only the command line configures handlers)
LOG_LEVEL: str = os.environ.get("SEPDGL_LOG_LEVEL", "WARNING").upper()

# Separation driver configuration
MAX_SEPARATION_STEPS: int = int(os.environ.get("SEPDGL_MAX_SEPARATION_STEPS", "500"))

# Product-of-spheres sign rules, tried in order until d^2 = 0 holds
_raw_rules = os.environ.get("SEPDGL_SIGN_RULES")
if _raw_rules:
    SIGN_RULES: tuple[str, ...] = tuple(rule.strip() for rule in _raw_rules.split(",") if rule.strip())
else:
    SIGN_RULES = ("coalgebra", "suspended")

# Random draws allowed when searching for a non-separated model
RANDOM_MODEL_ATTEMPTS: int = int(os.environ.get("SEPDGL_RANDOM_MODEL_ATTEMPTS", "200"))

# Serialization configuration
JSON_INDENT: int = 2
