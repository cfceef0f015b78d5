"""Entrypoint for the separated dgL command-line tool."""

from __future__ import annotations

import sys

from src.cli import run


if __name__ == "__main__":
    sys.exit(run())
