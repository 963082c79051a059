#!/usr/bin/env python3
"""Entry point: ``python main.py <command> [options]`` (see ``--help``)."""

import sys

from src.catdual.harness.cli import main

if __name__ == "__main__":
    sys.exit(main())
