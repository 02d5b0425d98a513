#!/usr/bin/env python
"""
run_holescope.py - command-line entry point for holescope

Examples:
    python run_holescope.py generate mycielski:cycle:5 | python run_holescope.py analyze --stdin
    python run_holescope.py generate trellis:t=3:k=1 --cert-out trellis.json > t.g6
    python run_holescope.py verify --in t.g6 --cert trellis.json
    python run_holescope.py corpus
"""

import logging
import os
import sys

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src import config
from src.cli import main


def setup_logging(level):
    """Log to logs/holescope.log and to stderr; stdout is reserved for reports"""
    logging.basicConfig(
        level=level,
        format=config.LOG_FORMAT,
        handlers=[
            logging.FileHandler(config.LOG_FILE),
            logging.StreamHandler(sys.stderr)
        ])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:], setup_logging=setup_logging))
