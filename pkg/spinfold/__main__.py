"""
Entry point for running spinfold as a module.

Usage:
    python -m spinfold verify --suite all
"""

import sys

from spinfold.cli import main

if __name__ == "__main__":
    sys.exit(main())
