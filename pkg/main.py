"""
Main entry point for ergograph
"""

import sys

from src.cli_report.cli import main

if __name__ == "__main__":
    sys.exit(main())
