"""
Visual Forecast Nav - Module Entry Point

Run with: python -m src eval --scenario s-turn
Or: vfnav eval --scenario s-turn
"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
