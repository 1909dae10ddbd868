#!/usr/bin/env python3
"""
Launcher script for the Bellscope CLI.

Usage:
    python run.py confusion --device standard --eta 1 --format csv
    OR
    ./run.py params --preset cucl  (after chmod +x run.py)
"""

import sys
from pathlib import Path

# Add src directory to path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from bellscope.__main__ import main

if __name__ == "__main__":
    sys.exit(main())
