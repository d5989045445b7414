# conftest.py
# Packages are namespace directories at the repo root; make them importable when pytest
# is started from anywhere.
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
