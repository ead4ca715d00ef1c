import os
from pathlib import Path

# Package root (src/core)
PACKAGE_ROOT = Path(__file__).resolve().parent.parent

# Project root (the directory holding pyproject.toml)
PROJECT_ROOT = PACKAGE_ROOT.parent.parent

# Paths relative to those roots
DATA_DIR = Path(os.getenv("BERGE_DATA_DIR", PROJECT_ROOT / "data"))
CONFIG_DIR = PACKAGE_ROOT / "configs"
LOG_DIR = DATA_DIR / "logs"
