"""Command-line runner and its deterministic seeding."""

from ..seeding import mix as seed_mix
from .config import DEFAULTS, load_config
from .main import build_parser, main, run

__all__ = ["DEFAULTS", "build_parser", "load_config", "main", "run", "seed_mix"]
