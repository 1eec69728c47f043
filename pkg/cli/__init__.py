"""
Command-line interface.

Exports:
- main (argv -> exit code)
- GridSpec / AxisSpec for grid sweeps
"""

from .app import main, build_parser
from .grid import AxisSpec, GridSpec, GridTarget, evaluate_grid

__all__ = [
    "main",
    "build_parser",
    "AxisSpec",
    "GridSpec",
    "GridTarget",
    "evaluate_grid",
]
