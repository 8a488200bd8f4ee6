"""Static figure rendering for lattice-casimir sweep CSV files."""

from .csvdata import CsvError, SweepTable, read_sweep_csv
from .render import FIGURES, render_figure

__all__ = [
    "CsvError",
    "FIGURES",
    "SweepTable",
    "read_sweep_csv",
    "render_figure",
]

__version__ = "0.1.0"
