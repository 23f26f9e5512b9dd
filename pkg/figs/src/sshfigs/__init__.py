"""Figure rendering for the chain simulation CSV outputs.

Reads only the documented file formats (spectrum, localization,
trajectory, sweep CSVs with their manifest-hash comment lines) and renders
figure files; no in-process coupling to the simulation package.
"""

from .io import CsvTable, FigsInputError, read_table, require_columns
from .render import FIGURE_INPUTS, FigureJob, render

__version__ = "0.1.0"

__all__ = ["CsvTable", "FigsInputError", "read_table", "require_columns",
           "FIGURE_INPUTS", "FigureJob", "render"]
