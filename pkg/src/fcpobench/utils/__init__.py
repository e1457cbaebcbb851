"""
File formats and configuration helpers.
"""

from .config_loader import load_config_file, parse_bool, parse_int, parse_list
from .matrix_io import MatrixHeader, load_matrix, save_matrix
from .results_io import read_results, read_traces, write_results, write_traces

__all__ = [
    "load_config_file",
    "parse_bool",
    "parse_int",
    "parse_list",
    "MatrixHeader",
    "load_matrix",
    "save_matrix",
    "read_results",
    "read_traces",
    "write_results",
    "write_traces",
]
