"""
CEC-2022-style benchmark functions and instances.
"""

from .cases import (
    BenchmarkCase,
    DIMENSIONS,
    FUNCTION_IDS,
    TransformData,
    eval_composition_f10,
    eval_f1_f2_f3,
    eval_hybrid_f6,
    make_case,
    parse_case_id,
    suite,
)
from .functions import BASIC_FUNCTIONS, eval_basic
from .transform_io import export_case, import_case

__all__ = [
    "BenchmarkCase",
    "DIMENSIONS",
    "FUNCTION_IDS",
    "TransformData",
    "eval_composition_f10",
    "eval_f1_f2_f3",
    "eval_hybrid_f6",
    "make_case",
    "parse_case_id",
    "suite",
    "BASIC_FUNCTIONS",
    "eval_basic",
    "export_case",
    "import_case",
]
