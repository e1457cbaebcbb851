"""
Plain-text matrix files.

Format: a three-line header (identifier, size, seed), then the matrix one
row per line with whitespace-separated values in row-major order. Values
are written with 17 significant digits so they read back exactly.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import ResultsParseError

PathLike = Union[str, Path]


@dataclass
class MatrixHeader:
    identifier: str
    size: int
    seed: int


def save_matrix(path: PathLike, matrix: np.ndarray, header: MatrixHeader) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    head = f"{header.identifier}\n{header.size}\n{header.seed}"
    np.savetxt(path, matrix, fmt="%.17g", header=head, comments="")
    return path


def load_matrix(path: PathLike) -> Tuple[MatrixHeader, np.ndarray]:
    """
    Read a matrix file.

    Returns:
        (header, 2-D array)

    Raises:
        ResultsParseError: malformed header or body
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = [fh.readline() for _ in range(3)]
    if any(not line.strip() for line in lines):
        raise ResultsParseError(f"{path}: expected a 3-line header", line_number=1)
    identifier = lines[0].strip()
    try:
        size = int(lines[1])
    except ValueError:
        raise ResultsParseError(f"{path}: size is not an integer", line_number=2) from None
    try:
        seed = int(lines[2])
    except ValueError:
        raise ResultsParseError(f"{path}: seed is not an integer", line_number=3) from None
    try:
        body = np.loadtxt(path, skiprows=3, ndmin=2)
    except ValueError as exc:
        raise ResultsParseError(f"{path}: {exc}", line_number=4) from None
    return MatrixHeader(identifier, size, seed), body
