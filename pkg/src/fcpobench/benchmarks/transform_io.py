"""
Export and import of benchmark instances as plain-text matrices.

Each transform is a block of D + 3 rows of D values: the shift o, the D rows
of M, the 1-based permutation (identity for non-hybrid cases) and the bias
repeated D times. F10 stores its three component blocks one after another.
"""
from pathlib import Path
from typing import List

import numpy as np

from ..errors import ResultsParseError
from ..utils.matrix_io import MatrixHeader, PathLike, load_matrix, save_matrix
from .cases import BenchmarkCase, FUNCTION_IDS, TransformData, make_case


def _block(t: TransformData, dimension: int) -> np.ndarray:
    perm = t.perm + 1 if t.perm is not None else np.arange(1, dimension + 1)
    return np.vstack([t.o, t.M, perm, np.full(dimension, t.bias)])


def export_case(case: BenchmarkCase, path: PathLike) -> Path:
    matrix = np.vstack([_block(t, case.D) for t in case.transforms])
    return save_matrix(path, matrix, MatrixHeader(case.function_id, case.D, case.instance_seed))


def import_case(path: PathLike) -> BenchmarkCase:
    """Rebuild a case from its file; the stored numbers replace regenerated ones."""
    header, matrix = load_matrix(path)
    fid, d = header.identifier, header.size
    if fid not in FUNCTION_IDS:
        raise ResultsParseError(f"unknown function id '{fid}'", line_number=1)
    rows = d + 3
    if matrix.shape[1] != d or matrix.shape[0] % rows != 0:
        raise ResultsParseError(f"expected blocks of {rows}x{d} values, got {matrix.shape}", line_number=4)

    case = make_case(fid, d, header.seed)
    transforms: List[TransformData] = []
    for k in range(matrix.shape[0] // rows):
        block = matrix[k * rows:(k + 1) * rows]
        perm = block[d + 1].astype(int) - 1
        transforms.append(TransformData(
            o=block[0].copy(),
            M=block[1:d + 1].copy(),
            bias=float(block[d + 2, 0]),
            seed=case.transforms[k].seed if k < len(case.transforms) else header.seed,
            perm=perm if fid == "F6" else None,
        ))
    if len(transforms) != len(case.transforms):
        raise ResultsParseError(
            f"{fid} needs {len(case.transforms)} transform blocks, found {len(transforms)}", line_number=4
        )
    case.transforms = transforms
    return case
