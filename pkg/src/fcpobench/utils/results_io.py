"""
Results CSV and trace JSONL persistence.
"""
import json
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

import numpy as np
import pandas as pd

from ..core.base_models import RunRecord
from ..errors import ResultsParseError
from .matrix_io import PathLike

CSV_COLUMNS = list(RunRecord.CSV_COLUMNS)
INTEGER_COLUMNS = ("dim", "nfe")
FLOAT_COLUMNS = ("final_value", "runtime_ms")


def write_results(records: Iterable[RunRecord], path: PathLike) -> Path:
    """Write one CSV row per run with the fixed header and 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([r.to_row() for r in records], columns=CSV_COLUMNS)
    frame["seed"] = frame["seed"].astype("uint64") if len(frame) else frame["seed"]
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def read_results(path: PathLike) -> pd.DataFrame:
    """
    Load a results CSV.

    Raises:
        ResultsParseError: wrong header or a malformed value, with its line number
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as exc:
        raise ResultsParseError(f"{path}: {exc}") from None
    except pd.errors.EmptyDataError:
        raise ResultsParseError(f"{path}: file is empty", line_number=1) from None
    if list(frame.columns) != CSV_COLUMNS:
        raise ResultsParseError(
            f"{path}: header must be {','.join(CSV_COLUMNS)}", line_number=1
        )
    for column in INTEGER_COLUMNS + FLOAT_COLUMNS:
        parsed = pd.to_numeric(frame[column], errors="coerce")
        bad = parsed.isna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise ResultsParseError(
                f"{path}: bad {column} value '{frame[column].iloc[row]}'", line_number=row + 2
            )
        frame[column] = parsed
    for column in INTEGER_COLUMNS:
        frame[column] = frame[column].astype("int64")
    seeds = []
    for row, text in enumerate(frame["seed"]):
        try:
            seeds.append(int(text))
        except ValueError:
            raise ResultsParseError(f"{path}: bad seed value '{text}'", line_number=row + 2) from None
    frame["seed"] = pd.Series(seeds, dtype="uint64", index=frame.index)
    return frame


def write_traces(records: Iterable[RunRecord], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            for event in record.trace_events(record.run_id()):
                fh.write(json.dumps(event) + "\n")
    return path


def read_traces(path: PathLike) -> Dict[str, List[Tuple[int, float]]]:
    """run_id -> [(nfe, best), ...] in file order."""
    traces: Dict[str, List[Tuple[int, float]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
                traces.setdefault(event["run_id"], []).append((int(event["nfe"]), float(event["best"])))
            except (ValueError, KeyError) as exc:
                raise ResultsParseError(f"{path}: {exc}", line_number=line_number) from None
    return traces
