"""
Deterministic CSV / JSON writers for run outputs
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from backend.fingerprint import HashUtility

# Fixed formatting keeps identical results byte-identical on disk
FLOAT_FORMAT = '%.12g'


def _plain(value: Any) -> Any:
    """numpy and non-finite values -> JSON-safe Python values"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return float(FLOAT_FORMAT % value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def to_json_text(data: Any) -> str:
    return json.dumps(_plain(data), sort_keys=True, indent=2) + '\n'


def write_csv(frame: pd.DataFrame, directory: Path, name: str) -> Dict[str, Any]:
    """Write a frame and return its manifest entry"""
    path = Path(directory) / name
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return {'path': name, 'kind': 'csv', 'sha256': HashUtility.hash_file(path), 'rows': int(len(frame))}


def write_json(data: Any, directory: Path, name: str, rows: Optional[int] = None) -> Dict[str, Any]:
    path = Path(directory) / name
    path.write_text(to_json_text(data))
    return {'path': name, 'kind': 'json', 'sha256': HashUtility.hash_file(path), 'rows': rows}
