"""
Window export: CSV frame (index, symbol, spin) and JSON provenance manifest
"""

from typing import Any, Dict

import numpy as np
import pandas as pd
from django.conf import settings

from .types import SequenceWindow


def window_frame(window: SequenceWindow) -> pd.DataFrame:
    """One row per site; spin is empty for alphabets without a spin_map"""
    index = np.arange(window.offset, window.offset + len(window), dtype=np.int64)
    spins = window.spins() if window.is_numeric else np.full(len(window), np.nan)
    return pd.DataFrame({
        'index': index,
        'symbol': window.symbols(),
        'spin': spins,
    })


def provenance_manifest(window: SequenceWindow) -> Dict[str, Any]:
    provenance = window.provenance.as_dict() if window.provenance is not None else None
    return {
        'version': settings.APERIODIC_VERSION,
        'N': len(window),
        'offset': window.offset,
        'alphabet': window.alphabet.as_dict(),
        'provenance': provenance,
    }
