"""
Sliding-block encodings shared by factor maps, observables and complexity counts
"""

from typing import Iterator, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .types import SequenceError

MAX_CODE = 2 ** 62


def codes_fit(width: int, base: int) -> bool:
    return base ** width < MAX_CODE


def block_codes(values: np.ndarray, width: int, base: int) -> np.ndarray:
    """
    Integer code of every length-width block: sum of values[n+j] * base**(width-1-j)
    """
    values = np.asarray(values)
    if width < 1:
        raise SequenceError(f"Block width must be >= 1, got {width}")
    if width > values.size:
        raise SequenceError(f"Block width {width} exceeds window length {values.size}")
    if not codes_fit(width, base):
        raise SequenceError(f"Blocks of width {width} over {base} symbols do not fit in 64-bit codes")

    count = values.size - width + 1
    codes = np.zeros(count, dtype=np.int64)
    source = values.astype(np.int64)
    for j in range(width):
        codes *= base
        codes += source[j:j + count]
    return codes


def block_rows(values: np.ndarray, width: int) -> np.ndarray:
    """All length-width blocks as rows of a read-only view"""
    return sliding_window_view(np.asarray(values), width)


def all_blocks(width: int, base: int) -> Iterator[Tuple[int, ...]]:
    """Every block over range(base), in code order"""
    for code in range(base ** width):
        digits = []
        for _ in range(width):
            code, digit = divmod(code, base)
            digits.append(digit)
        yield tuple(reversed(digits))
