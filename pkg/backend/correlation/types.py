"""
Correlation domain types
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from sequences.blocks import all_blocks, block_codes
from sequences.types import Alphabet, SequenceWindow


class CorrelationError(ValueError):
    """Invalid input to a correlation estimator."""


@dataclass
class Autocorrelation:
    """
    gamma_N(n) for n = 0..max_lag, normalised by N - n
    """
    lags: np.ndarray
    values: np.ndarray
    N: int
    method: str = 'direct'

    @property
    def max_lag(self) -> int:
        return int(self.lags[-1])

    def value(self, n: int) -> float:
        """gamma(n); the estimator is even in n"""
        n = abs(int(n))
        if n > self.max_lag:
            raise CorrelationError(f"Lag {n} was not computed (max_lag={self.max_lag})")
        return float(self.values[n])

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'lag': self.lags,
            'gamma': self.values,
            'N': np.full(self.lags.size, self.N, dtype=np.int64),
        })

    def as_dict(self) -> Dict[str, Any]:
        return {'N': self.N, 'method': self.method, 'max_lag': self.max_lag,
                'gamma': self.values.tolist()}


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    """
    Bounded function of length-`width` blocks, tabulated over every block of the alphabet
    """
    name: str
    width: int
    alphabet: Alphabet
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.float64)
        expected = self.alphabet.size ** self.width
        if table.shape != (expected,):
            raise CorrelationError(
                f"Observable {self.name!r} needs {expected} block values, got shape {table.shape}"
            )
        if not np.all(np.isfinite(table)):
            raise CorrelationError(f"Observable {self.name!r} must be bounded")
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)

    @classmethod
    def from_function(cls, name: str, width: int, alphabet: Alphabet,
                      function: Callable[[Tuple[str, ...]], float]) -> 'ObservableSpec':
        if width < 1:
            raise CorrelationError(f"Observable width must be >= 1, got {width}")
        table = [
            float(function(tuple(alphabet.symbols[i] for i in block)))
            for block in all_blocks(width, alphabet.size)
        ]
        return cls(name, width, alphabet, np.array(table))

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.table).max())

    def evaluate(self, window: SequenceWindow) -> np.ndarray:
        """obs(block at n) for n = 0..N-width"""
        if window.alphabet.symbols != self.alphabet.symbols:
            raise CorrelationError(
                f"Observable {self.name!r} is defined on {self.alphabet.symbols}, "
                f"window uses {window.alphabet.symbols}"
            )
        if self.width > len(window):
            raise CorrelationError(f"Observable width {self.width} exceeds window length {len(window)}")
        return self.table[block_codes(window.values, self.width, self.alphabet.size)]
