"""
Factor complexity, entropy proxies and combinatorial word properties
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .blocks import block_codes, block_rows, codes_fit
from .types import SequenceError, SequenceWindow

logger = logging.getLogger('aperiodic')

# Counts above N/4 undersample the factor language
UNDERSAMPLING_RATIO = 4
ZERO_TOLERANCE = 1e-12


def word_complexity(window: SequenceWindow, n: int) -> int:
    """Number of distinct length-n factors of the window"""
    if n < 1:
        raise SequenceError(f"Factor length must be >= 1, got {n}")
    if n * UNDERSAMPLING_RATIO > len(window):
        raise SequenceError(
            f"Factor length {n} exceeds N/{UNDERSAMPLING_RATIO} = {len(window) / UNDERSAMPLING_RATIO:g}; "
            f"counts would be undersampled"
        )
    base = window.alphabet.size
    if codes_fit(n, base):
        return int(np.unique(block_codes(window.values, n, base)).size)
    return int(np.unique(block_rows(window.values, n), axis=0).shape[0])


@dataclass
class EntropyPoint:
    n: int
    complexity: int
    rate: float
    increment: Optional[float]
    proxy: float

    def as_dict(self) -> Dict[str, object]:
        return {
            'n': self.n,
            'complexity': self.complexity,
            'rate': self.rate,
            'increment': self.increment,
            'proxy': self.proxy,
        }


@dataclass
class EntropyProfile:
    points: List[EntropyPoint] = field(default_factory=list)
    trend: str = 'flat'

    @property
    def final_proxy(self) -> float:
        return self.points[-1].proxy

    def point(self, n: int) -> EntropyPoint:
        for p in self.points:
            if p.n == n:
                return p
        raise SequenceError(f"No entropy point at n={n}")

    def as_dict(self) -> Dict[str, object]:
        return {'trend': self.trend, 'points': [p.as_dict() for p in self.points]}


def entropy_estimate(window: SequenceWindow, n_max: int, n_min: int = 1) -> EntropyProfile:
    """
    log p(n)/n for n_min..n_max, with the monotone-corrected proxy

    The proxy at n is the running minimum over n' <= n of
    min(log p(n')/n', log(p(n'+1)/p(n'))). Both sequences converge to the
    topological entropy from above, so the proxy never increases with n.
    """
    if n_min < 1 or n_max < n_min:
        raise SequenceError(f"Need 1 <= n_min <= n_max, got {n_min}..{n_max}")

    counts = {n: word_complexity(window, n) for n in range(n_min, n_max + 1)}
    next_n = n_max + 1
    if next_n * UNDERSAMPLING_RATIO <= len(window):
        counts[next_n] = word_complexity(window, next_n)

    points = []
    running = math.inf
    for n in range(n_min, n_max + 1):
        rate = math.log(counts[n]) / n
        increment = None
        if n + 1 in counts:
            increment = math.log(counts[n + 1] / counts[n])
        running = min(running, rate if increment is None else min(rate, increment))
        points.append(EntropyPoint(n, counts[n], rate, increment, running))

    rates = [p.rate for p in points]
    if points[-1].proxy <= ZERO_TOLERANCE:
        trend = 'zero'
    elif len(rates) > 1 and all(b < a for a, b in zip(rates, rates[1:])):
        trend = 'decreasing'
    else:
        trend = 'flat'

    logger.info(f"Entropy profile n={n_min}..{n_max} on N={len(window)}: trend {trend}, "
                f"proxy {points[-1].proxy:.4f}")
    return EntropyProfile(points, trend)


def contains_cube(window: SequenceWindow, max_factor_len: int) -> bool:
    """True if some factor WWW with 1 <= |W| <= max_factor_len occurs"""
    values = window.values
    for length in range(1, max_factor_len + 1):
        if 3 * length > values.size:
            break
        matches = (values[:-length] == values[length:]).astype(np.int64)
        run = 2 * length
        if matches.size < run:
            continue
        sums = np.convolve(matches, np.ones(run, dtype=np.int64), mode='valid')
        if np.any(sums == run):
            return True
    return False


def is_balanced(window: SequenceWindow, max_block_len: int, symbol_index: int = 1) -> bool:
    """Counts of one symbol in equal-length factors differ by at most 1"""
    indicator = (window.values == symbol_index).astype(np.int64)
    cumulative = np.concatenate(([0], np.cumsum(indicator)))
    for length in range(1, min(max_block_len, indicator.size) + 1):
        counts = cumulative[length:] - cumulative[:-length]
        if counts.max() - counts.min() > 1:
            return False
    return True
