"""
Pair-correlation and ergodic-average estimators
"""

import logging
from fractions import Fraction
from functools import lru_cache

import numpy as np
from django.conf import settings
from scipy import fft

from sequences.types import SequenceWindow

from .types import Autocorrelation, CorrelationError, ObservableSpec

logger = logging.getLogger('aperiodic')

METHODS = ('auto', 'direct', 'fft')
# max_lag may not exceed N / MAX_LAG_RATIO
MAX_LAG_RATIO = 10


def _numeric(window: SequenceWindow) -> np.ndarray:
    if not window.is_numeric:
        raise CorrelationError(
            f"Window over {window.alphabet.symbols} has no spin_map; "
            f"pick an encoding before computing correlations"
        )
    return window.spins()


def _direct(x: np.ndarray, max_lag: int) -> np.ndarray:
    N = x.size
    sums = np.array([np.dot(x[:N - n], x[n:]) for n in range(max_lag + 1)])
    return sums


def _fft(x: np.ndarray, max_lag: int) -> np.ndarray:
    N = x.size
    size = fft.next_fast_len(2 * N, real=True)
    spectrum = fft.rfft(x, size, workers=settings.APERIODIC_FFT_WORKERS)
    return fft.irfft(np.abs(spectrum) ** 2, size, workers=settings.APERIODIC_FFT_WORKERS)[:max_lag + 1]


def autocorrelation(window: SequenceWindow, max_lag: int, method: str = 'auto') -> Autocorrelation:
    """
    gamma_N(n) = 1/(N-n) * sum_i sigma_i sigma_{i+n} for n = 0..max_lag
    """
    x = _numeric(window)
    N = x.size
    if method not in METHODS:
        raise CorrelationError(f"Unknown method {method!r}; valid options: {', '.join(METHODS)}")
    if max_lag < 0:
        raise CorrelationError(f"max_lag must be >= 0, got {max_lag}")
    if max_lag * MAX_LAG_RATIO > N:
        raise CorrelationError(f"max_lag={max_lag} exceeds N/{MAX_LAG_RATIO} for N={N}")

    if method == 'auto':
        method = 'fft' if max_lag > settings.APERIODIC_DIRECT_LAG_LIMIT else 'direct'

    sums = _fft(x, max_lag) if method == 'fft' else _direct(x, max_lag)
    lags = np.arange(max_lag + 1, dtype=np.int64)
    values = sums / (N - lags)

    logger.info(f"Autocorrelation N={N} max_lag={max_lag} via {method}")
    return Autocorrelation(lags, values, N, method)


@lru_cache(maxsize=None)
def tm_autocorrelation_oracle(n: int) -> Fraction:
    """
    Exact Thue-Morse correlation: g(0) = 1, g(1) = -1/3,
    g(2m) = g(m), g(2m+1) = -(g(m) + g(m+1)) / 2
    """
    n = abs(int(n))
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 3)
    m, odd = divmod(n, 2)
    if not odd:
        return tm_autocorrelation_oracle(m)
    return -(tm_autocorrelation_oracle(m) + tm_autocorrelation_oracle(m + 1)) / 2


def birkhoff_average(window: SequenceWindow, obs: ObservableSpec) -> float:
    """(1/(N-w+1)) * sum_n obs(block at n)"""
    return float(obs.evaluate(window).mean())


def shift_discrepancy(window: SequenceWindow, max_lag: int, shift: int) -> float:
    """
    Largest gap between the correlations of window[:N-shift] and window[shift:]
    """
    N = len(window)
    if not 0 < shift < N:
        raise CorrelationError(f"Shift must lie in (0, {N}), got {shift}")
    head = autocorrelation(window.slice(0, N - shift), max_lag, method='direct')
    tail = autocorrelation(window.slice(shift, N), max_lag, method='direct')
    return float(np.abs(head.values - tail.values).max())
