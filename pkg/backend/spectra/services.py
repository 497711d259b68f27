"""
Diffraction and dynamical-spectrum estimators

Fourier-Bohr coefficients c_N(k) = (1/N) sum_n sigma_n exp(-i k n), with n
counted from the start of the window, their periodograms, multi-N Bragg
scans and twisted Birkhoff averages for eigenvalue probing.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
from django.conf import settings
from scipy import fft
from scipy.optimize import minimize_scalar

from correlation.types import ObservableSpec
from sequences.types import SequenceWindow

from .types import (
    BraggPeak, BraggReport, EigenvalueReport, EigenvalueScan, SpectralError, SpectralEstimate,
    classify_exponent,
)

logger = logging.getLogger('aperiodic')

TWO_PI = 2 * math.pi
# Grids coarser than N / COARSE_RATIO are flagged
COARSE_RATIO = 4
GRID_TOLERANCE = 1e-9
# Amplitudes below this are treated as numerical zero in log fits
AMPLITUDE_FLOOR = 1e-15
MIN_SCAN_SIZES = 3


def _spins(window: SequenceWindow) -> np.ndarray:
    if not window.is_numeric:
        raise SpectralError(
            f"Window over {window.alphabet.symbols} has no spin_map; diffraction depends on the "
            f"encoding, so choose one explicitly"
        )
    return window.spins()


def fourier_bohr(window: SequenceWindow, k: float) -> complex:
    """c_N(k) for one wavenumber"""
    x = _spins(window)
    n = np.arange(x.size, dtype=np.float64)
    return complex(np.dot(x, np.exp(-1j * k * n)) / x.size)


def fourier_bohr_many(window: SequenceWindow, ks: Sequence[float]) -> np.ndarray:
    """
    c_N(k) for many wavenumbers; wavenumbers on the 2*pi*j/N grid share one FFT
    """
    x = _spins(window)
    N = x.size
    ks = np.asarray(ks, dtype=np.float64)
    out = np.empty(ks.size, dtype=np.complex128)

    position = (ks % TWO_PI) * N / TWO_PI
    on_grid = np.abs(position - np.round(position)) < GRID_TOLERANCE
    if on_grid.any():
        spectrum = fft.fft(x, workers=settings.APERIODIC_FFT_WORKERS)
        bins = np.round(position[on_grid]).astype(np.int64) % N
        out[on_grid] = spectrum[bins] / N

    n = np.arange(N, dtype=np.float64)
    for i in np.flatnonzero(~on_grid):
        out[i] = np.dot(x, np.exp(-1j * ks[i] * n)) / N
    return out


def _mirror(half_power: np.ndarray, grid_size: int) -> np.ndarray:
    """Full-circle power from an rfft half spectrum, symmetric by construction"""
    full = np.empty(grid_size, dtype=np.float64)
    full[:grid_size // 2 + 1] = half_power
    full[grid_size // 2 + 1:] = half_power[1:grid_size - grid_size // 2][::-1]
    return full


def _grid(grid_size: int) -> np.ndarray:
    return TWO_PI * np.arange(grid_size, dtype=np.float64) / grid_size


def periodogram(window: SequenceWindow, grid_size: Optional[int] = None) -> SpectralEstimate:
    """
    |sum_n sigma_n exp(-i k n)|^2 on the grid k_j = 2*pi*j/grid_size

    Grids at least as fine as N zero-pad; coarser grids fold the window modulo
    grid_size, which evaluates the same sum exactly at the coarser points.
    """
    x = _spins(window)
    N = x.size
    if grid_size is None:
        grid_size = 1 << (N - 1).bit_length()
    if grid_size < 2:
        raise SpectralError(f"grid_size must be >= 2, got {grid_size}")

    if grid_size >= N:
        folded = x
    else:
        padded = np.zeros(-(-N // grid_size) * grid_size, dtype=np.float64)
        padded[:N] = x
        folded = padded.reshape(-1, grid_size).sum(axis=0)

    half = fft.rfft(folded, grid_size, workers=settings.APERIODIC_FFT_WORKERS)
    power = _mirror(np.abs(half) ** 2, grid_size)

    coarse = grid_size * COARSE_RATIO < N
    if coarse:
        logger.warning(f"Periodogram grid {grid_size} is coarser than N/{COARSE_RATIO} for N={N}")

    return SpectralEstimate(
        k_grid=_grid(grid_size),
        intensity=power / N,
        bragg=power / (N * N),
        N=N,
        grid_size=grid_size,
        coarse_grid=coarse,
        provenance=window.provenance,
    )


def averaged_periodogram(window: SequenceWindow, segment_length: int) -> SpectralEstimate:
    """
    Bartlett average of per-segment periodograms over consecutive disjoint segments
    """
    x = _spins(window)
    if segment_length < 2 or segment_length > x.size:
        raise SpectralError(f"segment_length must lie in [2, {x.size}], got {segment_length}")
    segments = x.size // segment_length
    blocks = x[:segments * segment_length].reshape(segments, segment_length)

    half = fft.rfft(blocks, axis=1, workers=settings.APERIODIC_FFT_WORKERS)
    power = _mirror((np.abs(half) ** 2).mean(axis=0), segment_length)

    return SpectralEstimate(
        k_grid=_grid(segment_length),
        intensity=power / segment_length,
        bragg=power / segment_length ** 2,
        N=segments * segment_length,
        grid_size=segment_length,
        segments=segments,
        provenance=window.provenance,
    )


def _local_maxima(values: np.ndarray) -> np.ndarray:
    peaks = (values >= np.roll(values, 1)) & (values >= np.roll(values, -1))
    candidates = np.flatnonzero(peaks)
    order = np.argsort(-values[candidates], kind='stable')
    return candidates[order]


def _refined_modulus(window: SequenceWindow, k0: float) -> tuple:
    """Largest |c_N| near k0, searching within one grid spacing 2*pi/N on each side"""
    N = len(window)
    at_k0 = abs(fourier_bohr(window, k0))
    width = TWO_PI / N
    result = minimize_scalar(
        lambda k: -abs(fourier_bohr(window, k)),
        bounds=(k0 - width, k0 + width),
        method='bounded',
        options={'xatol': 1e-3 * width},
    )
    refined = -float(result.fun)
    if refined > at_k0:
        return refined, float(result.x) % TWO_PI
    return at_k0, k0


def bragg_scan(
    generate: Callable[[int], SequenceWindow],
    N_list: Sequence[int],
    grid_size: Optional[int] = None,
    top_m: int = 8,
    probe_k: Optional[Sequence[float]] = None,
    refine: bool = True,
) -> BraggReport:
    """
    Fit log|c_N(k*)| against log N for candidate peaks

    Candidates are the top_m local maxima of the periodogram at the largest N,
    refined at every N, or the given probe wavenumbers taken as they are.
    Smaller N use prefixes of the largest window.
    """
    N_list = sorted(int(n) for n in N_list)
    if len(N_list) < MIN_SCAN_SIZES:
        raise SpectralError(f"A scaling fit needs at least {MIN_SCAN_SIZES} sizes, got {N_list}")
    if len(set(N_list)) != len(N_list):
        raise SpectralError(f"Sizes must be distinct, got {N_list}")

    window = generate(N_list[-1])
    if len(window) < N_list[-1]:
        raise SpectralError(f"Generator returned {len(window)} sites, expected {N_list[-1]}")

    if probe_k is not None:
        mode = 'probe'
        candidates = np.asarray(probe_k, dtype=np.float64) % TWO_PI
        refine = False
    else:
        mode = 'detect'
        estimate = periodogram(window, grid_size)
        top = _local_maxima(estimate.bragg)[:top_m]
        candidates = estimate.k_grid[top]

    log_N = np.log(np.array(N_list, dtype=np.float64))
    prefixes = [window.prefix(N) for N in N_list]

    if not refine:
        moduli = np.abs(np.array([fourier_bohr_many(p, candidates) for p in prefixes]))

    peaks = []
    for index, k0 in enumerate(candidates):
        amplitudes = []
        k_star = float(k0)
        for row, prefix in enumerate(prefixes):
            if refine:
                modulus, k_found = _refined_modulus(prefix, float(k0))
                if row == len(prefixes) - 1:
                    k_star = k_found
            else:
                modulus = float(moduli[row, index])
            amplitudes.append((len(prefix), modulus))

        logs = np.log(np.maximum([m for _, m in amplitudes], AMPLITUDE_FLOOR))
        exponent = float(np.polyfit(log_N, logs, 1)[0])
        classification = classify_exponent(exponent)
        peaks.append(BraggPeak(k_star, amplitudes[-1][1] ** 2, exponent, classification, amplitudes))

    peaks.sort(key=lambda p: -p.intensity)
    indeterminate = sum(p.classification == 'indeterminate' for p in peaks)
    if indeterminate:
        logger.warning(f"Bragg scan left {indeterminate} of {len(peaks)} peaks indeterminate")
    logger.info(f"Bragg scan ({mode}) over N={N_list}: "
                f"{sum(p.classification == 'atom' for p in peaks)} atoms among {len(peaks)} candidates")
    return BraggReport(peaks, N_list, mode)


def dynamical_eigenvalue(window: SequenceWindow, obs: ObservableSpec, theta: float) -> EigenvalueReport:
    """
    |(1/M) sum_n obs(block at n) exp(-2*pi*i*theta*n)| over the M block positions
    """
    if not 0.0 <= theta < 1.0:
        raise SpectralError(f"theta must lie in [0, 1), got {theta}")
    values = obs.evaluate(window)
    n = np.arange(values.size, dtype=np.float64)
    coefficient = np.dot(values, np.exp(-2j * math.pi * theta * n)) / values.size
    modulus = min(float(abs(coefficient)), obs.sup_norm)
    return EigenvalueReport(float(theta), modulus, obs.name, int(values.size))


def eigenvalue_scan(
    generate: Callable[[int], SequenceWindow],
    obs: Union[ObservableSpec, Callable[[SequenceWindow], ObservableSpec]],
    theta: float,
    N_list: Sequence[int],
    threshold: float = 0.1,
) -> EigenvalueScan:
    """Probe theta on prefixes of one window; obs may be built from the window"""
    N_list = sorted(int(n) for n in N_list)
    window = generate(N_list[-1])
    observable = obs if isinstance(obs, ObservableSpec) else obs(window)
    reports = [dynamical_eigenvalue(window.prefix(N), observable, theta) for N in N_list]
    scan = EigenvalueScan(reports, threshold)
    logger.info(f"Eigenvalue scan theta={theta} obs={observable.name}: certified={scan.certified}")
    return scan
