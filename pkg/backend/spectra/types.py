"""
Spectral estimates and reports
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from sequences.types import Provenance


class SpectralError(ValueError):
    """Invalid input to a spectral estimator."""


# Scaling exponent bands for |c_N(k)| ~ N^gamma
ATOM_BAND = -0.15
CONTINUOUS_BAND = -0.35

NON_CLAIM = (
    "Classifications are finite-N scaling evidence only. No singular-continuous spectrum is "
    "certified, and absence of absolutely continuous diffraction is not taken to rule out "
    "absolutely continuous dynamical spectrum."
)


def classify_exponent(exponent: float) -> str:
    if exponent > ATOM_BAND:
        return 'atom'
    if exponent < CONTINUOUS_BAND:
        return 'continuous'
    return 'indeterminate'


@dataclass
class SpectralEstimate:
    """
    Periodogram on the grid k_j = 2*pi*j/grid_size

    intensity is the per-site view N*|c_N(k)|^2; bragg is the atom view |c_N(k)|^2.
    """
    k_grid: np.ndarray
    intensity: np.ndarray
    bragg: np.ndarray
    N: int
    grid_size: int
    coarse_grid: bool = False
    segments: int = 1
    provenance: Optional[Provenance] = None

    def __post_init__(self):
        if np.any(np.diff(self.k_grid) <= 0):
            raise SpectralError("k_grid must be strictly increasing")
        if np.any(self.intensity < 0) or np.any(self.bragg < 0):
            raise SpectralError("Intensities must be non-negative")

    def nearest_bin(self, k: float) -> int:
        return int(round((k % (2 * math.pi)) * self.grid_size / (2 * math.pi))) % self.grid_size

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'k': self.k_grid,
            'intensity': self.intensity,
            'N': np.full(self.k_grid.size, self.N, dtype=np.int64),
        })


@dataclass
class BraggPeak:
    k: float
    intensity: float
    exponent: float
    classification: str
    amplitudes: List[Tuple[int, float]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'intensity': self.intensity,
            'exponent': self.exponent,
            'classification': self.classification,
            'amplitudes': [{'N': n, 'modulus': m} for n, m in self.amplitudes],
        }


@dataclass
class BraggReport:
    """
    Candidate peaks with scaling exponents of |c_N(k*)| across N

    A peak is an atom only when its exponent lies above ATOM_BAND.
    """
    peaks: List[BraggPeak]
    N_list: List[int]
    mode: str = 'detect'
    bands: Dict[str, float] = field(default_factory=lambda: {'atom': ATOM_BAND, 'continuous': CONTINUOUS_BAND})
    note: str = NON_CLAIM

    def atoms(self, exclude_zero: bool = False, tolerance: float = 1e-9) -> List[BraggPeak]:
        found = [p for p in self.peaks if p.classification == 'atom']
        if exclude_zero:
            found = [p for p in found
                     if min(p.k % (2 * math.pi), 2 * math.pi - p.k % (2 * math.pi)) > tolerance]
        return found

    def as_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'N_list': list(self.N_list),
            'bands': dict(self.bands),
            'note': self.note,
            'peaks': [p.as_dict() for p in self.peaks],
        }

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'k': p.k, 'intensity': p.intensity, 'exponent': p.exponent,
             'classification': p.classification}
            for p in self.peaks
        ], columns=['k', 'intensity', 'exponent', 'classification'])


@dataclass
class EigenvalueReport:
    theta: float
    modulus: float
    observable: str
    N: int

    def as_dict(self) -> Dict[str, Any]:
        return {'theta': self.theta, 'modulus': self.modulus, 'observable': self.observable, 'N': self.N}


@dataclass
class EigenvalueScan:
    """Eigenvalue probes at one theta across increasing N"""
    reports: List[EigenvalueReport]
    threshold: float

    @property
    def certified(self) -> bool:
        """Candidate eigenvalue: the modulus stays at or above threshold for every N"""
        return all(r.modulus >= self.threshold for r in self.reports)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'threshold': self.threshold,
            'certified': self.certified,
            'reports': [r.as_dict() for r in self.reports],
        }

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.as_dict() for r in self.reports],
                            columns=['theta', 'modulus', 'observable', 'N'])
