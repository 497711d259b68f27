"""
Overlap distribution types
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import stats


class OverlapError(ValueError):
    """Invalid input to an overlap computation."""


@dataclass
class OverlapRecord:
    q: float
    seed1: int
    seed2: int


@dataclass
class Atom:
    location: float
    weight: float

    def as_dict(self) -> Dict[str, float]:
        return {'location': self.location, 'weight': self.weight}


@dataclass
class EmpiricalOverlapDistribution:
    """
    Sorted overlap samples of M independent replica pairs at window length N
    """
    samples: np.ndarray
    N: int
    records: List[OverlapRecord] = field(default_factory=list)
    sampler: str = ''

    def __post_init__(self):
        samples = np.sort(np.asarray(self.samples, dtype=np.float64))
        if samples.size == 0:
            raise OverlapError("An overlap distribution needs at least one sample")
        if samples[0] < -1.0 - 1e-12 or samples[-1] > 1.0 + 1e-12:
            raise OverlapError("Overlap samples must lie in [-1, 1]")
        samples.setflags(write=False)
        self.samples = samples

    @property
    def M(self) -> int:
        return int(self.samples.size)

    def ecdf(self, q) -> np.ndarray:
        """Fraction of samples <= q"""
        return np.searchsorted(self.samples, q, side='right') / self.M

    @property
    def mean(self) -> float:
        return float(self.samples.mean())

    @property
    def std(self) -> float:
        return float(self.samples.std(ddof=1)) if self.M > 1 else 0.0

    @property
    def ea_parameter(self) -> float:
        """Edwards-Anderson parameter <q^2>"""
        return float(np.mean(self.samples ** 2))

    def ks_distance(self, other: 'EmpiricalOverlapDistribution') -> float:
        """Two-sample Kolmogorov-Smirnov statistic between the ECDFs"""
        return float(stats.ks_2samp(self.samples, other.samples).statistic)

    def summary(self) -> Dict[str, Any]:
        return {
            'sampler': self.sampler,
            'M': self.M,
            'N': self.N,
            'mean': self.mean,
            'std': self.std,
            'ea_parameter': self.ea_parameter,
        }

    def as_frame(self) -> pd.DataFrame:
        """One row per pair in sampling order"""
        return pd.DataFrame(
            [(i, r.q, r.seed1, r.seed2) for i, r in enumerate(self.records)],
            columns=['sample', 'q', 'seed1', 'seed2'],
        )


@dataclass
class UltrametricityReport:
    """
    Triples whose two smallest overlaps differ by more than epsilon count as violations
    """
    triples: int
    violations: int
    epsilon: float
    max_violation: float

    @property
    def violation_fraction(self) -> float:
        return self.violations / self.triples if self.triples else 0.0

    def as_dict(self) -> Dict[str, Any]:
        return {
            'triples': self.triples,
            'violations': self.violations,
            'violation_fraction': self.violation_fraction,
            'epsilon': self.epsilon,
            'max_violation': self.max_violation,
        }
