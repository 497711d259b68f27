"""
Replica samplers

A sampler turns a per-draw seed into one configuration window distributed
according to the system's translation-invariant measure: random shifts into
one long word for substitution and formula systems, uniform phases for
Sturmian words, fresh seeds for stochastic systems.
"""

import logging
import threading
from typing import Any, Dict, Optional

import numpy as np

from sequences.generators import dimer_sample, sturmian_word
from sequences.systems import generate, get_system, sturmian_params
from sequences.types import DimerParams, PARITIES, SequenceWindow, SturmianParams

from .types import OverlapError

logger = logging.getLogger('aperiodic')

# Substitution words are sampled inside a prefix of this many window lengths
LONG_WORD_FACTOR = 100


def draw_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


class ReplicaSampler:
    """
    Base class; subclasses implement draw(seed, N)
    """
    name = 'sampler'

    def prepare(self, N: int):
        """Build shared state before draws run in parallel"""

    def draw(self, seed: int, N: int) -> SequenceWindow:
        raise NotImplementedError

    def describe(self) -> Dict[str, Any]:
        return {'sampler': self.name}


class ShiftSampler(ReplicaSampler):
    """Uniform random shift into one long word"""
    name = 'shift'

    def __init__(self, system: str, **params):
        self.spec = get_system(system)
        if self.spec.needs_seed:
            raise OverlapError(f"System {system!r} is stochastic; use a SeedSampler")
        self.system = system
        self.params = params
        self._long_word: Optional[SequenceWindow] = None
        self._lock = threading.Lock()

    def prepare(self, N: int):
        with self._lock:
            length = LONG_WORD_FACTOR * N
            if self._long_word is None or len(self._long_word) < length:
                logger.info(f"Building {length}-site word of {self.system} for shift sampling")
                self._long_word = generate(self.system, length, **self.params)

    def draw(self, seed: int, N: int) -> SequenceWindow:
        if self._long_word is None or len(self._long_word) < LONG_WORD_FACTOR * N:
            self.prepare(N)
        shift = int(draw_rng(seed).integers(0, len(self._long_word) - N + 1))
        return self._long_word.slice(shift, shift + N)

    def describe(self) -> Dict[str, Any]:
        return {'sampler': self.name, 'system': self.system, 'params': dict(self.params),
                'long_word_factor': LONG_WORD_FACTOR}


class PhaseSampler(ReplicaSampler):
    """Sturmian words with a uniform random phase, on windows centred at site 0"""
    name = 'phase'

    def __init__(self, alpha: Any = 'golden', exact: bool = False):
        base = sturmian_params({'alpha': alpha, 'exact': exact})
        self.alpha = base.alpha if exact else float(base.alpha)
        self.exact = exact

    def draw(self, seed: int, N: int) -> SequenceWindow:
        beta = float(draw_rng(seed).random())
        params = SturmianParams(self.alpha, beta, exact=self.exact)
        return sturmian_word(params, N, offset=-(N // 2))

    def describe(self) -> Dict[str, Any]:
        return {'sampler': self.name, 'alpha': float(self.alpha), 'exact': self.exact}


class SeedSampler(ReplicaSampler):
    """Fresh seed per draw for stochastic systems"""
    name = 'seed'

    def __init__(self, system: str, **params):
        get_system(system)
        self.system = system
        self.params = params

    def draw(self, seed: int, N: int) -> SequenceWindow:
        return generate(self.system, N, seed=int(seed), **self.params)

    def describe(self) -> Dict[str, Any]:
        return {'sampler': self.name, 'system': self.system, 'params': dict(self.params)}


class DimerSampler(ReplicaSampler):
    """Random dimers with the parity itself drawn 1/2-1/2"""
    name = 'dimer'

    def draw(self, seed: int, N: int) -> SequenceWindow:
        rng = draw_rng(seed)
        parity = PARITIES[int(rng.integers(0, 2))]
        inner_seed = int(rng.integers(0, 2 ** 63))
        return dimer_sample(DimerParams(parity, inner_seed), N)


class FixedSampler(ReplicaSampler):
    """Every draw returns the same window"""
    name = 'fixed'

    def __init__(self, window: SequenceWindow):
        self.window = window

    def draw(self, seed: int, N: int) -> SequenceWindow:
        if N > len(self.window):
            raise OverlapError(f"Fixed window has {len(self.window)} sites, {N} requested")
        return self.window.prefix(N)


class SyntheticOverlapSource:
    """
    Overlaps drawn directly: an atom at atom_location with weight atom_weight,
    otherwise uniform on [low, high]; independent per pair
    """
    name = 'synthetic'

    def __init__(self, low: float = -0.5, high: float = 0.5,
                 atom_location: Optional[float] = None, atom_weight: float = 0.0):
        if not -1.0 <= low < high <= 1.0:
            raise OverlapError(f"Need -1 <= low < high <= 1, got [{low}, {high}]")
        if not 0.0 <= atom_weight <= 1.0:
            raise OverlapError(f"atom_weight must lie in [0, 1], got {atom_weight}")
        self.low, self.high = low, high
        self.atom_location, self.atom_weight = atom_location, atom_weight

    def overlap(self, seed: int) -> float:
        rng = draw_rng(seed)
        if self.atom_location is not None and rng.random() < self.atom_weight:
            return float(self.atom_location)
        return float(rng.uniform(self.low, self.high))

    def describe(self) -> Dict[str, Any]:
        return {'sampler': self.name, 'low': self.low, 'high': self.high,
                'atom_location': self.atom_location, 'atom_weight': self.atom_weight}


def get_sampler(system: str, **params) -> ReplicaSampler:
    """Default sampling rule per named system"""
    spec = get_system(system)
    if system == 'sturmian':
        return PhaseSampler(params.get('alpha', 'golden'))
    if system == 'dimer':
        if params.get('parity') in PARITIES:
            return SeedSampler('dimer', parity=params['parity'])
        return DimerSampler()
    if spec.needs_seed:
        return SeedSampler(system, **params)
    return ShiftSampler(system, **params)
