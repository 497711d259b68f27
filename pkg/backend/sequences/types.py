"""
Domain types for symbolic configurations

Windows are finite samples of bi-infinite configurations over a finite
single-site alphabet. Symbols are stored as small integers; the spin map turns
them into real values only when a numeric sequence is requested.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np


_SIGN_SWAP = str.maketrans("+-", "-+")


class SequenceError(ValueError):
    """Invalid input to a generator or a window operation."""


class SubstitutionError(SequenceError):
    """A substitution cannot produce the requested word."""


class UnseenBlockError(SequenceError):
    """A sliding-block code met a block it has no image for."""

    def __init__(self, block: Tuple[str, ...]):
        self.block = block
        super().__init__(f"Block map has no image for block {''.join(block)!r} ({block})")


@dataclass(frozen=True)
class Alphabet:
    """
    Finite single-site space with an optional real-valued encoding
    """
    symbols: Tuple[str, ...]
    spin_map: Optional[Dict[str, float]] = field(default=None, hash=False)

    def __post_init__(self):
        symbols = tuple(str(s) for s in self.symbols)
        object.__setattr__(self, 'symbols', symbols)

        if len(symbols) < 2:
            raise SequenceError("Alphabet needs at least 2 symbols")
        if len(set(symbols)) != len(symbols):
            raise SequenceError(f"Alphabet symbols must be distinct: {symbols}")
        if len(symbols) > 255:
            raise SequenceError("Alphabet is limited to 255 symbols")

        if self.spin_map is not None:
            spin_map = {str(k): float(v) for k, v in dict(self.spin_map).items()}
            missing = [s for s in symbols if s not in spin_map]
            if missing:
                raise SequenceError(f"spin_map does not cover symbols {missing}")
            unknown = [s for s in spin_map if s not in symbols]
            if unknown:
                raise SequenceError(f"spin_map has symbols outside the alphabet: {unknown}")
            object.__setattr__(self, 'spin_map', spin_map)

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def is_numeric(self) -> bool:
        return self.spin_map is not None

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(str(symbol))
        except ValueError:
            raise SequenceError(f"Symbol {symbol!r} is not in alphabet {self.symbols}") from None

    def encode(self, word: Union[str, Sequence[str]]) -> np.ndarray:
        """Translate a word (string of one-character symbols or a symbol list) to indices"""
        if isinstance(word, str) and all(len(s) == 1 for s in self.symbols):
            word = list(word)
        return np.array([self.index(s) for s in word], dtype=np.uint8)

    def decode(self, values: np.ndarray) -> List[str]:
        return [self.symbols[i] for i in np.asarray(values).tolist()]

    def spin_values(self) -> np.ndarray:
        """Real value per symbol index"""
        if self.spin_map is None:
            raise SequenceError(
                f"Alphabet {self.symbols} has no spin_map; choose an explicit encoding"
            )
        return np.array([self.spin_map[s] for s in self.symbols], dtype=np.float64)

    def with_spin_map(self, spin_map: Mapping[str, float]) -> 'Alphabet':
        return Alphabet(self.symbols, dict(spin_map))

    def as_dict(self) -> Dict[str, Any]:
        return {'symbols': list(self.symbols), 'spin_map': self.spin_map}


@dataclass(frozen=True)
class Provenance:
    """
    Everything needed to regenerate a window bit-exactly
    """
    generator: str
    parameters: Dict[str, Any] = field(default_factory=dict, hash=False)
    seed: Optional[int] = None
    offset: int = 0
    length: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return {
            'generator': self.generator,
            'parameters': dict(self.parameters),
            'seed': self.seed,
            'offset': self.offset,
            'length': self.length,
        }

    def moved(self, offset: int, length: int) -> 'Provenance':
        return Provenance(self.generator, dict(self.parameters), self.seed, offset, length)


@dataclass(frozen=True, eq=False)
class SequenceWindow:
    """
    Finite window of a configuration: values[i] is the symbol index at site offset + i
    """
    values: np.ndarray
    alphabet: Alphabet
    offset: int = 0
    provenance: Optional[Provenance] = None

    def __post_init__(self):
        raw = np.asarray(self.values)
        if raw.size and raw.dtype.kind in "iu" and raw.min() < 0:
            raise SequenceError("Window values must be non-negative symbol indices")
        values = np.array(raw, dtype=np.uint8, copy=True)
        if values.ndim != 1 or values.size < 1:
            raise SequenceError("A window needs N >= 1 values in a one-dimensional array")
        if values.max() >= self.alphabet.size:
            raise SequenceError("Window values fall outside the alphabet")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'offset', int(self.offset))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def N(self) -> int:
        return len(self)

    @property
    def is_numeric(self) -> bool:
        return self.alphabet.is_numeric

    @cached_property
    def _spins(self) -> np.ndarray:
        spins = self.alphabet.spin_values()[self.values]
        spins.setflags(write=False)
        return spins

    def spins(self) -> np.ndarray:
        """Real-valued sequence through the alphabet's spin_map"""
        return self._spins

    def symbols(self) -> List[str]:
        return self.alphabet.decode(self.values)

    def word(self) -> str:
        return ''.join(self.symbols())

    def slice(self, start: int, stop: int) -> 'SequenceWindow':
        if not 0 <= start < stop <= len(self):
            raise SequenceError(f"Slice [{start}, {stop}) is outside a window of length {len(self)}")
        provenance = None
        if self.provenance is not None:
            provenance = self.provenance.moved(self.offset + start, stop - start)
        return SequenceWindow(self.values[start:stop], self.alphabet, self.offset + start, provenance)

    def prefix(self, n: int) -> 'SequenceWindow':
        return self.slice(0, n)

    def flipped(self) -> 'SequenceWindow':
        """Global spin flip; every symbol must have a partner with the opposite spin"""
        spins = self.alphabet.spin_values()
        symbols = self.alphabet.symbols
        partner = np.empty(self.alphabet.size, dtype=np.uint8)
        for i, value in enumerate(spins):
            matches = np.flatnonzero(spins == -value)
            # prefer the label with the sign swapped, e.g. L+ -> L-
            swapped = symbols[i].translate(_SIGN_SWAP)
            if swapped in symbols and symbols.index(swapped) in matches:
                partner[i] = symbols.index(swapped)
            elif matches.size == 1:
                partner[i] = matches[0]
            else:
                raise SequenceError(f"Symbol {symbols[i]!r} has no unique spin-flipped partner")
        provenance = None
        if self.provenance is not None:
            params = dict(self.provenance.parameters)
            params['flipped'] = not params.get('flipped', False)
            provenance = Provenance(self.provenance.generator, params, self.provenance.seed,
                                    self.offset, len(self))
        return SequenceWindow(partner[self.values], self.alphabet, self.offset, provenance)

    def same_as(self, other: 'SequenceWindow') -> bool:
        """Bit-exact equality of values, alphabet and offset"""
        return (
            self.alphabet == other.alphabet
            and self.offset == other.offset
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class QuadraticIrrational:
    """
    The real number (p + q*sqrt(d)) / r, held exactly
    """
    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.r == 0:
            raise SequenceError("Denominator r must be nonzero")
        if self.d < 2 or math.isqrt(self.d) ** 2 == self.d:
            raise SequenceError(f"d={self.d} must be a positive non-square integer")
        if self.r < 0:
            object.__setattr__(self, 'p', -self.p)
            object.__setattr__(self, 'q', -self.q)
            object.__setattr__(self, 'r', -self.r)

    def __float__(self) -> float:
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def as_dict(self) -> Dict[str, int]:
        return {'p': self.p, 'q': self.q, 'd': self.d, 'r': self.r}


# 2 - tau = (3 - sqrt 5) / 2, the rotation number of the Fibonacci word
GOLDEN_ROTATION = QuadraticIrrational(3, -1, 5, 2)
# 1 / tau = (sqrt 5 - 1) / 2
INVERSE_GOLDEN = QuadraticIrrational(-1, 1, 5, 2)

MAX_RATIONAL_DENOMINATOR = 10 ** 6
# tighter than the best golden-ratio convergent with q <= 10**6 (about 6.5e-13)
RATIONAL_TOLERANCE = 1e-14


@dataclass(frozen=True)
class SturmianParams:
    """
    Rotation number alpha and phase beta of s_n = floor((n+1)a + b) - floor(na + b)
    """
    alpha: Union[float, Fraction, QuadraticIrrational]
    beta: Union[float, Fraction] = 0.0
    periodic: bool = False
    exact: Optional[bool] = None

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise SequenceError(f"alpha must lie in (0, 1), got {alpha}")
        if not 0 <= self.beta < 1:
            raise SequenceError(f"beta must lie in [0, 1), got {self.beta}")

        if not self.periodic and not isinstance(self.alpha, QuadraticIrrational):
            from .generators import rational_approximation
            approximation = rational_approximation(alpha)
            if approximation is not None:
                p, q = approximation
                raise SequenceError(
                    f"alpha={alpha!r} equals {p}/{q} to working precision; "
                    f"pass periodic=True for rational rotation numbers"
                )

        if self.exact and not isinstance(self.alpha, QuadraticIrrational):
            raise SequenceError("Exact mode needs alpha given as a QuadraticIrrational")

    @property
    def use_exact(self) -> bool:
        if self.exact is None:
            return isinstance(self.alpha, QuadraticIrrational)
        return self.exact

    def as_dict(self) -> Dict[str, Any]:
        if isinstance(self.alpha, QuadraticIrrational):
            alpha = self.alpha.as_dict()
        elif isinstance(self.alpha, Fraction):
            alpha = str(self.alpha)
        else:
            alpha = float(self.alpha)
        beta = str(self.beta) if isinstance(self.beta, Fraction) else float(self.beta)
        return {'alpha': alpha, 'beta': beta, 'periodic': self.periodic, 'exact': self.use_exact}


PARITIES = ('even', 'odd')


@dataclass(frozen=True)
class DimerParams:
    """
    Random dimers on [2n, 2n+1] (even) or [2n-1, 2n] (odd), each +- or -+ with probability 1/2
    """
    parity: str = 'even'
    seed: int = 0

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise SequenceError(f"parity must be one of {PARITIES}, got {self.parity!r}")
        if self.seed is None or int(self.seed) < 0:
            raise SequenceError("Dimer samples need a non-negative integer seed")
