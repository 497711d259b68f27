"""
Interaction formalism types

An interaction is a finite list of pattern-energy terms, each applied at every
lattice translate, plus an optional pair tail -J(n) sigma_i sigma_{i+n} (d = 1)
with a declared decay class. Configurations are held as indices into the
single-site space `site_values`.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np


class GibbsError(ValueError):
    """Invalid interaction, boundary condition or sampler input."""


class EnumerationLimitError(GibbsError):
    """Exact enumeration would exceed the configured state limit."""


TAIL_FORMS = ('power', 'exponential')
WEIGHT_KINDS = ('constant', 'diameter', 'cardinality')


def all_patterns(size: int, q: int) -> np.ndarray:
    """Every index pattern of the given size, in code order (first site most significant)"""
    codes = np.arange(q ** size, dtype=np.int64)
    digits = np.empty((codes.size, size), dtype=np.int64)
    for j in range(size - 1, -1, -1):
        codes, digits[:, j] = np.divmod(codes, q)
    return digits


@dataclass(frozen=True, eq=False)
class InteractionTerm:
    """
    Energy Phi_X for the support X = anchor + offsets, tabulated over all patterns on X
    """
    offsets: Tuple[Tuple[int, ...], ...]
    table: np.ndarray
    name: str = 'term'

    def __post_init__(self):
        offsets = tuple(tuple(int(c) for c in o) for o in self.offsets)
        if not offsets:
            raise GibbsError(f"Term {self.name!r} needs a nonempty support")
        if len(set(offsets)) != len(offsets):
            raise GibbsError(f"Term {self.name!r} repeats an offset")
        if len({len(o) for o in offsets}) != 1:
            raise GibbsError(f"Term {self.name!r} mixes dimensions")
        table = np.asarray(self.table, dtype=np.float64)
        if table.ndim != 1 or not np.all(np.isfinite(table)):
            raise GibbsError(f"Term {self.name!r} must have a bounded, flat energy table")
        table.setflags(write=False)
        object.__setattr__(self, 'offsets', offsets)
        object.__setattr__(self, 'table', table)

    @property
    def size(self) -> int:
        return len(self.offsets)

    @property
    def dimension(self) -> int:
        return len(self.offsets[0])

    @property
    def span(self) -> int:
        """Largest coordinate extent of the support"""
        array = np.array(self.offsets)
        return int((array.max(axis=0) - array.min(axis=0)).max())

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.table).max())

    def offset_array(self) -> np.ndarray:
        return np.array(self.offsets, dtype=np.int64)

    @classmethod
    def from_function(cls, offsets: Sequence[Sequence[int]], site_values: Sequence[float],
                      energy: Callable[[Tuple[float, ...]], float], name: str = 'term') -> 'InteractionTerm':
        values = np.asarray(site_values, dtype=np.float64)
        patterns = all_patterns(len(offsets), values.size)
        table = np.array([float(energy(tuple(values[p].tolist()))) for p in patterns])
        return cls(tuple(tuple(o) for o in offsets), table, name)

    @classmethod
    def from_table(cls, offsets: Sequence[Sequence[int]], site_values: Sequence[float],
                   energies: Mapping[Tuple[float, ...], float], name: str = 'term') -> 'InteractionTerm':
        """Patterns missing from `energies` get zero energy"""
        lookup = {tuple(float(v) for v in pattern): float(e) for pattern, e in energies.items()}
        for pattern in lookup:
            if len(pattern) != len(offsets):
                raise GibbsError(f"Pattern {pattern} does not match support size {len(offsets)}")
            unknown = [v for v in pattern if v not in set(float(s) for s in site_values)]
            if unknown:
                raise GibbsError(f"Pattern {pattern} uses values {unknown} outside {tuple(site_values)}")
        return cls.from_function(offsets, site_values, lambda p: lookup.get(p, 0.0), name)


@dataclass(frozen=True)
class PairTail:
    """
    Pair couplings J(n) = amplitude * n**-exponent (power) or amplitude * exp(-exponent*n)
    (exponential), energy -J(n) sigma_i sigma_{i+n}, for 1 <= n <= cutoff (None: unbounded)
    """
    form: str
    amplitude: float
    exponent: float
    cutoff: Optional[int] = None

    def __post_init__(self):
        if self.form not in TAIL_FORMS:
            raise GibbsError(f"Tail form must be one of {TAIL_FORMS}, got {self.form!r}")
        if self.exponent <= 0:
            raise GibbsError(f"Tail exponent must be positive, got {self.exponent}")
        if self.cutoff is not None and self.cutoff < 1:
            raise GibbsError(f"Tail cutoff must be >= 1, got {self.cutoff}")

    def coupling(self, n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        if self.form == 'power':
            return self.amplitude * n ** (-self.exponent)
        return self.amplitude * np.exp(-self.exponent * n)

    def as_dict(self) -> Dict[str, Any]:
        return {'form': self.form, 'amplitude': self.amplitude, 'exponent': self.exponent,
                'cutoff': self.cutoff}


@dataclass(frozen=True, eq=False)
class InteractionSpec:
    """
    Translation-covariant interaction on Z^d with single-site space site_values
    """
    terms: Tuple[InteractionTerm, ...]
    dimension: int = 1
    site_values: Tuple[float, ...] = (-1.0, 1.0)
    tail: Optional[PairTail] = None
    name: str = 'interaction'

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise GibbsError(f"Dimension must be 1 or 2, got {self.dimension}")
        values = tuple(float(v) for v in self.site_values)
        if len(values) < 2 or len(set(values)) != len(values):
            raise GibbsError(f"site_values must hold at least 2 distinct values, got {values}")
        object.__setattr__(self, 'site_values', values)
        terms = tuple(self.terms)
        for term in terms:
            if term.dimension != self.dimension:
                raise GibbsError(f"Term {term.name!r} has dimension {term.dimension}, expected {self.dimension}")
            if term.table.size != len(values) ** term.size:
                raise GibbsError(
                    f"Term {term.name!r} tabulates {term.table.size} patterns, "
                    f"expected {len(values) ** term.size}"
                )
        object.__setattr__(self, 'terms', terms)
        if self.tail is not None and self.dimension != 1:
            raise GibbsError("Pair tails are supported in dimension 1 only")
        if not terms and self.tail is None:
            raise GibbsError("An interaction needs at least one term or a pair tail")

    @property
    def q(self) -> int:
        return len(self.site_values)

    def encode(self, values) -> np.ndarray:
        """Real site values -> indices into site_values"""
        values = np.asarray(values, dtype=np.float64)
        lookup = np.asarray(self.site_values)
        matches = values[..., None] == lookup
        if not np.all(matches.any(axis=-1)):
            raise GibbsError(f"Configuration holds values outside {self.site_values}")
        return matches.argmax(axis=-1).astype(np.int64)

    def decode(self, indices) -> np.ndarray:
        return np.asarray(self.site_values)[np.asarray(indices)]

    def tail_terms(self) -> List[InteractionTerm]:
        """The pair tail as explicit terms; needs a finite cutoff"""
        if self.tail is None:
            return []
        if self.tail.cutoff is None:
            raise GibbsError("An unbounded pair tail has no finite-volume energy; declare a cutoff")
        terms = []
        for n in range(1, self.tail.cutoff + 1):
            coupling = float(self.tail.coupling(np.array([n]))[0])
            terms.append(InteractionTerm.from_function(
                ((0,), (n,)), self.site_values, lambda p, J=coupling: -J * p[0] * p[1], f'tail-{n}',
            ))
        return terms

    def all_terms(self) -> List[InteractionTerm]:
        return list(self.terms) + self.tail_terms()

    @property
    def span(self) -> int:
        return max(t.span for t in self.all_terms())

    def describe(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'dimension': self.dimension,
            'site_values': list(self.site_values),
            'terms': [{'name': t.name, 'offsets': [list(o) for o in t.offsets]} for t in self.terms],
            'tail': self.tail.as_dict() if self.tail is not None else None,
        }


@dataclass(frozen=True)
class WeightFunction:
    """
    g(X) >= 1 in the summability condition; pair_growth is the power of n in g({0, n})
    """
    kind: str = 'constant'
    function: Optional[Callable[[Tuple[Tuple[int, ...], ...]], float]] = field(default=None, compare=False)
    pair_growth: float = 0.0

    def __post_init__(self):
        if self.function is None and self.kind not in WEIGHT_KINDS:
            raise GibbsError(f"Weight kind must be one of {WEIGHT_KINDS} or a custom function")
        if self.function is None:
            object.__setattr__(self, 'pair_growth', 1.0 if self.kind == 'diameter' else 0.0)

    @classmethod
    def custom(cls, function, pair_growth: float, name: str = 'custom') -> 'WeightFunction':
        return cls(name, function, pair_growth)

    def __call__(self, offsets: Sequence[Sequence[int]]) -> float:
        if self.function is not None:
            value = float(self.function(tuple(tuple(o) for o in offsets)))
        elif self.kind == 'constant':
            value = 1.0
        elif self.kind == 'cardinality':
            value = float(len(offsets))
        else:
            array = np.array(offsets)
            value = max(1.0, float((array.max(axis=0) - array.min(axis=0)).max()))
        if value < 1.0:
            raise GibbsError(f"Weight g(X) must be >= 1, got {value} for {offsets}")
        return value

    def pair_weights(self, n: np.ndarray) -> np.ndarray:
        """g({0, n}) for the pair tail"""
        if self.function is not None:
            return np.array([self(((0,), (int(k),))) for k in n])
        if self.kind == 'constant':
            return np.ones(n.size)
        if self.kind == 'cardinality':
            return np.full(n.size, 2.0)
        return np.maximum(1.0, n.astype(np.float64))


@dataclass
class SummabilityResult:
    """
    sum over X containing 0 of ||Phi_X|| g(X)

    value is exact for finite interactions. For unbounded tails it is the
    partial sum up to `evaluated_to`, and the true sum lies in
    [value, value + remainder_bound]. truncation_error bounds what a declared
    cutoff leaves out of the untruncated tail.
    """
    value: float
    finite_part: float
    tail_part: float
    remainder_bound: float = 0.0
    truncation_error: float = 0.0
    evaluated_to: Optional[int] = None
    divergent: bool = False

    def as_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'finite_part': self.finite_part,
            'tail_part': self.tail_part,
            'remainder_bound': self.remainder_bound,
            'truncation_error': self.truncation_error,
            'evaluated_to': self.evaluated_to,
            'divergent': self.divergent,
        }


@dataclass
class MCEstimate:
    """Time average after burn-in with a batch-means error bar"""
    value: float
    error: float
    samples: int
    batches: int

    def as_dict(self) -> Dict[str, Any]:
        return {'value': self.value, 'error': self.error, 'samples': self.samples, 'batches': self.batches}


@dataclass
class MixtureResult:
    """
    Observables of the 1/2-1/2 mixture of the + and - boundary states
    """
    distance: int
    correlation: MCEstimate
    magnetization: MCEstimate
    connected: float
    plus: Dict[str, MCEstimate]
    minus: Dict[str, MCEstimate]

    def as_dict(self) -> Dict[str, Any]:
        return {
            'distance': self.distance,
            'correlation': self.correlation.as_dict(),
            'magnetization': self.magnetization.as_dict(),
            'connected': self.connected,
            'plus': {k: v.as_dict() for k, v in self.plus.items()},
            'minus': {k: v.as_dict() for k, v in self.minus.items()},
        }


@dataclass(frozen=True)
class MatchingRuleSpec:
    """
    Forbidden adjacent pairs with violation energy epsilon

    In 1D `forbidden` holds (left, right) pairs. In 2D `forbidden` holds
    horizontal (left, right) pairs and `forbidden_vertical` holds
    (lower row, upper row) pairs, where rows are array rows i and i+1.
    """
    forbidden: frozenset
    epsilon: float = 1.0
    dimension: int = 1
    forbidden_vertical: frozenset = frozenset()

    def __post_init__(self):
        if self.epsilon <= 0:
            raise GibbsError(f"Violation energy must be positive, got {self.epsilon}")
        if self.dimension not in (1, 2):
            raise GibbsError(f"Dimension must be 1 or 2, got {self.dimension}")
        object.__setattr__(self, 'forbidden', frozenset(self._pairs(self.forbidden)))
        object.__setattr__(self, 'forbidden_vertical', frozenset(self._pairs(self.forbidden_vertical)))
        if self.dimension == 1 and self.forbidden_vertical:
            raise GibbsError("Vertical rules need dimension 2")

    @staticmethod
    def _pairs(pairs) -> List[Tuple[str, str]]:
        normalized = []
        for pair in pairs:
            pair = tuple(pair)
            if len(pair) != 2:
                raise GibbsError(f"Forbidden pair {pair!r} must have two tiles")
            normalized.append((str(pair[0]), str(pair[1])))
        return normalized
