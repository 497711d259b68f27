"""
Named-system registry

Every built-in system produces windows for (N, offset, seed, parameters) and
documents its default +-1 encoding. `regenerate` rebuilds any window from its
provenance record.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Mapping, Optional, Union

from .factors import BlockMap, factor_map
from .generators import dimer_sample, iid, paperfolding, periodic, rudin_shapiro, sturmian_word
from .substitution import BUILTIN_SUBSTITUTIONS, SubstitutionSystem, iterate_substitution
from .types import (
    DimerParams, GOLDEN_ROTATION, INVERSE_GOLDEN, Provenance, QuadraticIrrational,
    SequenceError, SequenceWindow, SturmianParams,
)

logger = logging.getLogger('aperiodic')

NAMED_ROTATIONS = {
    'golden': GOLDEN_ROTATION,
    'inverse-golden': INVERSE_GOLDEN,
    'silver': QuadraticIrrational(-1, 1, 2, 1),
}


class UnknownSystemError(SequenceError):
    pass


@dataclass(frozen=True)
class SystemSpec:
    name: str
    kind: str
    encoding: str
    builder: Callable[..., SequenceWindow] = field(repr=False)
    needs_seed: bool = False
    defaults: Dict[str, Any] = field(default_factory=dict, hash=False)


def parse_alpha(value: Union[str, float, Fraction, QuadraticIrrational, Mapping]) -> Union[float, Fraction, QuadraticIrrational]:
    """'golden', 'inverse-golden', 'silver', 'p/q', a float, or a {p, q, d, r} mapping"""
    if isinstance(value, (QuadraticIrrational, Fraction)):
        return value
    if isinstance(value, Mapping):
        return QuadraticIrrational(int(value['p']), int(value['q']), int(value['d']), int(value['r']))
    if isinstance(value, str):
        key = value.strip().lower()
        if key in NAMED_ROTATIONS:
            return NAMED_ROTATIONS[key]
        if '/' in key:
            return Fraction(key)
        try:
            return float(key)
        except ValueError:
            valid = ', '.join(sorted(NAMED_ROTATIONS))
            raise SequenceError(f"Cannot read alpha {value!r}; use a number, p/q, or one of: {valid}") from None
    return float(value)


def parse_beta(value: Union[str, float, Fraction]) -> Union[float, Fraction]:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value) if '/' in value else float(value)
    return float(value)


def sturmian_params(params: Mapping[str, Any]) -> SturmianParams:
    return SturmianParams(
        alpha=parse_alpha(params.get('alpha', 'golden')),
        beta=parse_beta(params.get('beta', 0.0)),
        periodic=bool(params.get('periodic', False)),
        exact=params.get('exact'),
    )


@lru_cache(maxsize=16)
def _cached_prefix(system_name: str, length: int) -> SequenceWindow:
    logger.info(f"Expanding {system_name} substitution to {length} sites")
    return iterate_substitution(BUILTIN_SUBSTITUTIONS[system_name], None, length)


def substitution_window(system: SubstitutionSystem, N: int, offset: int = 0,
                        seed_word: Optional[Any] = None) -> SequenceWindow:
    """Sites offset .. offset+N-1 of the limit word"""
    if offset < 0:
        raise SequenceError(f"Substitution windows start at site 0; offset must be >= 0, got {offset}")
    needed = offset + N
    builtin = BUILTIN_SUBSTITUTIONS.get(system.name)
    if seed_word is None and builtin is not None and builtin.as_dict() == system.as_dict():
        # round up so nearby lengths share one cached expansion
        source = _cached_prefix(system.name, 1 << max(needed - 1, 1).bit_length())
    else:
        source = iterate_substitution(system, seed_word, needed)
    return source.slice(offset, needed)


def _substitution_builder(name: str) -> Callable[..., SequenceWindow]:
    def build(N: int, offset: int = 0, seed: Optional[int] = None, **params) -> SequenceWindow:
        return substitution_window(BUILTIN_SUBSTITUTIONS[name], N, offset)
    return build


def _sturmian(N, offset=0, seed=None, **params):
    return sturmian_word(sturmian_params(params), N, offset)


def _rudin_shapiro(N, offset=0, seed=None, **params):
    return rudin_shapiro(N, offset)


def _paperfolding(N, offset=0, seed=None, **params):
    return paperfolding(N, offset)


def _dimer(N, offset=0, seed=None, **params):
    return dimer_sample(DimerParams(params.get('parity', 'even'), seed), N, offset)


def _iid(N, offset=0, seed=None, **params):
    return iid(N, seed, offset)


def _periodic(N, offset=0, seed=None, **params):
    return periodic(params.get('pattern', '+++-'), N, offset)


SYSTEMS: Dict[str, SystemSpec] = {
    spec.name: spec for spec in (
        SystemSpec('thue-morse', 'substitution', "0 -> +1, 1 -> -1", _substitution_builder('thue-morse')),
        SystemSpec('fibonacci', 'substitution', "a -> +1, b -> -1", _substitution_builder('fibonacci')),
        SystemSpec('period-doubling', 'substitution', "a -> +1, b -> -1",
                   _substitution_builder('period-doubling')),
        SystemSpec('sturmian', 'rotation', "0 -> +1, 1 -> -1", _sturmian,
                   defaults={'alpha': 'golden', 'beta': 0.0}),
        SystemSpec('rudin-shapiro', 'formula', "+ -> +1, - -> -1", _rudin_shapiro),
        SystemSpec('paperfolding', 'formula', "1 -> +1, 0 -> -1", _paperfolding),
        SystemSpec('dimer', 'stochastic', "L+, R+ -> +1; L-, R- -> -1", _dimer,
                   needs_seed=True, defaults={'parity': 'even'}),
        SystemSpec('iid', 'stochastic', "+ -> +1, - -> -1", _iid, needs_seed=True),
        SystemSpec('periodic', 'formula', "+ -> +1, - -> -1; two-letter patterns: first -> +1",
                   _periodic, defaults={'pattern': '+++-'}),
    )
}


def get_system(name: str) -> SystemSpec:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise UnknownSystemError(
            f"Unknown system {name!r}; valid options: {', '.join(sorted(SYSTEMS))}"
        ) from None


def generate(name: str, N: int, offset: int = 0, seed: Optional[int] = None, **params) -> SequenceWindow:
    """Window of a named system"""
    spec = get_system(name)
    if spec.needs_seed and seed is None:
        raise SequenceError(f"System {name!r} is stochastic and needs a seed")
    merged = {**spec.defaults, **{k: v for k, v in params.items() if v is not None}}
    return spec.builder(N, offset, seed, **merged)


def regenerate(provenance: Union[Provenance, Mapping[str, Any]]) -> SequenceWindow:
    """Rebuild a window bit-exactly from its provenance record"""
    if isinstance(provenance, Mapping):
        provenance = Provenance(
            provenance['generator'], dict(provenance.get('parameters') or {}),
            provenance.get('seed'), int(provenance.get('offset', 0)), int(provenance['length']),
        )

    params = dict(provenance.parameters)
    flipped = bool(params.pop('flipped', False))
    generator = provenance.generator
    N, offset, seed = provenance.length, provenance.offset, provenance.seed

    if generator == 'substitution':
        system = SubstitutionSystem.from_dict(params['system'])
        seed_word = params.get('seed_word')
        if seed_word == [system.default_seed]:
            seed_word = None
        window = substitution_window(system, N, offset, seed_word)
    elif generator == 'factor':
        source = regenerate(params['source'])
        window = factor_map(source, BlockMap.from_dict(params['block_map']))
    elif generator == 'sturmian':
        window = sturmian_word(sturmian_params(params), N, offset)
    elif generator in SYSTEMS:
        window = generate(generator, N, offset, seed, **params)
    else:
        raise UnknownSystemError(f"Cannot regenerate windows from generator {generator!r}")

    return window.flipped() if flipped else window
