"""
Built-in observables
"""

from typing import Optional

from sequences.types import Alphabet

from .types import CorrelationError, ObservableSpec


def constant(alphabet: Alphabet, value: float = 1.0) -> ObservableSpec:
    return ObservableSpec.from_function('constant', 1, alphabet, lambda block: value)


def indicator(alphabet: Alphabet, symbol: str) -> ObservableSpec:
    alphabet.index(symbol)
    return ObservableSpec.from_function(f'indicator:{symbol}', 1, alphabet,
                                        lambda block: 1.0 if block[0] == symbol else 0.0)


def spin(alphabet: Alphabet) -> ObservableSpec:
    spin_map = alphabet.spin_map
    if spin_map is None:
        raise CorrelationError(f"Alphabet {alphabet.symbols} has no spin_map")
    return ObservableSpec.from_function('spin', 1, alphabet, lambda block: spin_map[block[0]])


def dimer_start(alphabet: Alphabet) -> ObservableSpec:
    """1 on the left end of a dimer, 0 on the right end"""
    if not all(s[:1] in ('L', 'R') for s in alphabet.symbols):
        raise CorrelationError("dimer-start needs the dimer alphabet (L+, L-, R+, R-)")
    return ObservableSpec.from_function('dimer-start', 1, alphabet,
                                        lambda block: 1.0 if block[0].startswith('L') else 0.0)


OBSERVABLES = ('constant', 'indicator', 'spin', 'dimer-start')


def get_observable(name: str, alphabet: Alphabet, symbol: Optional[str] = None) -> ObservableSpec:
    """Build a named observable on an alphabet; 'indicator' needs a symbol"""
    if name == 'constant':
        return constant(alphabet)
    if name == 'spin':
        return spin(alphabet)
    if name == 'dimer-start':
        return dimer_start(alphabet)
    if name == 'indicator':
        if symbol is None:
            raise CorrelationError("The indicator observable needs a symbol")
        return indicator(alphabet, symbol)
    raise CorrelationError(f"Unknown observable {name!r}; valid options: {', '.join(OBSERVABLES)}")
