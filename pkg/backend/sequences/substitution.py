"""
Substitution systems and their limit words
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .types import Alphabet, Provenance, SequenceWindow, SubstitutionError

logger = logging.getLogger('aperiodic')

# Iteration caps; every built-in system reaches 2**30 sites in far fewer steps
MAX_GROWTH_ITERATIONS = 4096
MAX_STABILITY_ITERATIONS = 64


@dataclass(frozen=True)
class SubstitutionSystem:
    """
    Rewriting rule symbol -> nonempty word over a finite alphabet
    """
    alphabet: Alphabet
    rules: Dict[str, Tuple[str, ...]] = field(hash=False)
    name: str = 'substitution'
    require_primitive: bool = False

    def __post_init__(self):
        rules = {}
        for symbol, image in dict(self.rules).items():
            symbol = str(symbol)
            if symbol not in self.alphabet.symbols:
                raise SubstitutionError(f"Rule for {symbol!r} is outside alphabet {self.alphabet.symbols}")
            if isinstance(image, str) and all(len(s) == 1 for s in self.alphabet.symbols):
                image = tuple(image)
            image = tuple(str(s) for s in image)
            if not image:
                raise SubstitutionError(f"Rule image for {symbol!r} must be nonempty")
            unknown = [s for s in image if s not in self.alphabet.symbols]
            if unknown:
                raise SubstitutionError(f"Rule image for {symbol!r} uses symbols {unknown} outside the alphabet")
            rules[symbol] = image

        missing = [s for s in self.alphabet.symbols if s not in rules]
        if missing:
            raise SubstitutionError(f"No rule for symbols {missing}")
        object.__setattr__(self, 'rules', rules)

        if self.require_primitive and not self.is_primitive():
            raise SubstitutionError(f"Substitution {self.name!r} is not primitive")

    @property
    def default_seed(self) -> str:
        return self.alphabet.symbols[0]

    def image_lengths(self) -> np.ndarray:
        return np.array([len(self.rules[s]) for s in self.alphabet.symbols], dtype=np.int64)

    def matrix(self) -> np.ndarray:
        """M[i, j] = number of occurrences of symbol i in the image of symbol j"""
        size = self.alphabet.size
        M = np.zeros((size, size), dtype=np.int64)
        for j, symbol in enumerate(self.alphabet.symbols):
            for letter in self.rules[symbol]:
                M[self.alphabet.index(letter), j] += 1
        return M

    def is_primitive(self) -> bool:
        """Some power of the matrix is strictly positive (Wielandt bound on the power)"""
        size = self.alphabet.size
        adjacency = self.matrix() > 0
        power = adjacency.copy()
        for _ in range((size - 1) ** 2 + 1):
            if power.all():
                return True
            power = (power.astype(np.int64) @ adjacency.astype(np.int64)) > 0
        return bool(power.all())

    def letter_frequencies(self) -> Dict[str, float]:
        """Letter frequencies of the limit word from the Perron-Frobenius eigenvector"""
        if not self.is_primitive():
            raise SubstitutionError(f"Letter frequencies need a primitive substitution ({self.name})")
        eigenvalues, eigenvectors = np.linalg.eig(self.matrix().astype(np.float64))
        perron = int(np.argmax(eigenvalues.real))
        vector = np.abs(eigenvectors[:, perron].real)
        vector /= vector.sum()
        return dict(zip(self.alphabet.symbols, vector.tolist()))

    def as_dict(self) -> Dict[str, object]:
        return {
            'name': self.name,
            'symbols': list(self.alphabet.symbols),
            'spin_map': self.alphabet.spin_map,
            'rules': {s: list(image) for s, image in self.rules.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> 'SubstitutionSystem':
        alphabet = Alphabet(tuple(data['symbols']), data.get('spin_map'))
        return cls(alphabet, dict(data['rules']), data.get('name', 'substitution'))

    def apply(self, codes: np.ndarray) -> np.ndarray:
        """One application of the rule to an encoded word"""
        lengths = self.image_lengths()
        images = np.zeros((self.alphabet.size, int(lengths.max())), dtype=np.uint8)
        for i, symbol in enumerate(self.alphabet.symbols):
            images[i, :lengths[i]] = self.alphabet.encode(self.rules[symbol])

        word_lengths = lengths[codes]
        starts = np.cumsum(word_lengths) - word_lengths
        out = np.empty(int(word_lengths.sum()), dtype=np.uint8)
        for j in range(images.shape[1]):
            mask = word_lengths > j
            out[starts[mask] + j] = images[codes[mask], j]
        return out


def iterate_substitution(
    system: SubstitutionSystem,
    seed_word: Optional[Union[str, Sequence[str]]] = None,
    target_len: int = 1,
) -> SequenceWindow:
    """
    Prefix of length target_len of the limit word of system started from seed_word
    """
    if seed_word is None:
        seed_word = system.default_seed
    if target_len < 1:
        raise SubstitutionError(f"target_len must be >= 1, got {target_len}")
    word = system.alphabet.encode(seed_word)
    if word.size == 0:
        raise SubstitutionError("seed_word must be nonempty")

    if system.image_lengths().max() == 1 and word.size < target_len:
        raise SubstitutionError(
            f"Substitution {system.name!r} does not grow; its words stay at length {word.size} < {target_len}"
        )

    stalled = 0
    stable_rounds = 0
    for _ in range(MAX_GROWTH_ITERATIONS):
        image = system.apply(word[:target_len])[:target_len]

        if word.size >= target_len:
            if np.array_equal(image, word[:target_len]):
                break
            stable_rounds += 1
            if stable_rounds > MAX_STABILITY_ITERATIONS:
                raise SubstitutionError(
                    f"Prefix of length {target_len} never stabilises for seed {seed_word!r}; "
                    f"choose a seed whose image starts with the seed"
                )
        elif image.size <= word.size:
            stalled += 1
            if stalled > system.alphabet.size:
                raise SubstitutionError(
                    f"Substitution {system.name!r} stopped growing at length {word.size} < {target_len}"
                )
        else:
            stalled = 0
        word = image
    else:
        raise SubstitutionError(f"Substitution {system.name!r} grows too slowly to reach {target_len}")

    seed_list = list(system.alphabet.decode(system.alphabet.encode(seed_word)))
    parameters = {'system': system.as_dict(), 'seed_word': seed_list}
    provenance = Provenance('substitution', parameters, None, 0, target_len)
    return SequenceWindow(word[:target_len], system.alphabet, 0, provenance)


THUE_MORSE = SubstitutionSystem(
    Alphabet(('0', '1'), {'0': 1.0, '1': -1.0}),
    {'0': '01', '1': '10'},
    name='thue-morse',
    require_primitive=True,
)

FIBONACCI = SubstitutionSystem(
    Alphabet(('a', 'b'), {'a': 1.0, 'b': -1.0}),
    {'a': 'ab', 'b': 'a'},
    name='fibonacci',
    require_primitive=True,
)

PERIOD_DOUBLING = SubstitutionSystem(
    Alphabet(('a', 'b'), {'a': 1.0, 'b': -1.0}),
    {'a': 'ab', 'b': 'aa'},
    name='period-doubling',
    require_primitive=True,
)

BUILTIN_SUBSTITUTIONS = {s.name: s for s in (THUE_MORSE, FIBONACCI, PERIOD_DOUBLING)}
