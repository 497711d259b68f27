"""
Sliding-block codes (factor maps)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from .blocks import block_codes
from .types import Alphabet, Provenance, SequenceError, SequenceWindow, UnseenBlockError

logger = logging.getLogger('aperiodic')


@dataclass(frozen=True)
class BlockMap:
    """
    Map from length-`length` input blocks to single output symbols
    """
    length: int
    table: Dict[Tuple[str, ...], str] = field(hash=False)
    output_alphabet: Alphabet
    name: str = 'block-map'

    def __post_init__(self):
        if self.length < 1:
            raise SequenceError(f"Block length must be >= 1, got {self.length}")
        table = {}
        for block, image in dict(self.table).items():
            block = (block,) if isinstance(block, str) and self.length == 1 else tuple(block)
            if len(block) != self.length:
                raise SequenceError(f"Block {block} does not have length {self.length}")
            if str(image) not in self.output_alphabet.symbols:
                raise SequenceError(f"Image {image!r} is outside {self.output_alphabet.symbols}")
            table[tuple(str(s) for s in block)] = str(image)
        object.__setattr__(self, 'table', table)

    def lookup(self, input_alphabet: Alphabet) -> np.ndarray:
        """Output code per input block code; -1 where the table has no image"""
        size = input_alphabet.size
        lookup = np.full(size ** self.length, -1, dtype=np.int64)
        for block, image in self.table.items():
            if any(s not in input_alphabet.symbols for s in block):
                continue
            code = 0
            for s in block:
                code = code * size + input_alphabet.index(s)
            lookup[code] = self.output_alphabet.index(image)
        return lookup

    def as_dict(self) -> Dict[str, object]:
        return {
            'name': self.name,
            'length': self.length,
            'table': [[list(block), image] for block, image in self.table.items()],
            'output_alphabet': self.output_alphabet.as_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> 'BlockMap':
        out = data['output_alphabet']
        return cls(
            int(data['length']),
            {tuple(block): image for block, image in data['table']},
            Alphabet(tuple(out['symbols']), out.get('spin_map')),
            data.get('name', 'block-map'),
        )


def _decode_block(code: int, length: int, alphabet: Alphabet) -> Tuple[str, ...]:
    digits = []
    for _ in range(length):
        code, digit = divmod(code, alphabet.size)
        digits.append(alphabet.symbols[digit])
    return tuple(reversed(digits))


def factor_map(window: SequenceWindow, block_map: BlockMap) -> SequenceWindow:
    """
    v_n = block_map(u_n .. u_{n+length-1}); output has N - length + 1 sites and keeps the offset
    """
    if block_map.length > len(window):
        raise SequenceError(f"Block length {block_map.length} exceeds window length {len(window)}")

    codes = block_codes(window.values, block_map.length, window.alphabet.size)
    lookup = block_map.lookup(window.alphabet)
    out = lookup[codes]

    unseen = np.flatnonzero(out < 0)
    if unseen.size:
        block = _decode_block(int(codes[unseen[0]]), block_map.length, window.alphabet)
        raise UnseenBlockError(block)

    provenance = None
    if window.provenance is not None:
        parameters = {
            'source': window.provenance.as_dict(),
            'block_map': block_map.as_dict(),
        }
        provenance = Provenance('factor', parameters, window.provenance.seed,
                                window.offset, out.size)
    return SequenceWindow(out.astype(np.uint8), block_map.output_alphabet, window.offset, provenance)


def identity_map(alphabet: Alphabet) -> BlockMap:
    return BlockMap(1, {(s,): s for s in alphabet.symbols}, alphabet, 'identity')


def spin_sign_map(alphabet: Alphabet) -> BlockMap:
    """Collapse a numeric alphabet onto '+' / '-' by the sign of each symbol's spin"""
    spins = alphabet.spin_values()
    table = {(s,): '+' if v > 0 else '-' for s, v in zip(alphabet.symbols, spins)}
    return BlockMap(1, table, Alphabet(('+', '-'), {'+': 1.0, '-': -1.0}), 'spin-sign')


# v_n = a where u_n != u_{n+1}, else b; maps Thue-Morse onto period-doubling
THUE_MORSE_TO_PERIOD_DOUBLING = BlockMap(
    2,
    {('0', '1'): 'a', ('1', '0'): 'a', ('0', '0'): 'b', ('1', '1'): 'b'},
    Alphabet(('a', 'b'), {'a': 1.0, 'b': -1.0}),
    'thue-morse-to-period-doubling',
)

DIMER_START = BlockMap(
    1,
    {('L+',): '1', ('L-',): '1', ('R+',): '0', ('R-',): '0'},
    Alphabet(('0', '1'), {'0': 0.0, '1': 1.0}),
    'dimer-start',
)

BUILTIN_BLOCK_MAPS = {m.name: m for m in (THUE_MORSE_TO_PERIOD_DOUBLING, DIMER_START)}


def get_block_map(name: str, alphabet: Optional[Alphabet] = None) -> BlockMap:
    if name == 'identity' and alphabet is not None:
        return identity_map(alphabet)
    if name == 'spin-sign' and alphabet is not None:
        return spin_sign_map(alphabet)
    try:
        return BUILTIN_BLOCK_MAPS[name]
    except KeyError:
        valid = sorted(BUILTIN_BLOCK_MAPS) + ['identity', 'spin-sign']
        raise SequenceError(f"Unknown block map {name!r}; valid options: {', '.join(valid)}") from None
