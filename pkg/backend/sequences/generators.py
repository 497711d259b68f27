"""
Direct-formula generators

Each generator is a pure function of its parameters, the window offset and
(for stochastic systems) a seed. Windows at different offsets of the same
configuration agree on their common sites, which is what shift sampling and
regeneration rely on.
"""

import logging
import math
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from .types import (
    Alphabet, DimerParams, Provenance, QuadraticIrrational, SequenceError,
    SequenceWindow, SturmianParams, MAX_RATIONAL_DENOMINATOR, RATIONAL_TOLERANCE,
)

logger = logging.getLogger('aperiodic')

# Default encodings of the built-in alphabets
BINARY = Alphabet(('0', '1'), {'0': 1.0, '1': -1.0})
PLUS_MINUS = Alphabet(('+', '-'), {'+': 1.0, '-': -1.0})
PAPERFOLDING_ALPHABET = Alphabet(('0', '1'), {'0': -1.0, '1': 1.0})
DIMER_ALPHABET = Alphabet(
    ('L+', 'L-', 'R+', 'R-'),
    {'L+': 1.0, 'L-': -1.0, 'R+': 1.0, 'R-': -1.0},
)

MAX_GENERATED_SITES = 2 ** 30

# isqrt through float64 stays exact after correction while the radicand fits here
_INT64_ISQRT_LIMIT = 2 ** 62


def continued_fraction(x: Union[float, Fraction, int], max_terms: int = 64) -> List[int]:
    """
    Partial quotients of x, computed exactly on the binary value of a float
    """
    value = Fraction(x)
    terms = []
    for _ in range(max_terms):
        a = math.floor(value)
        terms.append(a)
        remainder = value - a
        if remainder == 0:
            break
        value = 1 / remainder
    return terms


def convergents(terms: List[int]) -> Iterator[Tuple[int, int]]:
    """Yield the convergents p/q of a continued fraction"""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in terms:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def rational_approximation(
    alpha: Union[float, Fraction],
    max_denominator: int = MAX_RATIONAL_DENOMINATOR,
    tolerance: float = RATIONAL_TOLERANCE,
) -> Optional[Tuple[int, int]]:
    """
    Return (p, q) when alpha is p/q to working precision with q <= max_denominator
    """
    exact = Fraction(alpha)
    for p, q in convergents(continued_fraction(exact)):
        if q > max_denominator:
            break
        if abs(exact - Fraction(p, q)) <= tolerance:
            return p, q
    return None


def floor_quadratic(p: int, q: int, d: int, r: int) -> int:
    """floor((p + q*sqrt(d)) / r) in integer arithmetic; r > 0, d not a square"""
    if q == 0:
        root = 0
    elif q > 0:
        root = math.isqrt(q * q * d)
    else:
        root = -(math.isqrt(q * q * d) + 1)
    return (p + root) // r


def _isqrt_int64(values: np.ndarray) -> np.ndarray:
    root = np.floor(np.sqrt(values.astype(np.float64))).astype(np.int64)
    # float sqrt is off by at most a couple of units here
    for _ in range(3):
        root = np.where(root * root > values, root - 1, root)
        root = np.where((root + 1) * (root + 1) <= values, root + 1, root)
    return root


def _floor_quadratic_many(P: np.ndarray, Q: np.ndarray, d: int, R: int) -> np.ndarray:
    radicand = Q * Q * d
    root = _isqrt_int64(np.abs(radicand))
    root = np.where(Q > 0, root, np.where(Q < 0, -(root + 1), 0))
    return np.floor_divide(P + root, R)


def _check_length(N: int):
    if N < 1:
        raise SequenceError(f"Window length must be >= 1, got {N}")
    if N > MAX_GENERATED_SITES:
        raise SequenceError(f"Window length {N} exceeds the limit of {MAX_GENERATED_SITES} sites")


def _check_offset(offset: int, system: str):
    if offset < 0:
        raise SequenceError(f"{system} windows start at site 0; offset must be >= 0, got {offset}")


def _sturmian_exact(params: SturmianParams, n: np.ndarray) -> np.ndarray:
    alpha: QuadraticIrrational = params.alpha
    # float phases are read as the decimal they print as, so 0.1 is 1/10
    beta = params.beta if isinstance(params.beta, Fraction) else Fraction(repr(float(params.beta)))
    b_num, b_den = beta.numerator, beta.denominator

    # n*alpha + beta = (b_den*n*p + r*b_num + b_den*n*q*sqrt(d)) / (r*b_den)
    R = alpha.r * b_den
    bound = max(abs(int(n[0])), abs(int(n[-1])))
    fits = (
        (b_den * bound * abs(alpha.q)) ** 2 * alpha.d < _INT64_ISQRT_LIMIT
        and b_den * bound * abs(alpha.p) + R * b_num < 2 ** 62
    )
    if fits:
        nn = n.astype(np.int64)
        P = nn * (b_den * alpha.p) + alpha.r * b_num
        Q = nn * (b_den * alpha.q)
        return _floor_quadratic_many(P, Q, alpha.d, R)

    logger.info(f"Exact Sturmian window falls back to Python integers ({n.size} sites)")
    return np.array(
        [floor_quadratic(b_den * k * alpha.p + alpha.r * b_num, b_den * k * alpha.q, alpha.d, R)
         for k in n.tolist()],
        dtype=object,
    )


def sturmian_word(params: SturmianParams, N: int, offset: int = 0) -> SequenceWindow:
    """
    s_n = floor((n+1)*alpha + beta) - floor(n*alpha + beta) for n = offset .. offset+N-1
    """
    _check_length(N)
    n = np.arange(offset, offset + N + 1, dtype=np.int64)

    if params.use_exact:
        floors = _sturmian_exact(params, n)
        values = np.diff(floors).astype(np.uint8)
    else:
        alpha = float(params.alpha)
        beta = float(params.beta)
        floors = np.floor(n.astype(np.float64) * alpha + beta)
        values = np.diff(floors).astype(np.uint8)

    provenance = Provenance('sturmian', params.as_dict(), None, offset, N)
    return SequenceWindow(values, BINARY, offset, provenance)


def rudin_shapiro(N: int, offset: int = 0) -> SequenceWindow:
    """
    u_n = (-1)^(number of "11" blocks in binary n); symbol '-' marks u_n = -1
    """
    _check_length(N)
    _check_offset(offset, 'Rudin-Shapiro')
    n = np.arange(offset, offset + N, dtype=np.uint64)
    x = n & (n >> np.uint64(1))
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(shift)
    values = (x & np.uint64(1)).astype(np.uint8)
    provenance = Provenance('rudin-shapiro', {}, None, offset, N)
    return SequenceWindow(values, PLUS_MINUS, offset, provenance)


def paperfolding(N: int, offset: int = 0) -> SequenceWindow:
    """
    Regular paperfolding: window index i is n = offset + i + 1; write n = 2^k * m
    with m odd, then f_n = 1 if m = 1 (mod 4) else 0
    """
    _check_length(N)
    _check_offset(offset, 'Paperfolding')
    n = np.arange(offset + 1, offset + N + 1, dtype=np.int64)
    odd_part = n // (n & -n)
    values = (odd_part % 4 == 1).astype(np.uint8)
    provenance = Provenance('paperfolding', {}, None, offset, N)
    return SequenceWindow(values, PAPERFOLDING_ALPHABET, offset, provenance)


def dimer_bits(seed: int, count: int) -> np.ndarray:
    """Orientation of dimers 0 .. count-1: 0 is (+,-), 1 is (-,+)"""
    bit_generator = np.random.Philox(seed)
    return (bit_generator.random_raw(count) & np.uint64(1)).astype(np.uint8)


def dimer_sample(params: DimerParams, N: int, offset: int = 0) -> SequenceWindow:
    """
    Random dimer configuration; even parity pairs sites (2j, 2j+1), odd parity (2j-1, 2j)
    """
    _check_length(N)
    _check_offset(offset, 'Dimer')
    if N % 2:
        raise SequenceError(f"Dimer windows need an even length, got N={N}")

    sites = np.arange(offset, offset + N, dtype=np.int64)
    shifted = sites if params.parity == 'even' else sites + 1
    dimer = shifted // 2
    position = shifted % 2

    bits = dimer_bits(int(params.seed), int(dimer[-1]) + 1)[dimer]
    # left end: L+ (0) or L- (1); right end: R- (3) or R+ (2)
    values = np.where(position == 0, bits, 3 - bits).astype(np.uint8)

    provenance = Provenance('dimer', {'parity': params.parity}, int(params.seed), offset, N)
    return SequenceWindow(values, DIMER_ALPHABET, offset, provenance)


def iid(N: int, seed: int, offset: int = 0) -> SequenceWindow:
    """I.i.d. uniform +-1 sites"""
    _check_length(N)
    _check_offset(offset, 'I.i.d.')
    if seed is None:
        raise SequenceError("I.i.d. windows need a seed")
    raw = np.random.Philox(int(seed)).random_raw(offset + N)[offset:]
    values = (raw & np.uint64(1)).astype(np.uint8)
    provenance = Provenance('iid', {}, int(seed), offset, N)
    return SequenceWindow(values, PLUS_MINUS, offset, provenance)


def pattern_alphabet(pattern: str) -> Alphabet:
    """'+'/'-' patterns use the spin alphabet; two-letter patterns get first -> +1"""
    if not pattern:
        raise SequenceError("Periodic pattern must be nonempty")
    if set(pattern) <= {'+', '-'}:
        return PLUS_MINUS
    symbols = tuple(sorted(set(pattern)))
    if len(symbols) == 1:
        raise SequenceError(f"Pattern {pattern!r} needs at least 2 distinct symbols or +/- notation")
    spin_map = {symbols[0]: 1.0, symbols[1]: -1.0} if len(symbols) == 2 else None
    return Alphabet(symbols, spin_map)


def periodic(pattern: str, N: int, offset: int = 0) -> SequenceWindow:
    _check_length(N)
    alphabet = pattern_alphabet(pattern)
    codes = alphabet.encode(pattern)
    sites = np.arange(offset, offset + N, dtype=np.int64)
    values = codes[sites % len(pattern)]
    provenance = Provenance('periodic', {'pattern': pattern}, None, offset, N)
    return SequenceWindow(values, alphabet, offset, provenance)
