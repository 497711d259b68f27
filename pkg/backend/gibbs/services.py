"""
Summability of interactions and matching-rule energies
"""

import logging
import math
from collections import defaultdict
from typing import Optional, Sequence, Union

import numpy as np

from sequences.types import SequenceWindow

from .types import GibbsError, InteractionSpec, MatchingRuleSpec, PairTail, SummabilityResult, WeightFunction

logger = logging.getLogger('aperiodic')

# Unbounded tails are summed explicitly up to this range before the remainder bound
DEFAULT_EVALUATION_CUTOFF = 10 ** 6


def _tail_remainder(tail: PairTail, growth: float, R: int) -> float:
    """Upper bound on 2 sum_{n > R} |J(n)| n^growth"""
    A = abs(tail.amplitude)
    if tail.form == 'power':
        s = tail.exponent - growth
        if s <= 1:
            return math.inf
        return 2 * A * R ** (1 - s) / (s - 1)

    r = math.exp(-tail.exponent)
    extra, n = 0.0, R + 1
    # until successive terms shrink by a ratio below 1
    while ((n + 1) / n) ** growth * r >= 1:
        extra += n ** growth * r ** n
        n += 1
    ratio = ((n + 1) / n) ** growth * r
    return 2 * A * (extra + n ** growth * r ** n / (1 - ratio))


def summability_norm(interaction: InteractionSpec, g: Optional[WeightFunction] = None,
                     evaluation_cutoff: int = DEFAULT_EVALUATION_CUTOFF) -> SummabilityResult:
    """
    sum over X containing 0 of ||Phi_X||_sup g(X)

    Terms with the same support are combined before taking the sup norm; each
    support counts once per site it contains. A pair tail adds 2 |J(n)| g({0, n})
    per distance. Unbounded tails report the partial sum, a bound on the rest,
    and the divergent flag when no such bound exists.
    """
    g = g or WeightFunction()
    combined = defaultdict(lambda: 0.0)
    for term in interaction.terms:
        combined[term.offsets] = combined[term.offsets] + term.table
    finite = 0.0
    for offsets, table in combined.items():
        norm = float(np.abs(table).max())
        for origin in offsets:
            shifted = tuple(tuple(c - o for c, o in zip(site, origin)) for site in offsets)
            finite += norm * g(shifted)

    tail = interaction.tail
    if tail is None:
        return SummabilityResult(finite, finite, 0.0)

    R = tail.cutoff or int(evaluation_cutoff)
    n = np.arange(1, R + 1)
    tail_part = float(2 * np.sum(np.abs(tail.coupling(n)) * g.pair_weights(n)))
    bound = _tail_remainder(tail, g.pair_growth, R)

    if tail.cutoff is not None:
        result = SummabilityResult(finite + tail_part, finite, tail_part, 0.0, bound, R, False)
    else:
        divergent = math.isinf(bound)
        result = SummabilityResult(finite + tail_part, finite, tail_part, bound, 0.0, R, divergent)
        if divergent:
            logger.warning(f"Interaction {interaction.name!r} is not summable under weight {g.kind!r}: "
                           f"{tail.form} tail with exponent {tail.exponent}")
    return result


def _grid(config) -> np.ndarray:
    if isinstance(config, SequenceWindow):
        return np.array(config.symbols(), dtype=object)
    if isinstance(config, str):
        return np.array(list(config), dtype=object)
    grid = np.array(config, dtype=object)
    if grid.ndim not in (1, 2):
        raise GibbsError(f"Configuration must be 1D or 2D, got {grid.ndim} dimensions")
    return np.vectorize(str, otypes=[object])(grid)


def _violations(left: np.ndarray, right: np.ndarray, forbidden: frozenset) -> int:
    if not forbidden or left.size == 0:
        return 0
    return sum((a, b) in forbidden for a, b in zip(left.ravel().tolist(), right.ravel().tolist()))


def matching_rule_energy(config: Union[SequenceWindow, str, Sequence], rules: MatchingRuleSpec) -> float:
    """
    Violation energy per adjacent pair: epsilon * violations / adjacencies

    Rows of a 2D configuration are indexed i; `forbidden` is checked on
    (grid[i, j], grid[i, j+1]) and `forbidden_vertical` on (grid[i, j], grid[i+1, j]).
    """
    grid = _grid(config)
    if grid.ndim != rules.dimension:
        raise GibbsError(f"Rules are {rules.dimension}D but the configuration is {grid.ndim}D")

    if grid.ndim == 1:
        adjacencies = grid.size - 1
        count = _violations(grid[:-1], grid[1:], rules.forbidden)
    else:
        rows, cols = grid.shape
        adjacencies = rows * (cols - 1) + (rows - 1) * cols
        count = (_violations(grid[:, :-1], grid[:, 1:], rules.forbidden)
                 + _violations(grid[:-1, :], grid[1:, :], rules.forbidden_vertical))
    if adjacencies < 1:
        raise GibbsError("A configuration needs at least one adjacent pair")
    return rules.epsilon * count / adjacencies
