"""
Interaction builders and the JSON interaction file format

File layout:

    {
      "name": "ising-1d",
      "dimension": 1,
      "site_values": [-1, 1],
      "terms": [
        {"name": "bond", "offsets": [[0], [1]],
         "energies": [{"pattern": [1, 1], "energy": -1.0}, ...]}
      ],
      "tail": {"form": "power", "amplitude": 1.0, "exponent": 2.0, "cutoff": null}
    }

Patterns missing from "energies" have zero energy.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Union

from .types import GibbsError, InteractionSpec, InteractionTerm, MatchingRuleSpec, PairTail

logger = logging.getLogger('aperiodic')


def _unit_offsets(dimension: int):
    if dimension == 1:
        return [((0,), (1,))]
    return [((0, 0), (1, 0)), ((0, 0), (0, 1))]


def ising(J: float = 1.0, h: float = 0.0, dimension: int = 1, tail: Optional[PairTail] = None) -> InteractionSpec:
    """Nearest-neighbour Ising: -J sigma_x sigma_y per bond and -h sigma_x per site"""
    values = (-1.0, 1.0)
    terms = [
        InteractionTerm.from_function(offsets, values, lambda p: -J * p[0] * p[1], f'bond-{axis}')
        for axis, offsets in enumerate(_unit_offsets(dimension))
    ]
    if h:
        origin = ((0,) * dimension,)
        terms.append(InteractionTerm.from_function(origin, values, lambda p: -h * p[0], 'field'))
    name = f'ising-{dimension}d'
    return InteractionSpec(tuple(terms), dimension, values, tail, name)


def long_range_ising(amplitude: float, exponent: float, form: str = 'power',
                     cutoff: Optional[int] = None) -> InteractionSpec:
    """Pure pair tail -J(n) sigma_i sigma_{i+n} in one dimension"""
    return InteractionSpec((), 1, (-1.0, 1.0), PairTail(form, amplitude, exponent, cutoff),
                           f'{form}-tail')


def matching_rule_interaction(rules: MatchingRuleSpec, tiles: Sequence[str]) -> InteractionSpec:
    """
    Nearest-neighbour interaction charging epsilon per forbidden adjacency

    Tile i is encoded as site value i.
    """
    tiles = [str(t) for t in tiles]
    if len(set(tiles)) != len(tiles) or len(tiles) < 2:
        raise GibbsError(f"Need at least two distinct tiles, got {tiles}")
    index = {tile: float(i) for i, tile in enumerate(tiles)}
    values = tuple(index.values())
    unknown = {t for pair in rules.forbidden | rules.forbidden_vertical for t in pair} - set(tiles)
    if unknown:
        raise GibbsError(f"Rules mention tiles {sorted(unknown)} outside {tiles}")

    terms = []
    rule_sets = [rules.forbidden] if rules.dimension == 1 else [rules.forbidden, rules.forbidden_vertical]
    # 2D configurations are indexed [row, column]: horizontal bonds run along axis 1
    offsets_by_rule = _unit_offsets(1) if rules.dimension == 1 else [((0, 0), (0, 1)), ((0, 0), (1, 0))]
    for forbidden, offsets, label in zip(rule_sets, offsets_by_rule, ('horizontal', 'vertical')):
        energies = {(index[a], index[b]): rules.epsilon for a, b in forbidden}
        terms.append(InteractionTerm.from_table(offsets, values, energies, f'rule-{label}'))
    return InteractionSpec(tuple(terms), rules.dimension, values, None, 'matching-rules')


def interaction_from_dict(data: Mapping[str, Any]) -> InteractionSpec:
    """Build an interaction from the validated file layout"""
    from .serializers import InteractionFileSerializer

    serializer = InteractionFileSerializer(data=dict(data))
    if not serializer.is_valid():
        raise GibbsError(f"Invalid interaction file: {serializer.errors}")
    payload = serializer.validated_data

    values = tuple(float(v) for v in payload['site_values'])
    terms = []
    for i, term in enumerate(payload.get('terms', [])):
        energies = {tuple(e['pattern']): e['energy'] for e in term['energies']}
        terms.append(InteractionTerm.from_table(term['offsets'], values, energies, term.get('name') or f'term-{i}'))
    tail = payload.get('tail')
    tail = PairTail(tail['form'], tail['amplitude'], tail['exponent'], tail.get('cutoff')) if tail else None
    return InteractionSpec(tuple(terms), payload['dimension'], values, tail, payload.get('name') or 'interaction')


def load_interaction(path: Union[str, Path]) -> InteractionSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise GibbsError(f"Cannot read interaction file {path}: {e}") from e
    interaction = interaction_from_dict(data)
    logger.info(f"Loaded interaction {interaction.name!r} from {path}")
    return interaction


BUILTIN_INTERACTIONS = {
    'ising-1d': lambda **kw: ising(dimension=1, **kw),
    'ising-2d': lambda **kw: ising(dimension=2, **kw),
}


def get_interaction(name_or_path: str, **params) -> InteractionSpec:
    """Built-in interaction by name, otherwise a JSON interaction file"""
    if name_or_path in BUILTIN_INTERACTIONS:
        return BUILTIN_INTERACTIONS[name_or_path](**params)
    if Path(name_or_path).is_file():
        return load_interaction(name_or_path)
    raise GibbsError(
        f"Unknown interaction {name_or_path!r}: not one of {sorted(BUILTIN_INTERACTIONS)} and not a file"
    )


def interaction_summary(interaction: InteractionSpec) -> Dict[str, Any]:
    summary = interaction.describe()
    summary['span'] = max((t.span for t in interaction.terms), default=0)
    return summary
