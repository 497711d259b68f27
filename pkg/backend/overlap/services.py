"""
Overlap sampling, atom detection and ultrametricity statistics

Two reference laws are useful when reading results:

- Sturmian words under uniform phases give q = 1 - 4 min(d, alpha) for a phase
  distance d, so the law has an atom at 1 - 4 alpha of weight |1 - 2 alpha|
  (about -0.528 and 0.236 for the golden rotation) next to a continuous part.
- Paperfolding under shift sampling is not ultrametric: about 3/8 of the
  triples violate the three-point condition.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings

from sequences.types import SequenceWindow

from .samplers import ReplicaSampler, SyntheticOverlapSource
from .types import Atom, EmpiricalOverlapDistribution, OverlapError, OverlapRecord, UltrametricityReport

logger = logging.getLogger('aperiodic')

CHUNK_SIZE = 256


def overlap(w1: SequenceWindow, w2: SequenceWindow) -> float:
    """q = (1/N) sum_i sigma1_i sigma2_i"""
    if len(w1) != len(w2):
        raise OverlapError(f"Overlap needs equal lengths, got {len(w1)} and {len(w2)}")
    for window in (w1, w2):
        if not window.is_numeric:
            raise OverlapError(f"Window over {window.alphabet.symbols} has no spin encoding")
    return float(np.dot(w1.spins(), w2.spins()) / len(w1))


def task_seeds(master_seed: Optional[int], count: int) -> List[int]:
    """Per-task seeds derived deterministically from the master seed"""
    if master_seed is None:
        raise OverlapError("Replica sampling needs a master seed")
    state = np.random.SeedSequence(int(master_seed)).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


def _parallel_map(function, items: Sequence, workers: int) -> List:
    """Map in fixed chunk order; results do not depend on the worker count"""
    chunks = [items[i:i + CHUNK_SIZE] for i in range(0, len(items), CHUNK_SIZE)]
    if workers <= 1 or len(chunks) == 1:
        results = [function(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(function, chunks))
    return [item for chunk in results for item in chunk]


def sample_overlap_distribution(
    sampler: Union[ReplicaSampler, SyntheticOverlapSource],
    M: int,
    N: int,
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> EmpiricalOverlapDistribution:
    """
    M independent replica pairs; pair i uses seeds 2i and 2i+1 of the master seed sequence
    """
    if M < 1 or N < 1:
        raise OverlapError(f"Need M >= 1 and N >= 1, got M={M}, N={N}")
    if master_seed is None:
        master_seed = settings.APERIODIC_MASTER_SEED
    workers = workers or settings.APERIODIC_OVERLAP_WORKERS
    seeds = task_seeds(master_seed, 2 * M)
    pairs = list(zip(seeds[0::2], seeds[1::2]))

    if isinstance(sampler, SyntheticOverlapSource):
        def run(chunk):
            return [OverlapRecord(sampler.overlap(s1), s1, s2) for s1, s2 in chunk]
    else:
        sampler.prepare(N)

        def run(chunk):
            return [OverlapRecord(overlap(sampler.draw(s1, N), sampler.draw(s2, N)), s1, s2)
                    for s1, s2 in chunk]

    records = _parallel_map(run, pairs, workers)
    distribution = EmpiricalOverlapDistribution(
        np.array([r.q for r in records]), N, records, sampler.name,
    )
    logger.info(f"Sampled {M} overlaps ({sampler.name}, N={N}): mean {distribution.mean:.4f}, "
                f"std {distribution.std:.4f}")
    return distribution


def atom_scan(dist: EmpiricalOverlapDistribution, resolution: float, min_weight: float) -> List[Atom]:
    """
    Greedy atom search: the densest closed window of width `resolution` is an atom
    if it holds more than min_weight of the mass; its samples are removed and the
    search repeats
    """
    if resolution <= 0:
        raise OverlapError(f"resolution must be positive, got {resolution}")
    if not 0.0 < min_weight < 1.0:
        raise OverlapError(f"min_weight must lie in (0, 1), got {min_weight}")

    remaining = np.array(dist.samples)
    atoms = []
    while remaining.size:
        ends = np.searchsorted(remaining, remaining + resolution, side='right')
        counts = ends - np.arange(remaining.size)
        start = int(np.argmax(counts))
        weight = counts[start] / dist.M
        if weight <= min_weight:
            break
        members = remaining[start:ends[start]]
        atoms.append(Atom(float(members.mean()), float(weight)))
        remaining = np.concatenate((remaining[:start], remaining[ends[start]:]))

    atoms.sort(key=lambda a: -a.weight)
    return atoms


def ultrametricity_from_overlaps(overlaps: np.ndarray, epsilon: float) -> UltrametricityReport:
    """overlaps has one row (q12, q13, q23) per triple"""
    overlaps = np.asarray(overlaps, dtype=np.float64).reshape(-1, 3)
    ordered = np.sort(overlaps, axis=1)
    gaps = ordered[:, 1] - ordered[:, 0]
    violated = gaps > epsilon
    max_violation = float(gaps[violated].max()) if violated.any() else 0.0
    return UltrametricityReport(int(overlaps.shape[0]), int(violated.sum()), float(epsilon), max_violation)


def ultrametricity_test(
    sampler: Union[ReplicaSampler, SyntheticOverlapSource],
    triples: int,
    N: int,
    epsilon: Optional[float] = None,
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> UltrametricityReport:
    """
    Three independent replicas per triple; violation when the two smallest of
    (q12, q13, q23) differ by more than epsilon
    """
    if triples < 1:
        raise OverlapError(f"Need at least one triple, got {triples}")
    if epsilon is None:
        epsilon = settings.APERIODIC_ULTRAMETRIC_EPSILON
    if master_seed is None:
        master_seed = settings.APERIODIC_MASTER_SEED
    workers = workers or settings.APERIODIC_OVERLAP_WORKERS
    seeds = task_seeds(master_seed, 3 * triples)
    groups = [tuple(seeds[3 * i:3 * i + 3]) for i in range(triples)]

    if isinstance(sampler, SyntheticOverlapSource):
        def run(chunk):
            return [tuple(sampler.overlap(s) for s in group) for group in chunk]
    else:
        sampler.prepare(N)

        def run(chunk):
            rows = []
            for s1, s2, s3 in chunk:
                w1, w2, w3 = (sampler.draw(s, N) for s in (s1, s2, s3))
                rows.append((overlap(w1, w2), overlap(w1, w3), overlap(w2, w3)))
            return rows

    report = ultrametricity_from_overlaps(np.array(_parallel_map(run, groups, workers)), epsilon)
    logger.info(f"Ultrametricity ({sampler.name}, N={N}, eps={epsilon}): "
                f"{report.violations}/{report.triples} violations")
    return report
