"""
Single-site Metropolis sampling of finite-volume Gibbs measures
"""

import logging
import math
from typing import Dict, Optional, Sequence, Union

import numpy as np
from django.conf import settings

from .hamiltonian import LocalEnergy
from .types import GibbsError, InteractionSpec, MCEstimate, MixtureResult

logger = logging.getLogger('aperiodic')

ORDERS = ('raster', 'random')
DEFAULT_BATCHES = 50


class GibbsChain:
    """
    Metropolis chain on a box with a fixed boundary condition

    Each update proposes a value drawn uniformly from the site values and
    accepts with probability min(1, exp(-beta * dH)). Randomness comes from
    one Philox stream per chain, so a seed reproduces the trajectory.
    """

    def __init__(self, interaction: InteractionSpec, shape, beta: float, boundary: str = 'free',
                 omega=None, seed: Optional[int] = None, order: str = 'raster',
                 initial: Union[str, np.ndarray] = 'random'):
        if beta < 0:
            raise GibbsError(f"beta must be >= 0, got {beta}")
        if order not in ORDERS:
            raise GibbsError(f"order must be one of {ORDERS}, got {order!r}")
        if seed is None:
            seed = settings.APERIODIC_MASTER_SEED
        if seed is None:
            raise GibbsError("A Gibbs chain needs a seed")

        self.interaction = interaction
        self.beta = float(beta)
        self.order = order
        self.seed = int(seed)
        self.rng = np.random.Generator(np.random.Philox(self.seed))
        self.model = LocalEnergy(interaction, shape, boundary, omega)
        self.shape = self.model.shape
        self.n_sites = self.model.n_sites

        values = np.asarray(interaction.site_values)
        if isinstance(initial, str):
            if initial == 'random':
                start = self.rng.integers(0, interaction.q, size=self.n_sites)
            elif initial == 'plus':
                start = np.full(self.n_sites, int(np.argmax(values)))
            elif initial == 'minus':
                start = np.full(self.n_sites, int(np.argmin(values)))
            else:
                raise GibbsError(f"initial must be 'random', 'plus', 'minus' or a configuration, got {initial!r}")
        else:
            start = interaction.encode(np.asarray(initial, dtype=np.float64).reshape(-1))

        self.glued = self.model.glue(start)[0].tolist()
        self.interior = self.model.interior.tolist()
        self.neighbourhoods = self.model.neighbourhoods()
        self.sweeps = 0
        self.proposals = 0
        self.accepted = 0

    @property
    def sigma(self) -> np.ndarray:
        """Box configuration as site-value indices, row-major"""
        return np.array([self.glued[g] for g in self.interior], dtype=np.int64)

    def values(self) -> np.ndarray:
        return self.interaction.decode(self.sigma).reshape(self.shape)

    def energy(self) -> float:
        return float(self.model.energy(self.sigma[None, :])[0])

    def site_energy(self, site: int) -> float:
        g = self.glued
        return sum(table[sum(g[i] * m for i, m in zip(flat, mults))]
                   for table, flat, mults in self.neighbourhoods[site])

    def delta_energy(self, site: int, new_index: int) -> float:
        """H after setting `site` to `new_index` minus H now, from local placements only"""
        position = self.interior[site]
        old = self.glued[position]
        before = self.site_energy(site)
        self.glued[position] = int(new_index)
        after = self.site_energy(site)
        self.glued[position] = old
        return after - before

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposals if self.proposals else 0.0


def metropolis_sweep(chain: GibbsChain, interaction: Optional[InteractionSpec] = None) -> GibbsChain:
    """One update per box site, in raster order or a fresh random permutation"""
    if interaction is not None and interaction is not chain.interaction:
        raise GibbsError("Chain was built for a different interaction")
    n = chain.n_sites
    order = range(n) if chain.order == 'raster' else chain.rng.permutation(n).tolist()
    proposals = chain.rng.integers(0, chain.interaction.q, size=n).tolist()
    uniforms = chain.rng.random(n).tolist()

    glued, interior, beta = chain.glued, chain.interior, chain.beta
    accepted = 0
    for site, new, u in zip(order, proposals, uniforms):
        position = interior[site]
        old = glued[position]
        if new == old:
            accepted += 1
            continue
        before = chain.site_energy(site)
        glued[position] = new
        delta = chain.site_energy(site) - before
        if delta > 0 and u >= math.exp(-beta * delta):
            glued[position] = old
        else:
            accepted += 1

    chain.sweeps += 1
    chain.proposals += n
    chain.accepted += accepted
    return chain


def batch_means(series: np.ndarray, batches: int = DEFAULT_BATCHES) -> MCEstimate:
    """Mean of a time series with the standard error of its batch means"""
    series = np.asarray(series, dtype=np.float64)
    if series.size < 2 * batches:
        raise GibbsError(f"{series.size} samples are too few for {batches} batches")
    length = series.size // batches
    means = series[:length * batches].reshape(batches, length).mean(axis=1)
    return MCEstimate(float(series.mean()), float(means.std(ddof=1) / math.sqrt(batches)),
                      int(series.size), batches)


def _pair_products(values: np.ndarray, n: int, axis: int) -> float:
    length = values.shape[axis]
    if not 0 < n < length:
        raise GibbsError(f"Distance {n} does not fit a box of side {length}")
    head = np.take(values, np.arange(length - n), axis=axis)
    tail = np.take(values, np.arange(n, length), axis=axis)
    return float((head * tail).mean())


def chain_observables(chain: GibbsChain, distances: Sequence[int], sweeps: int, burn_in: int = 0,
                      batches: int = DEFAULT_BATCHES, axis: int = 0) -> Dict[str, MCEstimate]:
    """
    Magnetization and the box-averaged pair correlations sigma_x sigma_{x + n e}
    for e along `axis`, recorded after every sweep once burn_in sweeps are done
    """
    if axis >= len(chain.shape):
        raise GibbsError(f"Axis {axis} does not exist on a box of shape {chain.shape}")
    for _ in range(burn_in):
        metropolis_sweep(chain)

    magnetization = np.empty(sweeps)
    pairs = np.empty((sweeps, len(distances)))
    for t in range(sweeps):
        metropolis_sweep(chain)
        values = chain.values()
        magnetization[t] = values.mean()
        pairs[t] = [_pair_products(values, int(n), axis) for n in distances]

    result = {'magnetization': batch_means(magnetization, batches)}
    for column, n in enumerate(distances):
        result[f'pair_{int(n)}'] = batch_means(pairs[:, column], batches)
    logger.debug(f"Chain seed={chain.seed} beta={chain.beta}: {chain.sweeps} sweeps, "
                 f"acceptance {chain.acceptance_rate:.3f}")
    return result


def pair_correlation_mc(chain: GibbsChain, n: Union[int, Sequence[int]], sweeps: int, burn_in: int = 0,
                        batches: int = DEFAULT_BATCHES, axis: int = 0):
    """Estimate of <sigma_0 sigma_n>, or a dict over several distances"""
    distances = [n] if np.isscalar(n) else list(n)
    observed = chain_observables(chain, distances, sweeps, burn_in, batches, axis)
    estimates = {int(d): observed[f'pair_{int(d)}'] for d in distances}
    return estimates[int(n)] if np.isscalar(n) else estimates


def magnetization_mc(chain: GibbsChain, sweeps: int, burn_in: int = 0,
                     batches: int = DEFAULT_BATCHES) -> MCEstimate:
    return chain_observables(chain, [], sweeps, burn_in, batches)['magnetization']


def _mix(a: MCEstimate, b: MCEstimate) -> MCEstimate:
    return MCEstimate((a.value + b.value) / 2, math.hypot(a.error, b.error) / 2,
                      a.samples + b.samples, a.batches)


def symmetric_mixture_correlation(interaction: InteractionSpec, shape, beta: float, distance: int,
                                  sweeps: int, burn_in: int, seed: Optional[int] = None,
                                  batches: int = DEFAULT_BATCHES, axis: int = 0) -> MixtureResult:
    """
    1/2-1/2 mixture of the + and - frame states

    Each phase runs its own chain, started aligned with its frame. In the
    mixture <sigma_0> is near 0 while <sigma_0 sigma_n> stays near m^2, so the
    connected correlation does not decay.
    """
    if seed is None:
        seed = settings.APERIODIC_MASTER_SEED
    if seed is None:
        raise GibbsError("A mixture run needs a seed")
    plus_seed, minus_seed = (int(s) for s in
                             np.random.SeedSequence(int(seed)).generate_state(2, dtype=np.uint64))
    values = interaction.site_values

    phases = {}
    for label, frame_value, seed_value in (('plus', max(values), plus_seed), ('minus', min(values), minus_seed)):
        chain = GibbsChain(interaction, shape, beta, 'frame', frame_value, seed_value, initial=label)
        phases[label] = chain_observables(chain, [distance], sweeps, burn_in, batches, axis)

    key = f'pair_{int(distance)}'
    correlation = _mix(phases['plus'][key], phases['minus'][key])
    magnetization = _mix(phases['plus']['magnetization'], phases['minus']['magnetization'])
    connected = correlation.value - magnetization.value ** 2
    logger.info(f"Mixture at beta={beta}, n={distance}: f={correlation.value:.4f} "
                f"+- {correlation.error:.4f}, m={magnetization.value:.4f}, connected={connected:.4f}")
    return MixtureResult(int(distance), correlation, magnetization, connected,
                         phases['plus'], phases['minus'])
