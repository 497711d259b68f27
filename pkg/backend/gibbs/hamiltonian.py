"""
Finite-volume Hamiltonians, exact Gibbs distributions and Metropolis kernels

H^omega_Lambda(sigma) sums Phi_X over every translate X of every term with
X meeting Lambda, evaluated on sigma glued to the boundary configuration
omega outside Lambda. Boundaries:

    frame     omega is an array covering Lambda plus a frame of thickness t
              on every side (its interior is ignored), or one value for a
              constant frame; t must cover the interaction span
    free      only translates inside Lambda count
    periodic  Lambda is a torus
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings
from scipy.special import logsumexp

from .types import EnumerationLimitError, GibbsError, InteractionSpec, all_patterns

logger = logging.getLogger('aperiodic')

BOUNDARIES = ('frame', 'free', 'periodic')
ENERGY_CHUNK = 1 << 14
# Dense transition matrices are built only for small state spaces
MAX_KERNEL_STATES = 4096


def lattice_shape(shape: Union[int, Sequence[int]], dimension: int) -> Tuple[int, ...]:
    shape = (int(shape),) if np.isscalar(shape) else tuple(int(s) for s in shape)
    if len(shape) != dimension:
        raise GibbsError(f"Box {shape} does not match dimension {dimension}")
    if min(shape) < 1:
        raise GibbsError(f"Box sides must be >= 1, got {shape}")
    return shape


class LocalEnergy:
    """
    Placements of every term for one box and boundary condition

    Configurations are index arrays over the box sites in row-major order.
    """

    def __init__(self, interaction: InteractionSpec, shape, boundary: str = 'frame', omega=None):
        if boundary not in BOUNDARIES:
            raise GibbsError(f"Boundary must be one of {BOUNDARIES}, got {boundary!r}")
        self.interaction = interaction
        self.shape = lattice_shape(shape, interaction.dimension)
        self.boundary = boundary
        self.terms = interaction.all_terms()
        span = max(term.span for term in self.terms)

        if boundary == 'frame':
            frame, self.thickness = self._frame(omega, span)
        else:
            if omega is not None:
                raise GibbsError(f"Boundary {boundary!r} takes no omega")
            self.thickness = 0
            frame = np.zeros(self.shape, dtype=np.int64)

        self.glued_shape = frame.shape
        self.frame = frame.ravel()
        coords = np.indices(self.shape).reshape(len(self.shape), -1) + self.thickness
        self.interior = np.ravel_multi_index(tuple(coords), self.glued_shape)
        self.n_sites = int(self.interior.size)
        self.placements = [self._place(term) for term in self.terms]

    def _frame(self, omega, span: int) -> Tuple[np.ndarray, int]:
        if omega is None:
            raise GibbsError("A frame boundary needs omega")
        q_shape = np.array(self.shape)
        if np.isscalar(omega):
            thickness = span
            values = np.full(tuple(q_shape + 2 * thickness), float(omega))
        else:
            values = np.asarray(omega, dtype=np.float64)
            extra = np.array(values.shape) - q_shape
            if values.ndim != len(self.shape) or np.any(extra % 2) or len(set(extra.tolist())) != 1:
                raise GibbsError(
                    f"omega of shape {values.shape} is not a uniform frame around the box {self.shape}"
                )
            thickness = int(extra[0]) // 2
            if thickness < span:
                raise GibbsError(f"Frame thickness {thickness} is below the interaction span {span}")
        values = values.copy()
        values[tuple(slice(thickness, thickness + s) for s in self.shape)] = self.interaction.site_values[0]
        return self.interaction.encode(values), thickness

    def _place(self, term) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        offsets = term.offset_array()
        shape = np.array(self.shape)
        if self.boundary == 'periodic':
            lo, hi = np.zeros_like(shape), shape - 1
        else:
            lo, hi = -offsets.max(axis=0), shape - 1 - offsets.min(axis=0)
        axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
        anchors = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, shape.size)
        positions = anchors[:, None, :] + offsets[None, :, :]
        inside = np.all((positions >= 0) & (positions < shape), axis=2)

        if self.boundary == 'free':
            positions = positions[inside.all(axis=1)]
        elif self.boundary == 'frame':
            positions = positions[inside.any(axis=1)] + self.thickness
        else:
            positions = positions % shape

        flat = np.ravel_multi_index(tuple(np.moveaxis(positions, -1, 0)), self.glued_shape)
        q = self.interaction.q
        multipliers = q ** np.arange(term.size - 1, -1, -1, dtype=np.int64)
        return flat.reshape(-1, term.size), multipliers, term.table

    def glue(self, sigma: np.ndarray) -> np.ndarray:
        """(B, n_sites) box indices -> (B, glued size) including the frame"""
        sigma = np.atleast_2d(sigma)
        if sigma.shape[1] != self.n_sites:
            raise GibbsError(f"Configuration has {sigma.shape[1]} sites, box has {self.n_sites}")
        glued = np.tile(self.frame, (sigma.shape[0], 1))
        glued[:, self.interior] = sigma
        return glued

    def energy(self, sigma: np.ndarray) -> np.ndarray:
        """Energies of a batch of box configurations given as index arrays"""
        glued = self.glue(sigma)
        total = np.zeros(glued.shape[0], dtype=np.float64)
        for flat, multipliers, table in self.placements:
            if flat.size:
                codes = (glued[:, flat] * multipliers).sum(axis=2)
                total += table[codes].sum(axis=1)
        return total

    def neighbourhoods(self) -> List[List[Tuple[list, tuple, tuple]]]:
        """Per box site, the placements that contain it, as plain Python data"""
        sites = {int(g): i for i, g in enumerate(self.interior)}
        result: List[List[Tuple[list, tuple, tuple]]] = [[] for _ in range(self.n_sites)]
        for flat, multipliers, table in self.placements:
            table_list = table.tolist()
            mults = tuple(multipliers.tolist())
            for row in flat.tolist():
                for site in {sites[g] for g in row if g in sites}:
                    result[site].append((table_list, tuple(row), mults))
        return result


def _energies(model: LocalEnergy) -> Tuple[np.ndarray, np.ndarray]:
    q, n = model.interaction.q, model.n_sites
    states = q ** n
    limit = settings.APERIODIC_ENUMERATION_LIMIT
    if states > limit:
        raise EnumerationLimitError(
            f"{q}^{n} = {states} configurations exceed the enumeration limit {limit}; use the sampler"
        )
    configs = all_patterns(n, q)
    energies = np.concatenate([
        model.energy(configs[i:i + ENERGY_CHUNK]) for i in range(0, states, ENERGY_CHUNK)
    ])
    return configs, energies


def local_hamiltonian(sigma, omega, interaction: InteractionSpec, boundary: Optional[str] = None) -> float:
    """
    H^omega_Lambda(sigma) for a box configuration of real site values

    boundary defaults to 'frame' when omega is given and 'free' otherwise.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if interaction.dimension == 1:
        sigma = sigma.reshape(-1)
    if boundary is None:
        boundary = 'free' if omega is None else 'frame'
    model = LocalEnergy(interaction, sigma.shape, boundary, omega)
    return float(model.energy(interaction.encode(sigma).reshape(1, -1))[0])


@dataclass
class GibbsDistribution:
    """Exact finite-volume Gibbs law; row r of configs is state r"""
    configs: np.ndarray
    energies: np.ndarray
    probabilities: np.ndarray
    log_partition: float
    beta: float

    def state_index(self, indices: np.ndarray, q: int) -> int:
        weights = q ** np.arange(indices.size - 1, -1, -1, dtype=np.int64)
        return int(np.dot(indices.ravel(), weights))


def gibbs_distribution(interaction: InteractionSpec, shape, beta: float,
                       boundary: str = 'frame', omega=None) -> GibbsDistribution:
    """Enumerate all configurations of the box; refuses beyond APERIODIC_ENUMERATION_LIMIT"""
    if beta < 0:
        raise GibbsError(f"beta must be >= 0, got {beta}")
    model = LocalEnergy(interaction, shape, boundary, omega)
    configs, energies = _energies(model)
    log_weights = -beta * energies
    log_partition = float(logsumexp(log_weights))
    return GibbsDistribution(configs, energies, np.exp(log_weights - log_partition), log_partition, beta)


def conditional_probability(sigma, omega, interaction: InteractionSpec, beta: float,
                            boundary: Optional[str] = None) -> float:
    """gamma_Lambda(sigma | omega) = exp(-beta H(sigma)) / Z by exhaustive enumeration"""
    sigma = np.asarray(sigma, dtype=np.float64)
    if interaction.dimension == 1:
        sigma = sigma.reshape(-1)
    if boundary is None:
        boundary = 'free' if omega is None else 'frame'
    law = gibbs_distribution(interaction, sigma.shape, beta, boundary, omega)
    index = law.state_index(interaction.encode(sigma), interaction.q)
    return float(law.probabilities[index])


@dataclass
class TransitionKernel:
    matrix: np.ndarray
    law: GibbsDistribution
    order: str


def _site_kernel(law: GibbsDistribution, q: int, site: int, beta: float) -> np.ndarray:
    """Single-site Metropolis update with a uniform proposal over the site values"""
    configs = law.configs
    states, n = configs.shape
    weight = q ** (n - 1 - site)
    codes = np.arange(states)
    kernel = np.zeros((states, states), dtype=np.float64)
    for value in range(q):
        targets = codes + (value - configs[:, site]) * weight
        delta = law.energies[targets] - law.energies
        accept = np.exp(-beta * np.maximum(delta, 0.0)) / q
        moved = targets != codes
        kernel[codes[moved], targets[moved]] += accept[moved]
    kernel[codes, codes] = 1.0 - kernel.sum(axis=1)
    return kernel


def transition_matrix(interaction: InteractionSpec, shape, beta: float, boundary: str = 'frame',
                      omega=None, order: str = 'random') -> TransitionKernel:
    """
    Dense Markov kernel of one Metropolis update: a uniformly chosen site
    ('random') or a full raster sweep ('raster')
    """
    law = gibbs_distribution(interaction, shape, beta, boundary, omega)
    states, n = law.configs.shape
    if states > MAX_KERNEL_STATES:
        raise EnumerationLimitError(f"{states} states exceed the dense kernel limit {MAX_KERNEL_STATES}")
    kernels = [_site_kernel(law, interaction.q, site, beta) for site in range(n)]
    if order == 'random':
        matrix = sum(kernels) / n
    elif order == 'raster':
        matrix = np.eye(states)
        for kernel in kernels:
            matrix = matrix @ kernel
    else:
        raise GibbsError(f"order must be 'random' or 'raster', got {order!r}")
    return TransitionKernel(matrix, law, order)
