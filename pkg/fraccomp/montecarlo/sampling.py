"""
Draws of the subordinator marginal S_nu(1), whose kernel u_nu(1, x) has Laplace transform
exp(-mu^nu). For nu <= 1 it is a positive stable variable; for nu > 1 the kernel changes sign
and draws come from |u| with signed weights, so that weighted means estimate integrals
against u.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Callable, List, Tuple

import numpy as np

from fraccomp.subordinator.densities import subordinator_kernel_values
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.common import parallel_map
from fraccomp.util.constants import *
from fraccomp.util.errors import InvalidParams, KernelNotAvailable, NumericalError
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)

# Largest deviation of the tabulated kernel mass from 1
TABLE_MASS_TOL = 1e-3


@dataclass
class WeightedSamples:
    """
    Draws with signed weights; weighted means sum(w f(x)) / n estimate int f(x) u(x) dx.

    Attributes:
        values: Draws x >= 0.
        weights: Weights, all 1 in the probabilistic case.

    """
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != self.weights.shape or not np.all(np.isfinite(self.weights)):
            raise NumericalError("Weighted samples need finite weights matching the draws.")

    def __len__(self) -> int:
        return self.values.size

    def mgf(self, mu: float) -> Tuple[float, float]:
        """
        Weighted empirical MGF, int exp(-mu x) u(x) dx, with its standard error.

        """
        terms = self.weights * np.exp(-mu * self.values)
        return float(terms.mean()), float(terms.std(ddof=1) / math.sqrt(terms.size))


@dataclass(frozen=True)
class SignedTable:
    """
    Tabulated kernel on a geometric grid for inverse-CDF sampling of its absolute value.

    Attributes:
        edges: Cell edges.
        cdf: Cumulative absolute mass at the edges, cdf[0] = 0.
        cell_signs: Signed over absolute mass of each cell, in [-1, 1].
        norm: Total absolute mass.
        mass: Total signed mass.

    """
    edges: np.ndarray
    cdf: np.ndarray
    cell_signs: np.ndarray
    norm: float
    mass: float

    def draw(self, rng: np.random.Generator, count: int) -> WeightedSamples:
        target = rng.random(count) * self.norm
        cells = np.clip(np.searchsorted(self.cdf, target, side="right") - 1, 0, self.cell_signs.size - 1)
        widths = np.diff(self.cdf)[cells]
        with np.errstate(divide="ignore", invalid="ignore"):
            within = np.where(widths > 0, (target - self.cdf[cells]) / widths, 0.5)
        values = self.edges[cells] + within * (self.edges[cells + 1] - self.edges[cells])
        return WeightedSamples(values, self.norm * self.cell_signs[cells])


def stable_draws(nu: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """
    Positive stable draws with E exp(-mu S) = exp(-mu^nu), 0 < nu <= 1, by Kanter's representation
    S = sin(nu U) / sin(U)^(1/nu) (sin((1 - nu) U) / E)^((1 - nu) / nu).

    """
    if not 0 < nu <= 1:
        raise InvalidParams(f"Stable draws need 0 < nu <= 1, got {nu}.")
    if nu == 1.0:
        return np.ones(count)

    u = math.pi * rng.random(count)
    e = rng.exponential(size=count)
    return (np.sin(nu * u) / np.sin(u) ** (1.0 / nu)) * (np.sin((1.0 - nu) * u) / e) ** ((1.0 - nu) / nu)


@lru_cache(maxsize=8)
def signed_table(nu: float) -> SignedTable:
    """
    Table of u_nu(1, x) on MC_TABLE_POINTS geometric points between MC_TABLE_XMIN and MC_TABLE_XMAX.

    :param nu: Order > 1.
    :return: Table.
    """
    edges = np.concatenate(([0.0], np.geomspace(MC_TABLE_XMIN, MC_TABLE_XMAX, MC_TABLE_POINTS - 1)))
    try:
        values, _ = subordinator_kernel_values(OrderVector.single(nu), 1.0, edges)
    except NumericalError as e:
        raise KernelNotAvailable(f"Kernel of order {nu} could not be tabulated: {e}")
    if not np.all(np.isfinite(values)):
        raise KernelNotAvailable(f"Kernel of order {nu} has non-finite values on the sampling grid.")

    dx = np.diff(edges)
    signed = 0.5 * dx * (values[1:] + values[:-1])
    absolute = 0.5 * dx * (np.abs(values[1:]) + np.abs(values[:-1]))
    mass = float(signed.sum())
    if abs(mass - 1.0) > TABLE_MASS_TOL:
        raise KernelNotAvailable(f"Tabulated kernel of order {nu} has mass {mass:.8f}.")

    with np.errstate(divide="ignore", invalid="ignore"):
        cell_signs = np.where(absolute > 0, signed / absolute, 0.0)
    norm = float(absolute.sum())
    logger.debug(f"Signed table of order {nu}: mass {mass:.8f}, absolute mass {norm:.6f}")
    return SignedTable(edges, np.concatenate(([0.0], np.cumsum(absolute))), cell_signs, norm, mass)


def chunk_generators(seed: int, count: int) -> List[np.random.Generator]:
    """
    One Philox stream per chunk of MC_CHUNK samples, spawned from the seed, so draws depend on the
    sample index only.

    """
    chunks = math.ceil(count / MC_CHUNK)
    return [np.random.Generator(np.random.Philox(child)) for child in np.random.SeedSequence(seed).spawn(chunks)]


def chunk_sizes(count: int) -> List[int]:
    return [min(MC_CHUNK, count - start) for start in range(0, count, MC_CHUNK)]


def marginal_sampler(nu: float) -> Callable[[np.random.Generator, int], WeightedSamples]:
    """
    Sampler of S_nu(1): exact stable draws for nu <= 1, signed table draws above.

    """
    if nu <= 1:
        return lambda rng, count: WeightedSamples(stable_draws(nu, rng, count), np.ones(count))
    table = signed_table(nu)
    return table.draw


def sample_pseudo_marginal(nu: float, count: int, seed: int) -> WeightedSamples:
    """
    Weighted draws of the subordinator marginal at time 1.

    :param nu: Order > 0.
    :param count: Number of draws.
    :param seed: Seed.
    :return: Draws; all weights are 1 for nu <= 1.
    """
    if count < 2:
        raise InvalidParams(f"Need at least two draws, got {count}.")
    sampler = marginal_sampler(nu)
    parts = parallel_map(lambda job: sampler(*job), zip(chunk_generators(seed, count), chunk_sizes(count)))

    return WeightedSamples(np.concatenate([p.values for p in parts]), np.concatenate([p.weights for p in parts]))
