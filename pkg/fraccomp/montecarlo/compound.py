import math
import time
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import gamma, gammaincc
from scipy.stats import poisson

from fraccomp.montecarlo.config import McConfig
from fraccomp.montecarlo.sampling import WeightedSamples, chunk_generators, chunk_sizes, marginal_sampler
from fraccomp.util.common import parallel_map
from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.enums import Estimator, McRegime
from fraccomp.util.errors import InvalidParams, VarianceBlowup
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)

# Most jumps drawn at once inside a chunk
JUMP_BLOCK = 2 ** 20


def poisson_counts(rate: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """
    Poisson counts by inversion below POISSON_INVERSION_MAX_RATE, rounded normal approximation above.

    """
    if rate < POISSON_INVERSION_MAX_RATE:
        counts = poisson.ppf(rng.random(count), rate)
    else:
        counts = np.rint(rate + math.sqrt(rate) * rng.standard_normal(count))
    return np.maximum(counts, 0).astype(np.int64)


def _block_ends(counts: np.ndarray) -> np.ndarray:
    ends = []
    start = 0
    while start < counts.size:
        size = int(np.searchsorted(np.cumsum(counts[start:]), JUMP_BLOCK, side="right"))
        start += max(1, size)
        ends.append(start)
    return np.array(ends)


def _chunk_terms(cfg: McConfig, mu: float, sampler: Optional[Callable[[np.random.Generator, int], WeightedSamples]],
                 rng: np.random.Generator, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Signed terms W exp(-mu sum X_k S_k), or exp(-mu^nu sum X_k^nu) for the conditional estimator,
    and their absolute values, for one chunk of samples.

    """
    counts = poisson_counts(cfg.jump_rate(), rng, count)
    log_abs = np.empty(count)
    signs = np.ones(count)

    start = 0
    for stop in _block_ends(counts):
        block = counts[start:stop]
        n = block.size
        owner = np.repeat(np.arange(n), block)
        if cfg.regime == McRegime.Beta:
            jumps = cfg.delta_cutoff * (1.0 - rng.random(owner.size)) ** (-1.0 / cfg.beta)
        else:
            jumps = np.full(owner.size, cfg.delta_cutoff)

        if sampler is None:
            log_abs[start:stop] = -mu ** cfg.nu * np.bincount(owner, jumps ** cfg.nu, minlength=n)
        else:
            draws = sampler(rng, owner.size)
            with np.errstate(divide="ignore"):
                log_weights = np.bincount(owner, np.log(np.abs(draws.weights)), minlength=n)
            negatives = np.bincount(owner, draws.weights < 0, minlength=n)
            log_abs[start:stop] = log_weights - mu * np.bincount(owner, jumps * draws.values, minlength=n)
            signs[start:stop] = np.where(negatives % 2 == 1, -1.0, 1.0)
        start = stop

    with np.errstate(over="ignore"):
        absolute = np.exp(log_abs)
    return signs * absolute, absolute


def compound_poisson_mgf(cfg: McConfig, mu: float) -> Tuple[float, float]:
    """
    Monte Carlo estimate of E exp(-mu sum_{k <= N(lambda t delta^-alpha)} X_k S_k).

    Weighted estimator: signed draws of S with the product of their weights per sample.
    Conditional estimator: exact expectation over S given the jumps, exp(-mu^nu sum X_k^nu).

    :param cfg: Monte Carlo config.
    :param mu: mu >= 0.
    :return: Tuple (estimate, standard error).
    """
    if not mu >= 0:
        raise InvalidParams(f"mu must be >= 0, got {mu}.")
    started = time.time()
    sampler = marginal_sampler(cfg.nu) if cfg.estimator == Estimator.Weighted else None

    jobs = zip(chunk_generators(cfg.seed, cfg.samples), chunk_sizes(cfg.samples))
    parts = parallel_map(lambda job: _chunk_terms(cfg, mu, sampler, *job), jobs)
    terms = np.concatenate([p[0] for p in parts])
    absolute = np.concatenate([p[1] for p in parts])

    estimate = float(terms.mean())
    stderr = float(terms.std(ddof=1) / math.sqrt(terms.size))
    with np.errstate(divide="ignore", invalid="ignore"):
        index = float(absolute.mean() / abs(estimate)) if estimate != 0 else math.inf
    bound = FCConfig().get("oscillation_bound")
    if not math.isfinite(stderr) or not index <= bound:
        raise VarianceBlowup(f"Signed weights cancel too strongly for {cfg.describe()} at mu={mu:g}: "
                             f"oscillation index {index:.3g} exceeds {bound:g}.")

    logger.info(f"Compound Poisson MGF at mu={mu:g} for {cfg.describe()}: {estimate:.6g} +- {stderr:.2g} "
                f"({cfg.samples} samples, mean rate {cfg.jump_rate():.4g}, {time.time() - started:.2f} s)")
    return estimate, stderr


def theoretical_mgf_chain(cfg: McConfig, mu: float, delta: Optional[float] = None,
                          alpha: Optional[float] = None) -> float:
    """
    Exact MGF of the compound Poisson sum before the limit delta -> 0,
    exp(-lambda t delta^-alpha (1 - exp(-(mu delta)^nu)) - lambda t nu mu^nu delta^(beta - alpha)
    int_delta^inf exp(-mu^nu x^nu) x^(nu - beta - 1) dx), the last integral through the regularized
    upper incomplete gamma function. Jumps equal to delta (alpha = nu regime) keep the first term only.

    :param cfg: Monte Carlo config.
    :param mu: mu >= 0.
    :param delta: Jump threshold, the config's if None.
    :param alpha: Scaling exponent, the regime's if None.
    :return: MGF value.
    """
    if not mu >= 0:
        raise InvalidParams(f"mu must be >= 0, got {mu}.")
    delta = cfg.delta_cutoff if delta is None else delta
    alpha = cfg.alpha if alpha is None else alpha
    if not delta > 0:
        raise InvalidParams(f"delta must be > 0, got {delta}.")
    if mu == 0:
        return 1.0

    scale = cfg.poisson_rate * cfg.t
    y0 = (mu * delta) ** cfg.nu
    exponent = scale * delta ** -alpha * -math.expm1(-y0)
    if cfg.regime == McRegime.Beta:
        a = 1.0 - cfg.beta / cfg.nu
        exponent += scale * delta ** (cfg.beta - alpha) * mu ** cfg.beta * gamma(a) * gammaincc(a, y0)

    return math.exp(-exponent)
