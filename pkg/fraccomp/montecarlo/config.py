from dataclasses import dataclass
import math
from typing import Optional

from fraccomp.util.constants import *
from fraccomp.util.enums import Estimator, McRegime
from fraccomp.util.errors import InvalidParams


@dataclass(frozen=True)
class McConfig:
    """
    Parameters of the compound Poisson sum sum_{k <= N(lambda t delta^-alpha)} X_k S_k with Pareto
    jumps P{X > x} = (delta / x)^beta, x >= delta, and independent marginals S_k of the
    (pseudo-)subordinator of order nu at time 1.

    Attributes:
        nu: Order of the subordinator marginals, > 0.
        beta: Tail exponent of the jumps, 0 < beta < nu.
        delta_cutoff: Jump threshold delta > 0.
        poisson_rate: Rate lambda > 0 of the counting process.
        t: Time t > 0.
        samples: Number of Monte Carlo samples, at least MC_MIN_SAMPLES.
        seed: Seed of the random streams, 64-bit.
        regime: Scaling exponent alpha = beta (Pareto jumps) or alpha = nu (jumps equal to delta).
        estimator: Weighted signed draws of S or conditional expectation over S.
        scaling_exponent: Overrides the regime's alpha, to show the degenerate limits of other scalings.

    """
    nu: float
    beta: float
    delta_cutoff: float
    poisson_rate: float = 1.0
    t: float = 1.0
    samples: int = MC_MIN_SAMPLES
    seed: int = 0
    regime: McRegime = McRegime.Beta
    estimator: Estimator = Estimator.Weighted
    scaling_exponent: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise InvalidParams(f"nu must be > 0, got {self.nu}.")
        if not 0 < self.beta < self.nu:
            raise InvalidParams(f"beta must satisfy 0 < beta < nu, got beta={self.beta}, nu={self.nu}.")
        if not self.delta_cutoff > 0:
            raise InvalidParams(f"delta_cutoff must be > 0, got {self.delta_cutoff}.")
        if not self.poisson_rate > 0 or not self.t > 0:
            raise InvalidParams(f"poisson_rate and t must be > 0, got {self.poisson_rate} and {self.t}.")
        if self.samples < MC_MIN_SAMPLES:
            raise InvalidParams(f"samples must be >= {MC_MIN_SAMPLES}, got {self.samples}.")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidParams(f"seed must be a 64-bit unsigned integer, got {self.seed}.")
        if self.scaling_exponent is not None and not self.scaling_exponent > 0:
            raise InvalidParams(f"scaling_exponent must be > 0, got {self.scaling_exponent}.")

    @property
    def natural_alpha(self) -> float:
        return self.beta if self.regime == McRegime.Beta else self.nu

    @property
    def alpha(self) -> float:
        return self.natural_alpha if self.scaling_exponent is None else self.scaling_exponent

    def jump_rate(self, alpha: Optional[float] = None) -> float:
        """
        Mean number of jumps, lambda t delta^-alpha.

        """
        alpha = self.alpha if alpha is None else alpha
        return self.poisson_rate * self.t * self.delta_cutoff ** -alpha

    def target(self, mu: float) -> float:
        """
        Limit MGF of the regime as delta -> 0: exp(-lambda t Gamma(1 - beta/nu) mu^beta) for
        alpha = beta, exp(-lambda t mu^nu) for alpha = nu. A smaller scaling exponent tends to 1 and a
        larger one to 0 for mu > 0.

        """
        if mu > 0 and self.alpha != self.natural_alpha:
            return 1.0 if self.alpha < self.natural_alpha else 0.0
        scale = self.poisson_rate * self.t
        if self.regime == McRegime.Beta:
            return math.exp(-scale * math.gamma(1.0 - self.beta / self.nu) * mu ** self.beta)
        return math.exp(-scale * mu ** self.nu)

    def describe(self) -> str:
        return (f"nu={self.nu:g} beta={self.beta:g} delta={self.delta_cutoff:g} lambda={self.poisson_rate:g} "
                f"t={self.t:g} alpha={self.alpha:g} regime={self.regime.value} estimator={self.estimator.value}")
