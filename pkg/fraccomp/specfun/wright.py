import math
from dataclasses import dataclass

import numpy as np
from scipy.special import rgamma

from fraccomp.laplace.inversion import invert
from fraccomp.laplace.transforms import FCTransform, principal_power
from fraccomp.specfun.series import try_series
from fraccomp.specfun.stable import stable_density
from fraccomp.util.errors import ContourFailure, InvalidParams, NonConvergence
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class WrightParams:
    """
    Parameters of the Wright function W_{alpha, beta}.

    Attributes:
        alpha: alpha > -1.
        beta: Any real.

    """
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not self.alpha > -1:
            raise InvalidParams(f"Wright alpha must be > -1, got {self.alpha}.")

    @property
    def stable_order(self) -> float:
        """
        Order nu when (alpha, beta) = (-nu, 1 - nu) with 0 < nu < 1, else nan.

        """
        nu = -self.alpha
        if 0 < nu < 1 and abs(self.beta - (1.0 - nu)) < 1e-15:
            return nu
        return math.nan


def wright_kernel_integral(nu: float, z: float) -> float:
    """
    W_{-nu,1-nu}(z) for z < 0 through the stable density:
    W_{-nu,1-nu}(-x) = x^(-1-1/nu) / nu * g_nu(x^(-1/nu)).

    """
    x = -z
    y = x ** (-1.0 / nu)

    return y / (nu * x) * stable_density(nu, y)


def wright(p: WrightParams, z: float) -> float:
    """
    Wright function W_{alpha,beta}(z) = sum_k z^k / (k! Gamma(alpha k + beta)) for real z.

    The series is entire for alpha > -1 and is summed wherever its largest term stays below
    10^SERIES_EXTENDED_MAX_DIGITS (in extended precision past SERIES_MAX_TERM). Beyond, the
    integral representation for the pair (-nu, 1-nu) that gives stable densities, and Laplace
    inversion of mu^(-beta) exp(z mu^(-alpha)) at t = 1 otherwise.

    :param p: Parameters.
    :param z: Real argument.
    :return: W_{alpha,beta}(z).
    """
    z = float(z)
    if p.alpha == 0:
        return math.exp(z) * float(rgamma(p.beta))
    value = try_series(z, p.alpha, p.beta, factorial=True)
    if value is not None:
        return value

    nu = p.stable_order
    if z < 0 and not math.isnan(nu):
        return wright_kernel_integral(nu, z)

    logger.debug(f"W_{{{p.alpha},{p.beta}}}({z}) out of series radius, using inversion.")
    transform = FCTransform(lambda mu: principal_power(mu, -p.beta) * np.exp(z * principal_power(mu, -p.alpha)))
    try:
        return invert(transform, 1.0)
    except ContourFailure as e:
        raise NonConvergence(f"Wright function failed at alpha={p.alpha}, beta={p.beta}, z={z}: {e}")


def wright_grid(p: WrightParams, zs: np.ndarray) -> np.ndarray:
    """
    Elementwise `wright` over an array.

    """
    zs = np.asarray(zs, dtype=float)
    return np.array([wright(p, z) for z in zs.ravel()]).reshape(zs.shape)
