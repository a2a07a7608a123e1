import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from fraccomp.laplace.talbot import outside_contour, talbot_sum
from fraccomp.laplace.transforms import FCTransform, InversionConfig, principal_power
from fraccomp.specfun.series import try_series
from fraccomp.util.constants import *
from fraccomp.util.errors import InvalidParams, NonConvergence
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class MLParams:
    """
    Parameters of the Mittag-Leffler function E_{alpha, beta}.

    Attributes:
        alpha: alpha > 0.
        beta: Any real.

    """
    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise InvalidParams(f"Mittag-Leffler alpha must be > 0, got {self.alpha}.")


def ml_poles(p: MLParams, z: float) -> np.ndarray:
    """
    Poles of mu^(alpha-beta) / (mu^alpha - z) on the principal sheet, z < 0.

    """
    k_max = int(math.ceil(p.alpha))
    args = np.array([(math.pi + 2.0 * math.pi * k) / p.alpha for k in range(-k_max - 1, k_max + 1)])
    args = args[np.abs(args) < math.pi]

    return abs(z) ** (1.0 / p.alpha) * np.exp(1j * args)


def ml_by_integral(p: MLParams, z: float) -> float:
    """
    E_{alpha,beta}(z) for z < 0, 0 < alpha < 1, beta < 1 + alpha, from the real integral
    int_0^inf K(chi) dchi with
    K = chi^((1-beta)/alpha) exp(-chi^(1/alpha)) (chi sin(pi (1-beta)) - z sin(pi (1-beta+alpha)))
        / (alpha pi (chi^2 - 2 chi z cos(alpha pi) + z^2)).

    """
    a, b = p.alpha, p.beta
    s1 = math.sin(math.pi * (1.0 - b))
    s2 = math.sin(math.pi * (1.0 - b + a))
    c = math.cos(a * math.pi)

    def kernel(chi: float) -> float:
        if chi == 0.0:
            return 0.0
        return (chi ** ((1.0 - b) / a) * math.exp(-chi ** (1.0 / a)) * (chi * s1 - z * s2)
                / (a * math.pi * (chi * chi - 2.0 * chi * z * c + z * z)))

    head, _ = quad(kernel, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    tail, _ = quad(kernel, 1.0, math.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    value = head + tail
    if not math.isfinite(value):
        raise NonConvergence(f"Mittag-Leffler integral failed at alpha={a}, beta={b}, z={z}.")

    return value


def ml_by_inversion(p: MLParams, z: float, cfg: Optional[InversionConfig] = None) -> float:
    """
    E_{alpha,beta}(z), z < 0, as the inverse at t = 1 of mu^(alpha-beta) / (mu^alpha - z),
    adding residues of poles not enclosed by the contour.

    """
    cfg = InversionConfig.talbot() if cfg is None else cfg
    transform = FCTransform(lambda mu: principal_power(mu, p.alpha - p.beta) / (principal_power(mu, p.alpha) - z))
    poles = ml_poles(p, z)
    one = np.array([1.0])
    for scale in (cfg.contour_scale,) + TALBOT_SCALE_LADDER:
        values, error = talbot_sum(transform, one, cfg.nodes, scale)
        r = scale * 2.0 * cfg.nodes / 5.0
        outside = poles[outside_contour(poles, r)] if poles.size else poles
        residues = np.sum(principal_power(outside, 1.0 - p.beta) * np.exp(outside)) / p.alpha if outside.size else 0.0
        value = values[0] + np.real(residues)
        if np.isfinite(value) and error[0] <= cfg.tol:
            return float(value)

    raise NonConvergence(f"Mittag-Leffler inversion failed at alpha={p.alpha}, beta={p.beta}, z={z}.")


def mittag_leffler(p: MLParams, z: float) -> float:
    """
    Mittag-Leffler function E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta) for real z.

    Uses the power series, in extended precision when its terms grow large, unless they grow
    past 10^SERIES_EXTENDED_MAX_DIGITS with alternating signs. Then, for
    z < 0, a real integral representation when 0 < alpha < 1 and beta < 1 + alpha, and
    the Laplace inversion route beyond that.

    :param p: Parameters.
    :param z: Real argument.
    :return: E_{alpha,beta}(z).
    """
    z = float(z)
    value = try_series(z, p.alpha, p.beta, factorial=False)
    if value is not None:
        return value
    if z > 0:
        raise NonConvergence(f"Mittag-Leffler series cancels at positive z={z} (alpha={p.alpha}, beta={p.beta}).")

    if p.alpha < 1 and p.beta < 1 + p.alpha:
        return ml_by_integral(p, z)

    logger.debug(f"E_{{{p.alpha},{p.beta}}}({z}) out of series radius, using inversion.")
    return ml_by_inversion(p, z)


def mittag_leffler_grid(p: MLParams, zs: np.ndarray) -> np.ndarray:
    """
    Elementwise `mittag_leffler` over an array.

    """
    zs = np.asarray(zs, dtype=float)
    return np.array([mittag_leffler(p, z) for z in zs.ravel()]).reshape(zs.shape)
