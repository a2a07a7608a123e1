"""
One-sided stable densities by their integral representation.

g_nu is the density with Laplace transform exp(-mu^nu), 0 < nu < 1:

    g_nu(y) = nu / ((1 - nu) pi) y^(-1/(1-nu)) int_0^pi A(phi) exp(-y^(-nu/(1-nu)) A(phi)) dphi,
    A(phi) = (sin(nu phi) / sin(phi))^(1/(1-nu)) sin((1-nu) phi) / sin(nu phi).

A is increasing on (0, pi) and blows up at pi, so the integrand is evaluated through log A.
"""

import math

from scipy.integrate import quad
from scipy.optimize import brentq

from fraccomp.util.constants import ZOLOTAREV_TOL
from fraccomp.util.errors import InvalidParams, NonConvergence


def log_a(phi: float, nu: float) -> float:
    return ((math.log(math.sin(nu * phi)) - math.log(math.sin(phi))) / (1.0 - nu)
            + math.log(math.sin((1.0 - nu) * phi)) - math.log(math.sin(nu * phi)))


def stable_density(nu: float, y: float) -> float:
    """
    Density g_nu(y) of the standard one-sided stable law, Laplace transform exp(-mu^nu).

    :param nu: Stability index in (0, 1).
    :param y: Point, y >= 0.
    :return: g_nu(y).
    """
    if not 0 < nu < 1:
        raise InvalidParams(f"Stable index must be in (0, 1), got nu={nu}.")
    if y <= 0:
        return 0.0

    rho = 1.0 / (1.0 - nu)
    log_c = -nu * rho * math.log(y)

    def integrand(phi: float) -> float:
        la = log_a(phi, nu)
        arg = la + log_c
        if arg > 700.0:
            return 0.0
        return math.exp(la - math.exp(arg))

    # Peak of the integrand sits where c A(phi) = 1
    points = None
    lo, hi = 1e-12, math.pi - 1e-12
    target = -log_c
    if log_a(lo, nu) < target < log_a(hi, nu):
        points = [brentq(lambda p: log_a(p, nu) - target, lo, hi, xtol=1e-14)]

    prefactor = nu * rho / math.pi * math.exp(-rho * math.log(y))
    if prefactor == 0.0:
        return 0.0
    epsabs = ZOLOTAREV_TOL / max(prefactor, 1e-300)
    value, error = quad(integrand, 0.0, math.pi, points=points, epsabs=epsabs, epsrel=1e-13, limit=400)
    if not math.isfinite(value):
        raise NonConvergence(f"Stable density integral failed at nu={nu}, y={y}.")

    return prefactor * value
