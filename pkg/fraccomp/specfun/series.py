"""
Power series shared by the Mittag-Leffler and Wright functions.

Both are sums of z^k c_k with c_k = 1/(k!^p Gamma(alpha k + beta)); terms are summed with
exactly rounded summation and a relative stopping rule. Series whose terms grow far beyond
their sum are summed in a dedicated mpmath context instead.
"""

import math
from functools import lru_cache
from typing import Optional, Tuple

import mpmath
import numpy as np
from scipy.special import gammaln, gammasgn, rgamma

from fraccomp.util.constants import *
from fraccomp.util.errors import NonConvergence

BLOCK = 128


def log_abs_rgamma(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Logarithm and sign of 1/Gamma(a) for real a, including negative non-integers (where
    gammaln applies the reflection formula). Poles of Gamma give sign 0 and log -inf.

    :param a: Arguments.
    :return: Tuple (log|1/Gamma(a)|, sign of 1/Gamma(a)).
    """
    a = np.asarray(a, dtype=float)
    pole = (a <= 0) & (a == np.floor(a))
    safe = np.where(pole, 0.5, a)
    log_mag = np.where(pole, -np.inf, -gammaln(safe))
    sign = np.where(pole, 0.0, gammasgn(safe))

    return log_mag, sign


def series_terms(z: float, alpha: float, beta: float, start: int, count: int,
                 factorial: bool) -> Tuple[np.ndarray, np.ndarray]:
    """
    Terms k = start..start+count-1 of the series together with a pole mask.

    :return: Tuple (terms, pole mask).
    """
    k = np.arange(start, start + count, dtype=float)
    log_mag, sign = log_abs_rgamma(alpha * k + beta)
    if factorial:
        log_mag = log_mag - gammaln(k + 1.0)
    if z == 0.0:
        log_z = np.where(k == 0, 0.0, -np.inf)
        z_sign = np.ones_like(k)
    else:
        log_z = k * math.log(abs(z))
        z_sign = np.where((k % 2 == 1) & (z < 0), -1.0, 1.0)
    pole = sign == 0.0
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        # Direct products keep terms to a few ulps; the log form only covers over- and underflow
        direct = np.power(z, k) * rgamma(alpha * k + beta)
        if factorial:
            direct = direct * rgamma(k + 1.0)
        from_logs = z_sign * sign * np.exp(log_z + log_mag)
        usable = np.isfinite(direct) & ((direct != 0.0) | (from_logs == 0.0))
        terms = np.where(pole, 0.0, np.where(usable, direct, from_logs))

    return terms, pole


def sum_series(z: float, alpha: float, beta: float, factorial: bool) -> Tuple[float, float]:
    """
    Sums sum_k z^k / ((k!)^p Gamma(alpha k + beta)), p = 1 if factorial else 0.
    Stops after SERIES_STOP_RUN consecutive non-pole terms below SERIES_REL_STOP times the
    partial sum; terms at poles of Gamma vanish and neither count nor reset the run.

    :param z: Real argument.
    :param alpha: First parameter.
    :param beta: Second parameter.
    :param factorial: Whether terms carry the extra 1/k! (Wright function).
    :return: Tuple (sum, largest term magnitude).
    """
    collected = []
    run = 0
    start = 0
    while start < SERIES_MAX_TERMS:
        terms, pole = series_terms(z, alpha, beta, start, BLOCK, factorial)
        if not np.all(np.isfinite(terms)):
            raise NonConvergence(f"Series overflow at z={z}, alpha={alpha}, beta={beta}.")
        collected.append(terms)
        partial = math.fsum(np.concatenate(collected[:-1])) if len(collected) > 1 else 0.0
        running = partial + np.cumsum(terms)
        for i in range(terms.size):
            if pole[i]:
                continue
            if abs(terms[i]) < SERIES_REL_STOP * abs(running[i]) or (terms[i] == 0.0 and running[i] == 0.0):
                run += 1
                if run >= SERIES_STOP_RUN:
                    used = np.concatenate(collected)[:start + i + 1]
                    return math.fsum(used), float(np.max(np.abs(used)))
            else:
                run = 0
        start += BLOCK

    raise NonConvergence(f"Series did not converge in {SERIES_MAX_TERMS} terms at z={z}, "
                         f"alpha={alpha}, beta={beta}.")


def series_peak(z: float, alpha: float, beta: float, factorial: bool) -> Tuple[float, bool]:
    """
    Size of the largest term and whether all terms that matter share one sign.

    :param z: Real argument.
    :param alpha: First parameter.
    :param beta: Second parameter.
    :param factorial: Whether terms carry the extra 1/k!.
    :return: Tuple (log10 of the largest term magnitude, single sign).
    """
    if z == 0.0:
        return float(np.log10(abs(float(rgamma(beta))) or 1.0)), True

    k = np.arange(SERIES_MAX_TERMS, dtype=float)
    log_mag, sign = log_abs_rgamma(alpha * k + beta)
    log_term = log_mag + k * math.log(abs(z))
    if factorial:
        log_term = log_term - gammaln(k + 1.0)
    top = float(np.max(log_term))
    z_sign = np.where((k % 2 == 1) & (z < 0), -1.0, 1.0)
    signs = (z_sign * sign)[(log_term > top - 40.0) & (sign != 0.0)]

    return top / math.log(10.0), bool(np.all(signs > 0) or np.all(signs < 0))


@lru_cache(maxsize=None)
def _context(dps: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


@lru_cache(maxsize=256)
def _coefficients(alpha: float, beta: float, factorial: bool, count: int, dps: int) -> Tuple[mpmath.mpf, ...]:
    ctx = _context(dps)
    a, b = ctx.mpf(alpha), ctx.mpf(beta)
    if factorial:
        return tuple(ctx.rgamma(a * k + b) * ctx.rgamma(k + 1) for k in range(count))
    return tuple(ctx.rgamma(a * k + b) for k in range(count))


def sum_series_extended(z: float, alpha: float, beta: float, factorial: bool, top: float) -> float:
    """
    Same sum as `sum_series` with top + SERIES_GUARD_DIGITS decimal digits, for series whose
    largest term, 10^top, would swamp double precision. Coefficients are cached per parameters.

    :param z: Real argument.
    :param alpha: First parameter.
    :param beta: Second parameter.
    :param factorial: Whether terms carry the extra 1/k!.
    :param top: log10 of the largest term, see `series_peak`.
    :return: Sum rounded to double.
    """
    dps = 10 * math.ceil((max(top, 0.0) + SERIES_GUARD_DIGITS) / 10.0)
    ctx = _context(dps)
    z = ctx.mpf(z)
    count = BLOCK
    while count <= 2 * SERIES_MAX_TERMS:
        coefficients = _coefficients(alpha, beta, factorial, count, dps)
        total, power, run = ctx.zero, ctx.one, 0
        for c in coefficients:
            term = c * power
            total += term
            power *= z
            if c == 0:
                continue
            run = run + 1 if abs(term) < SERIES_REL_STOP * abs(total) else 0
            if run >= SERIES_STOP_RUN:
                return float(total)
        count *= 2

    raise NonConvergence(f"Extended series did not converge in {count // 2} terms at z={float(z)}, "
                         f"alpha={alpha}, beta={beta}.")


def try_series(z: float, alpha: float, beta: float, factorial: bool) -> Optional[float]:
    """
    Sums the series in double precision when its terms stay small or share a sign, in
    extended precision when they stay below 10^SERIES_EXTENDED_MAX_DIGITS, and gives up
    otherwise.

    :return: Sum, or None when the caller must use another representation.
    """
    top, single_sign = series_peak(z, alpha, beta, factorial)
    if top <= math.log10(SERIES_MAX_TERM):
        return sum_series(z, alpha, beta, factorial)[0]
    if top <= SERIES_EXTENDED_MAX_DIGITS:
        return sum_series_extended(z, alpha, beta, factorial, top)
    if single_sign:
        return sum_series(z, alpha, beta, factorial)[0]
    return None
