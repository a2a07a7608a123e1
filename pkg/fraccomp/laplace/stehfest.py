"""
Gaver-Stehfest inversion on the real axis.
"""

from fractions import Fraction
from functools import lru_cache
from math import factorial, log
from typing import Tuple

import numpy as np

from fraccomp.laplace.transforms import FCTransform
from fraccomp.util.errors import InvalidConfig, InversionFailure

LN2 = log(2.0)


@lru_cache(maxsize=None)
def stehfest_coefficients(nodes: int) -> Tuple[Fraction, ...]:
    """
    Stehfest weights V_1..V_N, computed exactly. They are integers only for N <= 6.

    :param nodes: Even number of terms N.
    :return: Rational weights.
    """
    if nodes < 2 or nodes % 2:
        raise InvalidConfig(f"Stehfest needs an even number of terms >= 2, got {nodes}.")

    half = nodes // 2
    coeffs = []
    for k in range(1, nodes + 1):
        acc = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            acc += Fraction(j ** half * factorial(2 * j),
                            factorial(half - j) * factorial(j) * factorial(j - 1)
                            * factorial(k - j) * factorial(2 * j - k))
        coeffs.append((-1) ** (k + half) * acc)

    return tuple(coeffs)


def stehfest_sum(transform: FCTransform, ts: np.ndarray, nodes: int) -> np.ndarray:
    """
    f(t) ~ (ln 2 / t) sum_k V_k F(k ln 2 / t).

    :param transform: Transform, evaluated on positive reals of shape (n, N).
    :param ts: Positive times, shape (n,).
    :param nodes: Even number of terms N.
    :return: Values, shape (n,).
    """
    v = np.array([float(c) for c in stehfest_coefficients(nodes)])
    k = np.arange(1, nodes + 1, dtype=float)
    s = (LN2 / ts)[:, None] * k[None, :]
    values = np.asarray(transform(s))
    if not transform.complex_valued:
        values = np.real(values)

    out = (LN2 / ts) * (values * v[None, :]).sum(axis=1)
    bad = np.flatnonzero(~np.isfinite(out))
    if bad.size:
        raise InversionFailure(f"Gaver-Stehfest sum is not finite at {bad.size} point(s), first t={ts[bad[0]]:.6g}.")

    return out
