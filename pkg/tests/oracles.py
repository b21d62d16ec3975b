"""Reference routes that share no arithmetic with the production code.

Three independent sources: mpmath's arbitrary-precision evaluator, an
alternating-series acceleration built from scratch on mpf arithmetic, and
plain partial sums with integral tail corrections in binary64.
"""

import math

import mpmath as mp
import numpy as np


def zeta_ref(s, n: int = 0, dps: int = 30) -> complex:
    with mp.workdps(dps):
        if n == 0:
            return complex(mp.zeta(mp.mpc(s)))
        return complex(mp.zeta(mp.mpc(s), derivative=n))


def theta_ref(t: float, dps: int = 30) -> float:
    with mp.workdps(dps):
        return float(mp.siegeltheta(t))


def z_ref(t: float, dps: int = 30) -> float:
    with mp.workdps(dps):
        return float(mp.siegelz(t))


def zero_ref(k: int, dps: int = 20) -> float:
    """Ordinate of the k-th critical-line zero, k >= 1."""
    with mp.workdps(dps):
        return float(mp.zetazero(k).imag)


def alternating_sum(f, terms: int = 80, dps: int = 40):
    """sum_{k>=0} (-1)^k f(k) by Chebyshev-polynomial acceleration.

    Standard scheme: d = ((3+sqrt8)^n + (3-sqrt8)^n)/2 and a telescoped
    coefficient recurrence; error decays like (3+sqrt8)^-n.
    """
    with mp.workdps(dps):
        n = terms
        big = (3 + 2 * mp.sqrt(2)) ** n
        d = (big + 1 / big) / 2
        b = mp.mpf(-1)
        c = -d
        s = mp.mpf(0)
        for k in range(n):
            c = b - c
            s += c * f(k)
            b = (k + n) * (k - n) * b / ((k + mp.mpf("0.5")) * (k + 1))
        return s / d


def zeta_half_alternating(dps: int = 40) -> float:
    """zeta(1/2) from the alternating series, no mp.zeta involved."""
    with mp.workdps(dps):
        eta = alternating_sum(lambda k: 1 / mp.sqrt(k + 1), 80, dps)
        return float(eta / (1 - mp.sqrt(2)))


def zeta_prime_2_series(cutoff: int = 10 ** 6) -> float:
    """zeta'(2) from the plain series with an integral tail correction."""
    m = np.arange(1, cutoff + 1, dtype=np.float64)
    terms = np.log(m) / (m * m)
    blocks = [float(np.sum(terms[i:i + 4096]))
              for i in range(0, cutoff, 4096)]
    partial = math.fsum(blocks)
    lx = math.log(cutoff)
    x = float(cutoff)
    tail = (lx + 1.0) / x - lx / (2.0 * x * x) \
        - (1.0 - 2.0 * lx) / (12.0 * x ** 3)
    return -(partial + tail)


def dirichlet_partial(s: complex, n: int, length: int) -> complex:
    """(-1)^n sum_{m<=length} (log m)^n m^(-s) in binary64."""
    m = np.arange(1, length + 1, dtype=np.float64)
    lg = np.log(m)
    w = np.exp(-s.real * lg) * lg ** n if n else np.exp(-s.real * lg)
    p = s.imag * lg
    re = math.fsum(w * np.cos(p))
    im = -math.fsum(w * np.sin(p))
    val = complex(re, im)
    return -val if n & 1 else val
