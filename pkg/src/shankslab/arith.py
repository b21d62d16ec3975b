"""Prime-power sums: the von Mangoldt sieve, Chebyshev-type averages, the
double "true value" sum, and the first two Laurent coefficients of zeta
about its pole.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, SieveLimitError

DEFAULT_SIEVE_LIMIT = 20_000


# ---------------------------------------------------------------------------
# sieve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveTable:
    """Immutable log-weight table: lambda_values[m] is log p when m is a
    power of the prime p, else 0 (index 0 unused)."""

    limit: int
    lambda_values: np.ndarray


def build_sieve(limit: int = DEFAULT_SIEVE_LIMIT) -> SieveTable:
    limit = operator.index(limit)
    if limit < 1:
        raise DomainError(f"sieve limit must be >= 1, got {limit}")
    lam = np.zeros(limit + 1, dtype=np.float64)
    if limit >= 2:
        composite = np.zeros(limit + 1, dtype=bool)
        for p in range(2, limit + 1):
            if composite[p]:
                continue
            composite[p * p::p] = True
            logp = math.log(p)
            q = p
            while q <= limit:
                lam[q] = logp
                q *= p
    lam.flags.writeable = False
    return SieveTable(limit=limit, lambda_values=lam)


@lru_cache(maxsize=4)
def _cached_sieve(limit: int) -> SieveTable:
    return build_sieve(limit)


def default_sieve() -> SieveTable:
    return _cached_sieve(DEFAULT_SIEVE_LIMIT)


def von_mangoldt(m: int, table: SieveTable | None = None) -> float:
    """log p when m = p^k, else 0; falls back to a direct factor probe for
    m beyond the table."""
    m = operator.index(m)
    if m < 1:
        raise DomainError(f"argument must be >= 1, got {m}")
    if table is None:
        table = default_sieve()
    if m <= table.limit:
        return float(table.lambda_values[m])
    # factor probe: find the smallest prime factor, then insist the rest
    # of m is a power of it
    p = None
    if m % 2 == 0:
        p = 2
    else:
        d = 3
        while d * d <= m:
            if m % d == 0:
                p = d
                break
            d += 2
    if p is None:
        return math.log(m)  # m itself is prime
    q = m
    while q % p == 0:
        q //= p
    return math.log(p) if q == 1 else 0.0


# ---------------------------------------------------------------------------
# finite sums over the sieve
# ---------------------------------------------------------------------------

def _sieve_for(x: float, table: SieveTable | None, floor_arg: float,
               what: str) -> SieveTable:
    if not (x >= floor_arg):
        raise DomainError(f"{what} needs argument >= {floor_arg:g}, got {x}")
    if table is None:
        table = default_sieve()
    if x > table.limit:
        raise SieveLimitError(
            f"{what} at {x:g} exceeds the sieve limit {table.limit}")
    return table


def chebyshev_C(x: float, table: SieveTable | None = None) -> float:
    """Sum of von_mangoldt(m)/m over m <= x (grows like log x)."""
    x = float(x)
    table = _sieve_for(x, table, 1.0, "chebyshev_C")
    top = int(math.floor(x))
    lam = table.lambda_values[:top + 1]
    m = np.arange(top + 1, dtype=np.float64)
    m[0] = 1.0
    return float(math.fsum(lam / m))


def weighted_sum(n: int, T: float, table: SieveTable | None = None) -> float:
    """Sum of (log m)^n von_mangoldt(m)/m over m <= T."""
    n = operator.index(n)
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    T = float(T)
    table = _sieve_for(T, table, 2.0, "weighted_sum")
    top = int(math.floor(T))
    lam = table.lambda_values[:top + 1]
    m = np.arange(top + 1, dtype=np.float64)
    m[0] = 1.0
    return float(math.fsum(np.log(m) ** n * lam / m))


def unweighted_sum(n: int, T: float,
                   table: SieveTable | None = None) -> float:
    """Sum of (log m)^n von_mangoldt(m) over m <= T."""
    n = operator.index(n)
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    T = float(T)
    table = _sieve_for(T, table, 1.0, "unweighted_sum")
    top = int(math.floor(T))
    lam = table.lambda_values[:top + 1]
    m = np.arange(top + 1, dtype=np.float64)
    m[0] = 1.0
    return float(math.fsum(np.log(m) ** n * lam))


def true_value_D(n: int, X: float, table: SieveTable | None = None) -> float:
    """Double sum of von_mangoldt(m) (log m)^n over pairs l*m <= X,
    collapsed through the inner count floor(X/m).

    Each weight is repeated floor(X/m) times and the whole multiset is
    fed to fsum, so the result is bitwise equal to the naive double loop
    (fsum is order-independent and correctly rounded).
    """
    n = operator.index(n)
    if n < 1:
        raise DomainError(f"order must be >= 1, got {n}")
    X = float(X)
    table = _sieve_for(X, table, 1.0, "true_value_D")
    top = int(math.floor(X))
    lam = table.lambda_values[:top + 1]
    m = np.arange(top + 1, dtype=np.float64)
    m[0] = 1.0
    weights = lam * np.log(m) ** n
    # floor is stable: X/m sits at least 1/m away from the next integer
    # whenever m does not divide an integral X
    counts = np.floor(X / m).astype(np.int64)
    nz = np.nonzero(weights)[0]
    return float(math.fsum(np.repeat(weights[nz], counts[nz])))


# ---------------------------------------------------------------------------
# Laurent coefficients of zeta about s = 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StieltjesConstants:
    """The coefficients C0, C1 in zeta(s) = 1/(s-1) + C0 + C1 (s-1) + ..."""

    c0: float
    c1: float
    convention: str = "laurent-coefficient"


def stieltjes(k: int) -> float:
    """Laurent coefficient of (s-1)^k in zeta(s) - 1/(s-1), k in {0, 1}.

    Computed from the tail-corrected partial sums
    lim (sum_{m<=N} (log m)^k / m - (log N)^(k+1)/(k+1)); the k = 1
    classical limit is negative, and the Laurent coefficient flips its
    sign. Accurate well below 1e-8 (tail corrections through N^-4 at
    N = 10^5).
    """
    k = operator.index(k)
    if k not in (0, 1):
        raise DomainError(f"only coefficients 0 and 1 are supported, got {k}")
    N = 100_000
    m = np.arange(1, N + 1, dtype=np.float64)
    lx = math.log(N)
    if k == 0:
        s = math.fsum(1.0 / m)
        # f(x) = 1/x: Euler-Maclaurin tail beyond N
        value = s - lx - 0.5 / N + 1.0 / (12.0 * N * N) \
            - 1.0 / (120.0 * N ** 4)
        return value
    s = math.fsum(np.log(m) / m)
    # f(x) = log x / x: f' = (1 - log x)/x^2, f''' = (11 - 6 log x)/x^4
    limit = s - 0.5 * lx * lx - 0.5 * lx / N \
        - (1.0 - lx) / (12.0 * N * N) \
        + (11.0 - 6.0 * lx) / (720.0 * N ** 4)
    return -limit


@lru_cache(maxsize=1)
def stieltjes_constants() -> StieltjesConstants:
    return StieltjesConstants(c0=stieltjes(0), c1=stieltjes(1))


__all__ = [
    "SieveTable", "StieltjesConstants", "DEFAULT_SIEVE_LIMIT", "build_sieve",
    "default_sieve", "von_mangoldt", "chebyshev_C", "weighted_sum",
    "unweighted_sum", "true_value_D", "stieltjes", "stieltjes_constants",
]
