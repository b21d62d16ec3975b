"""Sums of zeta derivatives over the zero table and their predictors.

Covers the discrete moment sums, the smooth main terms, the refined
three-term prediction, the prime-power exponential-sum check, the
series-resummation replay, the dominating-error diagnostic, and the CSV
exports feeding the plotting component.

Every top-level reduction walks per-zero (or per-m) values in fixed index
order with compensated accumulation, so results are bit-reproducible
across runs and thread counts.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from .arith import (
    StieltjesConstants,
    build_sieve,
    default_sieve,
    stieltjes_constants,
    true_value_D,
    unweighted_sum,
    von_mangoldt,
    weighted_sum,
)
from .batch import line_derivatives
from .engine import (
    GRID,
    PIPELINE_PARAMS,
    TWO_PI,
    TWO_PI_LD,
    EvalParams,
    reduced_phases,
)
from .errors import AccuracyError, DomainError, InsufficientDataError
from .summation import (
    compensated_complex_sum,
    compensated_sum,
    parallel_chunk_map,
    resolve_threads,
)
from .zeros import ZeroTable

MAX_MOMENT_ORDER = 5
CHAIN_MAX_ORDER = 3
# stage_A/B cost grows like sum_m #{gamma > m}; quadratic-ish in T
CHAIN_COST_GUARD = 1.0e4
LG_ACCEPT_FACTOR = 10.0

_ZERO_CHUNK = 512
_PHASE_CHUNK = 16384


# ---------------------------------------------------------------------------
# report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LGReport:
    """Exponential sum over zeros at a fixed prime-power frequency."""

    m: int
    T: float
    empirical: complex
    predicted: float
    bound: float
    ratio: float


@dataclass(frozen=True)
class ChainReport:
    """Three resummations of the same double sum plus the true value."""

    n: int
    T: float
    stage_A: complex
    stage_B: complex
    stage_C: float
    S_n: complex
    deviations: dict[str, float]


@dataclass(frozen=True)
class ShanksVerdict:
    """Mean of the moment summand with its sign and imaginary defect."""

    mean: complex
    sign_ok: bool
    im_ratio: float


@dataclass(frozen=True)
class MomentCheckpoint:
    T: float
    empirical: complex
    leading: float
    fujii: float | None
    true_value: float
    residual_leading: float
    residual_true: float


@dataclass(frozen=True)
class MomentSeries:
    n: int
    checkpoints: tuple[MomentCheckpoint, ...]


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _validate_order(n: int, hi: int) -> int:
    n = operator.index(n)
    if not (1 <= n <= hi):
        raise DomainError(f"derivative order must be in [1, {hi}], got {n}")
    return n


def _validate_height(table: ZeroTable, T: float) -> float:
    T = float(T)
    if not math.isfinite(T) or T < 0.0:
        raise DomainError(f"height must be finite and >= 0, got {T}")
    if T > table.t_max:
        raise DomainError(
            f"height {T:g} exceeds the table's verified range {table.t_max:g}")
    return T


def _count_below(table: ZeroTable, T: float) -> int:
    return int(np.searchsorted(table.gammas, T, side="right"))


def _zeta_rows(table: ZeroTable, n: int, params: EvalParams,
               threads: int) -> np.ndarray:
    """zeta^(n)(1/2 + i gamma) for every table entry, cached on the table.

    Values are chunked on a fixed grid inside line_derivatives, so the
    cache content is independent of the thread count.
    """
    cache = table.__dict__.setdefault("_moment_rows", {})
    key = (n, params)
    vals = cache.get(key)
    if vals is None:
        vals = line_derivatives(table.gammas, (n,), params, threads)[n]
        vals.flags.writeable = False
        cache[key] = vals
    return vals


def _sieve_covering(T: float):
    tab = default_sieve()
    if T > tab.limit:
        tab = build_sieve(int(math.ceil(T)))
    return tab


# ---------------------------------------------------------------------------
# discrete sums and predictors
# ---------------------------------------------------------------------------

def discrete_sum(n: int, table: ZeroTable, T: float,
                 params: EvalParams = PIPELINE_PARAMS, *,
                 threads: int | None = None) -> complex:
    """Sum of zeta^(n)(1/2 + i gamma) over table zeros with gamma <= T.

    Fixed index order with compensated accumulation; bit-reproducible.
    """
    n = _validate_order(n, MAX_MOMENT_ORDER)
    T = _validate_height(table, T)
    rows = _zeta_rows(table, n, params, resolve_threads(threads))
    return compensated_complex_sum(rows[:_count_below(table, T)])


def leading_term(n: int, T: float) -> float:
    """Main term (-1)^(n+1)/(n+1) * (T/2pi) * log(T/2pi)^(n+1)."""
    n = operator.index(n)
    if n < 1:
        raise DomainError(f"order must be >= 1, got {n}")
    T = float(T)
    if T <= TWO_PI:
        raise DomainError(f"height must exceed 2*pi, got {T}")
    a = T / TWO_PI
    sign = 1.0 if n % 2 == 1 else -1.0
    return sign / (n + 1) * a * math.log(a) ** (n + 1)


def fujii_prediction(T: float,
                     consts: StieltjesConstants | None = None) -> float:
    """Three-term refinement of the n = 1 main term.

    The first term is produced by leading_term(1, T) itself so the two
    agree exactly, not merely to rounding.
    """
    T = float(T)
    if T <= TWO_PI:
        raise DomainError(f"height must exceed 2*pi, got {T}")
    if consts is None:
        consts = stieltjes_constants()
    a = T / TWO_PI
    L = math.log(a)
    c0, c1 = consts.c0, consts.c1
    return (leading_term(1, T)
            + (-1.0 + c0) * a * L
            + (1.0 - c0 - c0 * c0 + 3.0 * c1) * a)


def landau_gonek(m: int, table: ZeroTable, T: float, *,
                 threads: int | None = None) -> LGReport:
    """Exponential sum m^(-1/2) sum_{gamma<=T} e^(-i gamma log m) against
    its smooth prediction -(T/2pi) Lambda(m)/m."""
    m = operator.index(m)
    if m < 2:
        raise DomainError(f"frequency must be >= 2, got {m}")
    T = _validate_height(table, T)
    if T <= 0.0:
        raise DomainError("height must be positive")
    gam = table.gammas[:_count_below(table, T)]
    if m < GRID.size:
        logm_ld = GRID.logm_ld()[m]
    else:
        logm_ld = np.log(np.longdouble(m))
    gam_ld = gam.astype(np.longdouble)

    def work(a, b):
        ph = np.mod(gam_ld[a:b] * logm_ld, TWO_PI_LD).astype(np.float64)
        return np.cos(ph) - 1j * np.sin(ph)

    pieces = parallel_chunk_map(work, gam.size, _PHASE_CHUNK,
                                resolve_threads(threads))
    terms = np.concatenate(pieces) if pieces else np.empty(0, complex)
    empirical = compensated_complex_sum(terms) / math.sqrt(m)
    predicted = -(T / TWO_PI) * von_mangoldt(m) / m + 0.0
    bound = math.log(2.0 * m * T) * math.log(math.log(3.0 * m))
    ratio = abs(empirical - predicted) / bound
    return LGReport(m=m, T=T, empirical=empirical, predicted=predicted,
                    bound=bound, ratio=ratio)


# ---------------------------------------------------------------------------
# the resummation replay
# ---------------------------------------------------------------------------

def _chain_stage_A(n: int, gam: np.ndarray, threads: int) -> complex:
    """(-1)^n sum over zeros of the series for zeta^(n) truncated at gamma."""
    wrow = GRID.weight_row(n)
    fact = float(math.factorial(n))

    def work(a, b):
        out = np.empty(b - a, dtype=np.complex128)
        for i in range(a, b):
            t = float(gam[i])
            N = int(math.floor(t))
            ph = reduced_phases(t, N)
            w = wrow[1:N + 1]
            re = float(np.dot(w, np.cos(ph)))
            im = -float(np.dot(w, np.sin(ph)))
            out[i - a] = fact * complex(re, im)
        return out

    pieces = parallel_chunk_map(work, gam.size, _ZERO_CHUNK, threads)
    vals = np.concatenate(pieces) if pieces else np.empty(0, complex)
    sign = -1.0 if n % 2 == 1 else 1.0
    return sign * compensated_complex_sum(vals)


def _chain_stage_B(n: int, gam: np.ndarray, T: float,
                   threads: int) -> complex:
    """Same double sum with m outermost: gamma ranges over (m, T]."""
    top = int(math.floor(T))
    wrow = GRID.weight_row(n)
    fact = float(math.factorial(n))
    logm_ld = GRID.logm_ld()
    gam_ld = gam.astype(np.longdouble)
    starts = np.searchsorted(gam, np.arange(2, top + 1), side="right")

    def work(a, b):
        out = np.zeros(b - a, dtype=np.complex128)
        for i in range(a, b):
            m = i + 2
            lo = int(starts[i])
            if lo >= gam.size:
                continue
            ph = np.mod(gam_ld[lo:] * logm_ld[m],
                        TWO_PI_LD).astype(np.float64)
            re = float(np.sum(np.cos(ph)))
            im = -float(np.sum(np.sin(ph)))
            out[i - a] = (fact * wrow[m]) * complex(re, im)
        return out

    pieces = parallel_chunk_map(work, top - 1, _ZERO_CHUNK, threads)
    vals = np.concatenate(pieces) if pieces else np.empty(0, complex)
    sign = -1.0 if n % 2 == 1 else 1.0
    return sign * compensated_complex_sum(vals)


def heuristic_chain(n: int, table: ZeroTable, T: float,
                    params: EvalParams = PIPELINE_PARAMS, *,
                    allow_large: bool = False, sieve=None,
                    threads: int | None = None) -> ChainReport:
    """Replay the resummation: the truncated double sum both ways, the
    prime-power substitution, and the true discrete sum."""
    n = _validate_order(n, CHAIN_MAX_ORDER)
    T = _validate_height(table, T)
    if T > CHAIN_COST_GUARD and not allow_large:
        raise DomainError(
            f"height {T:g} exceeds the cost guard {CHAIN_COST_GUARD:g}; "
            "pass allow_large=True to override")
    nthreads = resolve_threads(threads)
    gam = table.gammas[:_count_below(table, T)]
    stage_A = _chain_stage_A(n, gam, nthreads)
    stage_B = _chain_stage_B(n, gam, T, nthreads)
    if sieve is None:
        sieve = _sieve_covering(T)
    sign = 1.0 if n % 2 == 1 else -1.0
    stage_C = sign * ((T / TWO_PI) * weighted_sum(n, T, sieve)
                      - unweighted_sum(n, T, sieve) / TWO_PI)
    S_n = discrete_sum(n, table, T, params, threads=threads)
    dev_ab = abs(stage_A - stage_B)
    if dev_ab > 1e-9 * abs(stage_A):
        raise AccuracyError(
            f"reordered stages disagree: |A - B| = {dev_ab:.3g} vs "
            f"|A| = {abs(stage_A):.3g}")
    deviations = {
        "a_vs_b": dev_ab,
        "a_vs_s": abs(stage_A - S_n),
        "b_vs_s": abs(stage_B - S_n),
        "c_vs_re_s": abs(stage_C - S_n.real),
    }
    return ChainReport(n=n, T=T, stage_A=stage_A, stage_B=stage_B,
                       stage_C=stage_C, S_n=S_n, deviations=deviations)


def error_bound_diag(n: int, T: float) -> float:
    """log T * sum_{m<=T} (log m)^n loglog(3m), the unconditional error
    scale that dominates the main term."""
    n = operator.index(n)
    if n < 1:
        raise DomainError(f"order must be >= 1, got {n}")
    T = float(T)
    if T < 3.0:
        raise DomainError(f"height must be >= 3, got {T}")
    m = np.arange(2, int(math.floor(T)) + 1, dtype=np.float64)
    return math.log(T) * compensated_sum(
        np.log(m) ** n * np.log(np.log(3.0 * m)))


def shanks_verdict(n: int, table: ZeroTable, T: float,
                   params: EvalParams = PIPELINE_PARAMS, *,
                   threads: int | None = None) -> ShanksVerdict:
    """Mean summand over zeros up to T with the sign-law check."""
    n = _validate_order(n, MAX_MOMENT_ORDER)
    T = _validate_height(table, T)
    count = _count_below(table, T)
    if count < 100:
        raise InsufficientDataError(
            f"need at least 100 zeros below {T:g}, table has {count}")
    mean = discrete_sum(n, table, T, params, threads=threads) / count
    sign_ok = mean.real > 0.0 if n % 2 == 1 else mean.real < 0.0
    im_ratio = abs(mean.imag) / abs(mean.real) if mean.real != 0.0 \
        else math.inf
    return ShanksVerdict(mean=mean, sign_ok=sign_ok, im_ratio=im_ratio)


# ---------------------------------------------------------------------------
# series assembly and exports
# ---------------------------------------------------------------------------

# half-decade zero counts; a geometric ladder dense enough that a 10^4-zero
# table still yields five checkpoints
_AUTO_COUNT_LADDER = (100, 316, 1000, 3162, 10000, 31623, 100000)


def auto_checkpoints(table: ZeroTable) -> list[float]:
    """Heights at which the table's zero count crosses the count ladder."""
    return [float(table.entries[c - 1].gamma)
            for c in _AUTO_COUNT_LADDER if c <= len(table.entries)]


def moment_series(n: int, table: ZeroTable, checkpoints,
                  params: EvalParams = PIPELINE_PARAMS, *,
                  sieve=None, threads: int | None = None) -> MomentSeries:
    """Empirical sums and every predictor at each checkpoint height."""
    n = _validate_order(n, MAX_MOMENT_ORDER)
    Ts = sorted(float(T) for T in checkpoints)
    if not Ts:
        raise DomainError("need at least one checkpoint")
    for T in Ts:
        if T <= TWO_PI:
            raise DomainError(f"checkpoint {T:g} must exceed 2*pi")
        _validate_height(table, T)
    consts = stieltjes_constants()
    sign = 1.0 if n % 2 == 1 else -1.0
    if sieve is None:
        sieve = _sieve_covering(Ts[-1] / TWO_PI)
    rows = []
    for T in Ts:
        emp = discrete_sum(n, table, T, params, threads=threads)
        lead = leading_term(n, T)
        fuj = fujii_prediction(T, consts) if n == 1 else None
        tv = sign * true_value_D(n, T / TWO_PI, sieve)
        rows.append(MomentCheckpoint(
            T=T, empirical=emp, leading=lead, fujii=fuj, true_value=tv,
            residual_leading=emp.real - lead, residual_true=emp.real - tv))
    return MomentSeries(n=n, checkpoints=tuple(rows))


def export_moment_csv(series: MomentSeries, path) -> int:
    """One row per checkpoint; fujii column blank except at order 1."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("T,n,empirical_re,empirical_im,leading,fujii,"
                 "true_value,residual_leading,residual_true\n")
        for cp in series.checkpoints:
            fuj = "" if cp.fujii is None else f"{cp.fujii:.17g}"
            fh.write(f"{cp.T:.17g},{series.n},{cp.empirical.real:.17g},"
                     f"{cp.empirical.imag:.17g},{cp.leading:.17g},{fuj},"
                     f"{cp.true_value:.17g},{cp.residual_leading:.17g},"
                     f"{cp.residual_true:.17g}\n")
    return len(series.checkpoints)


def scatter_export(n: int, table: ZeroTable, path,
                   params: EvalParams = PIPELINE_PARAMS, *,
                   threads: int | None = None) -> int:
    """CSV of zeta^(n) at every table zero: index,gamma,re,im."""
    n = _validate_order(n, MAX_MOMENT_ORDER)
    rows = _zeta_rows(table, n, params, resolve_threads(threads))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("index,gamma,re,im\n")
        for entry, val in zip(table.entries, rows):
            fh.write(f"{entry.index},{entry.gamma:.17g},"
                     f"{val.real:.17g},{val.imag:.17g}\n")
    return len(table.entries)


__all__ = [
    "LGReport", "ChainReport", "ShanksVerdict", "MomentCheckpoint",
    "MomentSeries", "MAX_MOMENT_ORDER", "CHAIN_MAX_ORDER",
    "CHAIN_COST_GUARD", "LG_ACCEPT_FACTOR", "discrete_sum", "leading_term",
    "fujii_prediction", "landau_gonek", "heuristic_chain",
    "error_bound_diag", "shanks_verdict", "auto_checkpoints",
    "moment_series", "export_moment_csv", "scatter_export",
]
