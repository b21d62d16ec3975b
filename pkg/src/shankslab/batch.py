"""Vectorized critical-line evaluation and certified local Taylor models.

The scan and refinement stages need zeta(1/2 + it) at many ordinates, plus
polynomial surrogates accurate to ~1e-10 around each scan anchor.  Both come
out of the same chunked pass: one cos/sin row per ordinate (the dominant
cost), then dot products against cached m^(-1/2) (log m)^j / j! rows give
the function value and all Taylor coefficients in one sweep.

Determinism: work is split on a fixed index grid (_ROW_CHUNK), each row's
reduction is independent of every other row, and no BLAS reductions are
used, so results are bit-identical for any thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    GRID, DEFAULT_PARAMS, EvalParams, T_MAX, TWO_PI, TWO_PI_LD, PHASE_EPS,
    _LD, main_sum_length, theta_deriv, theta_mod_two_pi, _em_correction,
)
from .errors import AccuracyError, DomainError
from .summation import parallel_chunk_map

__all__ = ["line_derivatives", "hardy_values", "build_models", "TaylorTable",
           "MODEL_DEGREE"]

_ROW_CHUNK = 64          # ordinates per work item; part of the output contract
_SUB_BYTES = 32 << 20    # per-buffer cap for the trig workspace
_EPS = float(np.finfo(np.float64).eps)

MODEL_DEGREE = 31

_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)    # i**j
_MI_POW = (1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j)   # (-i)**j


def _validate_ts(ts) -> np.ndarray:
    arr = np.ascontiguousarray(ts, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError("ordinates must form a 1-D array")
    if arr.size == 0:
        return arr
    if not np.all(np.isfinite(arr)):
        raise DomainError("ordinates must be finite")
    if float(arr.min()) < 0.0 or float(arr.max()) > T_MAX:
        raise DomainError(f"ordinates must lie in [0, {T_MAX:g}]")
    return arr


def _dot_chunk(ts: np.ndarray, js, params: EvalParams):
    """Raw row dots for one chunk sharing a single cutoff.

    Returns (N, {j: (dot_j, corr_j, est_j)}) where dot_j is the complex
    vector sum_{m<=N} w_j[m] e^{-i t log m} with w_j = m^(-1/2)(log m)^j/j!,
    and corr_j/est_j are the continuation value and remainder estimate of
    the j-th derivative at s = 1/2 + it.
    """
    B = ts.size
    N = main_sum_length(float(ts.max()), params)
    xl = GRID.logm_ld()[1:N + 1]
    dots = {j: np.empty(B, dtype=np.complex128) for j in js}
    sub = max(1, min(B, _SUB_BYTES // (8 * N)))
    prod = None
    for a in range(0, B, sub):
        tb = ts[a:a + sub]
        pl = np.multiply.outer(tb.astype(_LD), xl)
        np.mod(pl, TWO_PI_LD, out=pl)
        phases = pl.astype(np.float64)
        del pl
        cosr = np.cos(phases)
        np.sin(phases, out=phases)      # phases now holds the sine row
        if prod is None or prod.shape != cosr.shape:
            prod = np.empty_like(cosr)
        for j in js:
            w = GRID.weight_row(j)[1:N + 1]
            np.multiply(cosr, w, out=prod)
            re = prod.sum(axis=1)
            np.multiply(phases, w, out=prod)
            im = -prod.sum(axis=1)
            dots[j][a:a + sub] = re + 1j * im
    s = 0.5 + 1j * ts
    out = {}
    for j in js:
        corr, est = _em_correction(s, j, float(N), params.bernoulli_order)
        out[j] = (dots[j], corr, est)
    return N, out


def line_derivatives(ts, j_list, params: EvalParams = DEFAULT_PARAMS,
                     threads: int = 1) -> dict[int, np.ndarray]:
    """zeta^(j)(1/2 + it) for each t in `ts` and each j in `j_list`.

    Rows in one fixed-size chunk share the longest cutoff of the chunk, so
    values agree with the scalar evaluator to the accuracy target rather
    than bitwise.  Raises AccuracyError when any remainder estimate exceeds
    the target.
    """
    ts = _validate_ts(ts)
    js = sorted(set(int(j) for j in j_list))
    if js and (js[0] < 0 or js[-1] > 8):
        raise DomainError("derivative orders must be in [0, 8]")
    out = {j: np.empty(ts.size, dtype=np.complex128) for j in js}
    if ts.size == 0 or not js:
        return out

    def work(a, b):
        return a, _dot_chunk(ts[a:b], js, params)[1]

    for a, rows in parallel_chunk_map(work, ts.size, _ROW_CHUNK, threads):
        for j, (dot, corr, est) in rows.items():
            worst = float(np.max(est))
            if worst > params.target_abs_error:
                raise AccuracyError(
                    f"remainder estimate {worst:.3g} exceeds target "
                    f"{params.target_abs_error:.3g} in row chunk at "
                    f"t~{ts[a]:.6g}, j={j}")
            sign = -1.0 if j & 1 else 1.0
            out[j][a:a + dot.size] = sign * math.factorial(j) * dot + corr
    return out


def hardy_values(ts, params: EvalParams = DEFAULT_PARAMS,
                 threads: int = 1) -> np.ndarray:
    """Vectorized real sign function Re(e^{i theta(t)} zeta(1/2+it))."""
    ts = _validate_ts(ts)
    if ts.size and float(ts.min()) < TWO_PI:
        raise DomainError(f"requires t >= 2*pi, got {float(ts.min())}")
    vals = line_derivatives(ts, (0,), params, threads)[0]
    rot = np.exp(1j * theta_mod_two_pi(ts)) * vals
    if ts.size and float(np.max(np.abs(rot.imag))) > \
            100.0 * params.target_abs_error:
        raise AccuracyError("rotated values have non-negligible imaginary "
                            "part; inconsistent evaluation")
    return np.ascontiguousarray(rot.real)


# ---------------------------------------------------------------------------
# local Taylor models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TaylorTable:
    """Piecewise polynomial surrogate for zeta on the critical line.

    Row i models zeta(1/2 + i(centers[i] + d)) = sum_j coeffs[i, j] d**j for
    |d| <= radius[i], with certified sup error bound[i] (series tail beyond
    the stored degree, continuation remainder estimates, and worst-case dot
    roundoff, all added).
    """

    centers: np.ndarray
    coeffs: np.ndarray
    radius: np.ndarray
    bound: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def worst_bound(self) -> float:
        return float(self.bound.max()) if self.bound.size else 0.0

    def _select(self, tq):
        tq = np.asarray(tq, dtype=np.float64)
        flat = np.atleast_1d(tq)
        idx = np.searchsorted(self.centers, flat)
        idx = np.clip(idx, 1, self.centers.size - 1)
        left = idx - 1
        use_left = (flat - self.centers[left]) <= (self.centers[idx] - flat)
        sel = np.where(use_left, left, idx)
        delta = flat - self.centers[sel]
        over = np.abs(delta) - self.radius[sel]
        if flat.size and float(over.max()) > 1e-9:
            k = int(np.argmax(over))
            raise DomainError(
                f"query t={flat[k]:.9g} lies {over[k]:.3g} beyond model "
                f"coverage around {self.centers[sel[k]]:.9g}")
        return tq, sel, delta

    def zeta_at(self, tq):
        tq, sel, delta = self._select(tq)
        val = self.coeffs[sel, self.degree].copy()
        for j in range(self.degree - 1, -1, -1):
            val *= delta
            val += self.coeffs[sel, j]
        return complex(val[0]) if tq.ndim == 0 else val

    def z_at(self, tq):
        tq, sel, delta = self._select(tq)
        val = self.coeffs[sel, self.degree].copy()
        for j in range(self.degree - 1, -1, -1):
            val *= delta
            val += self.coeffs[sel, j]
        flat = np.atleast_1d(tq)
        out = (np.exp(1j * theta_mod_two_pi(flat)) * val).real
        return float(out[0]) if tq.ndim == 0 else out

    def deriv_at(self, tq, n: int):
        """zeta^(n) at 1/2 + i tq from the local model (n <= degree)."""
        n = int(n)
        if not 0 <= n <= self.degree:
            raise DomainError(f"model derivative order must be <= {self.degree}")
        tq, sel, delta = self._select(tq)
        val = self.coeffs[sel, self.degree] * float(math.perm(self.degree, n))
        for j in range(self.degree - 1, n - 1, -1):
            val *= delta
            val += self.coeffs[sel, j] * float(math.perm(j, n))
        val = val * _MI_POW[n & 3]
        return complex(val[0]) if tq.ndim == 0 else val

    def z_deriv_at(self, tq):
        """dZ/dt from the local model (for slope diagnostics)."""
        tq, sel, delta = self._select(tq)
        f = self.coeffs[sel, self.degree].copy()
        for j in range(self.degree - 1, -1, -1):
            f *= delta
            f += self.coeffs[sel, j]
        fp = self.coeffs[sel, self.degree] * float(self.degree)
        for j in range(self.degree - 1, 0, -1):
            fp *= delta
            fp += self.coeffs[sel, j] * float(j)
        flat = np.atleast_1d(tq)
        rot = np.exp(1j * theta_mod_two_pi(flat))
        out = (rot * (1j * theta_deriv(flat) * f + fp)).real
        return float(out[0]) if tq.ndim == 0 else out


def _model_chunk(centers: np.ndarray, radius: np.ndarray, degree: int,
                 params: EvalParams):
    js = range(degree + 1)
    N, rows = _dot_chunk(centers, js, params)
    B = centers.size
    coeffs = np.empty((B, degree + 1), dtype=np.complex128)
    est_part = np.zeros(B)
    rpow = np.ones(B)
    round_part = np.zeros(B)
    # worst-case per-term slack: pairwise-sum rounding plus the reduced
    # phase error, both scaled by the positive weight sums
    per_term = _EPS * (math.log2(N) + 8.0) + \
        PHASE_EPS * float(centers.max()) * math.log(N) + 4e-16
    for j in js:
        dot, corr, est = rows[j]
        coeffs[:, j] = _MI_POW[j & 3] * dot + _I_POW[j & 3] * corr \
            / math.factorial(j)
        est_part += est * rpow / math.factorial(j)
        round_part += per_term * float(GRID.weight_prefix(j)[N]) * rpow
        rpow = rpow * radius
    # tail beyond the stored degree: continuation part estimated from the
    # next derivative, main-sum part bounded by the positive weight sums
    s = 0.5 + 1j * centers
    corr_next, est_next = _em_correction(s, degree + 1, float(N),
                                         params.bernoulli_order)
    y = radius * math.log(N)
    kappa = 1.0 / (1.0 - y / (degree + 2))
    vtail = float(GRID.weight_prefix(degree + 1)[N])
    series = kappa * rpow * (vtail + (np.abs(corr_next) + est_next)
                             / math.factorial(degree + 1))
    bound = series + est_part + round_part
    return coeffs, bound


def build_models(centers, params: EvalParams = DEFAULT_PARAMS,
                 degree: int = MODEL_DEGREE, threads: int = 1,
                 pad: float = 1.25, y_cap: float = 4.6) -> TaylorTable:
    """Build Taylor models at ascending centers covering to the midpoints
    of adjacent gaps with `pad` margin.

    The caller must supply a grid dense enough that radius * log(cutoff)
    stays below y_cap; the remainder series beyond the stored degree then
    contributes under 1e-12.
    """
    centers = _validate_ts(centers)
    if centers.size < 2:
        raise DomainError("need at least two model centers")
    if float(centers.min()) < TWO_PI:
        raise DomainError("model centers must satisfy t >= 2*pi")
    gaps = np.diff(centers)
    if float(gaps.min()) <= 0.0:
        raise DomainError("model centers must be strictly increasing")
    half = 0.5 * gaps
    radius = pad * np.maximum(np.concatenate(([half[0]], half)),
                              np.concatenate((half, [half[-1]])))
    lens = np.array([main_sum_length(t, params)
                     for t in centers], dtype=np.float64)
    y = radius * np.log(lens)
    if float(y.max()) > y_cap:
        k = int(np.argmax(y))
        raise DomainError(
            f"model grid too sparse near t={centers[k]:.6g}: radius "
            f"{radius[k]:.3g} needs y={y[k]:.3g} > cap {y_cap}")

    def work(a, b):
        return _model_chunk(centers[a:b], radius[a:b], degree, params)

    parts = parallel_chunk_map(work, centers.size, _ROW_CHUNK, threads)
    coeffs = np.concatenate([p[0] for p in parts], axis=0)
    bound = np.concatenate([p[1] for p in parts])
    return TaylorTable(centers=centers, coeffs=coeffs,
                       radius=radius, bound=bound)
