"""Ordered table of critical-line zero ordinates.

Production: walk classical Gram intervals, count sign changes of Z against
each block's nominal zero count, subdivide stubborn blocks, and refine every
bracketed root.  Refinement runs on certified local polynomial models with a
final polish and residual measurement against the direct evaluator, so each
accepted ordinate carries a genuine |Z(gamma)|.

Verification: structural invariants, sampled residual recomputation, and
zero-count checkpoints snapped to nearby Gram points so the smooth count
approximation can be compared without being confused by its own rounding.

Persistence: a binary format (magic "ZTBL") and a plain-text format, both
round-tripping ordinates bit-exactly.
"""

from __future__ import annotations

import math
import operator
import os
import re
import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .batch import build_models, hardy_values
from .engine import (PIPELINE_PARAMS, T_MAX, TWO_PI, EvalParams, hardy_z,
                     main_sum_length, theta, theta_deriv)
from .errors import (AccuracyError, DomainError, MissedZeroError,
                     TableFormatError, VerificationError)
from .summation import resolve_threads

MAX_ZERO_COUNT = 200_000
FIRST_ORDINATE_FLOOR = 14.0
COMPUTED_RESIDUAL_BOUND = 1e-8
IMPORTED_RESIDUAL_BOUND = 1e-6
BRACKET_WIDTH = 1e-10

_HALF_BRACKET = 0.5 * BRACKET_WIDTH
_BISECT_WIDTH = 1e-6          # handoff width between bisection and polish
_BAD_POINT_FLOOR = 1e-12      # |Z| at an anchor below this: not sign-definite
_BLOCK_LADDER = (64, 256, 1024)
_CHUNK_INTERVALS = 2048
_CHECK_CLEARANCE = 0.05
_SNAP_OFFSETS = (0, -1, 1, -2, 2, -3, 3)
_LADDER_COUNTS = (100, 316, 1000, 3162, 10000, 31623, 100000)

_BINARY_HEADER = struct.Struct("<4sBQd")
_BINARY_MAGIC = b"ZTBL"
_BINARY_VERSION = 1
_TMAX_LINE = re.compile(r"^#\s*t_max\s*=\s*(\S+)\s*$")


# ---------------------------------------------------------------------------
# table types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    """One accepted ordinate with its measured residual |Z(gamma)|."""

    index: int
    gamma: float
    residual: float
    source: str = "computed"


@dataclass(frozen=True)
class ZeroTable:
    """Ordered ordinates plus the upper end of the fully verified range."""

    entries: tuple[Zero, ...]
    t_max: float

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def gammas(self) -> np.ndarray:
        g = np.array([z.gamma for z in self.entries], dtype=np.float64)
        g.flags.writeable = False
        return g

    def count_up_to(self, T: float) -> int:
        return int(np.searchsorted(self.gammas, float(T), side="right"))


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of verify_table; failures are data, not exceptions."""

    passed: bool
    checks: tuple[str, ...]
    failures: tuple[str, ...]
    first_failure: str | None


# ---------------------------------------------------------------------------
# smooth count and Gram points
# ---------------------------------------------------------------------------

def count_zeros_rvm(T):
    """Smooth approximation theta(T)/pi + 1 to the number of ordinates <= T.

    The oscillating part of the true count is handled by the verification
    logic, which compares rounded values at points safely away from zeros.
    """
    arr = np.asarray(T, dtype=np.float64)
    if arr.size and float(np.min(arr)) < 10.0:
        raise DomainError(
            f"count approximation needs T >= 10, got {np.min(arr)}")
    out = np.asarray(theta(arr)) / math.pi + 1.0
    return float(out) if arr.ndim == 0 else out


def _gram_points(ks: np.ndarray) -> np.ndarray:
    """Solve theta(g_k) = k*pi for each k >= -1 (vectorized Newton)."""
    ks = np.asarray(ks, dtype=np.float64)
    if ks.size == 0:
        return np.empty(0)
    if float(ks.min()) < -1.0:
        raise DomainError("Gram index must be >= -1")
    # seed from the leading term: with u = t/2pi, theta ~ pi(u ln u - u) - pi/8
    c = ks + 0.125
    u = np.maximum(
        1.2, c / np.maximum(np.log(np.maximum(c, 3.0)) - 1.0, 0.2))
    for _ in range(40):
        u = u - (u * (np.log(u) - 1.0) - c) / np.log(np.maximum(u, 1.05))
        u = np.maximum(u, 1.05)
    g = TWO_PI * u
    kpi = ks * math.pi
    for _ in range(4):
        g = g - (np.asarray(theta(g)) - kpi) / np.asarray(theta_deriv(g))
    return g


def gram_point(k: int) -> float:
    """Ordinate g_k of the k-th Gram point, theta(g_k) = k*pi, k >= -1."""
    k = operator.index(k)
    if k < -1:
        raise DomainError(f"Gram index must be >= -1, got {k}")
    return float(_gram_points(np.array([k], dtype=np.float64))[0])


# ---------------------------------------------------------------------------
# scan: blocks, subdivision ladder, refinement
# ---------------------------------------------------------------------------

def _scan_centers(grams: np.ndarray, params: EvalParams) -> np.ndarray:
    """Gram anchors plus midpoint insertions where gaps are too wide for
    model building (low heights have few terms but huge gaps)."""
    lens = np.array([main_sum_length(t, params) for t in grams[1:]],
                    dtype=np.float64)
    allowed = 2.0 * 4.55 / (1.25 * np.log(lens))
    gaps = np.diff(grams)
    extra = np.maximum(0, np.ceil(gaps / allowed).astype(int) - 1)
    need = np.flatnonzero(extra)
    if need.size == 0:
        return grams
    inserts = [np.linspace(grams[i], grams[i + 1], extra[i] + 2)[1:-1]
               for i in need]
    return np.sort(np.concatenate([grams] + inserts))


def _block_grids(seg: np.ndarray, min_level: int):
    """Successively finer scan grids across one block."""
    if min_level == 1:
        yield seg
    else:
        offs = np.arange(min_level, dtype=np.float64) / min_level
        pts = (seg[:-1, None] * (1.0 - offs) + seg[1:, None] * offs).ravel()
        yield np.append(pts, seg[-1])
    for level in _BLOCK_LADDER:
        yield np.linspace(seg[0], seg[-1], level + 1)


def _block_brackets(evalf, grams: np.ndarray, ks0: int, a: int, b: int,
                    min_level: int):
    """Bracket each of the block's nominal zeros by a sign change.

    The block spans Gram indices ks0+a .. ks0+b and must contain exactly
    b - a zeros; the grid is refined through the subdivision ladder until
    the sign-change count matches.
    """
    n = b - a
    seg = grams[a:b + 1]
    found = -1
    for pts in _block_grids(seg, min_level):
        z = np.asarray(evalf(pts))
        sgn = np.signbit(z)
        flip = sgn[:-1] != sgn[1:]
        found = int(np.count_nonzero(flip))
        if found == n:
            i = np.flatnonzero(flip)
            return pts[i], pts[i + 1]
    raise MissedZeroError(
        f"scan block at Gram indices {ks0 + a}..{ks0 + b} "
        f"(t in [{seg[0]:.6f}, {seg[-1]:.6f}]): expected {n} sign "
        f"changes, found {found} at the finest subdivision",
        block=(float(seg[0]), float(seg[-1])), expected=n, found=found)


def _scalar_root(lo: float, hi: float, params: EvalParams) -> float:
    """Plain bisection on the direct evaluator (rescue path)."""
    zlo = hardy_z(lo, params)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _HALF_BRACKET:
            break
        zm = hardy_z(mid, params)
        if (zm < 0.0) == (zlo < 0.0):
            lo, zlo = mid, zm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _certify(x, slope_fn, lo0, hi0, params: EvalParams, threads: int):
    """Verify a true sign change across [x-h, x+h] and measure |Z(x)|.

    Retries with Newton corrections from the direct evaluator, then falls
    back to scalar bisection for any stragglers.
    """
    offs = np.array([-_HALF_BRACKET, 0.0, _HALF_BRACKET])
    ok = np.zeros(x.size, dtype=bool)
    zt = None
    for _ in range(4):
        trip = (x[:, None] + offs).ravel()
        zt = hardy_values(trip, params, threads).reshape(-1, 3)
        ok = (np.signbit(zt[:, 0]) != np.signbit(zt[:, 2])) \
            & (np.abs(zt[:, 1]) <= COMPUTED_RESIDUAL_BOUND)
        if bool(ok.all()):
            return x, np.abs(zt[:, 1])
        d = np.asarray(slope_fn(x), dtype=np.float64)
        d = np.where(np.abs(d) < 1e-9, np.where(d < 0, -1e-9, 1e-9), d)
        x = np.where(ok, x, np.clip(x - zt[:, 1] / d, lo0, hi0))
    x = x.copy()
    for i in np.flatnonzero(~ok):
        x[i] = _scalar_root(float(lo0[i]), float(hi0[i]), params)
    trip = (x[:, None] + offs).ravel()
    zt = hardy_values(trip, params, threads).reshape(-1, 3)
    ok = (np.signbit(zt[:, 0]) != np.signbit(zt[:, 2])) \
        & (np.abs(zt[:, 1]) <= COMPUTED_RESIDUAL_BOUND)
    if not bool(ok.all()):
        k = int(np.flatnonzero(~ok)[0])
        raise AccuracyError(
            f"root refinement stalled near t={x[k]:.9f}: |Z|="
            f"{abs(zt[k, 1]):.3g} with no certified sign change")
    return x, np.abs(zt[:, 1])


def _refine_on_model(model, lo, hi, params: EvalParams, threads: int):
    """Bisection and Newton on the local models, then direct polish."""
    lo0, hi0 = lo.copy(), hi.copy()
    zlo = np.asarray(model.z_at(lo))
    while float(np.max(hi - lo)) > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        zm = np.asarray(model.z_at(mid))
        west = np.signbit(zm) == np.signbit(zlo)
        lo = np.where(west, mid, lo)
        zlo = np.where(west, zm, zlo)
        hi = np.where(west, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(3):
        f = np.asarray(model.z_at(x))
        d = np.asarray(model.z_deriv_at(x))
        d = np.where(np.abs(d) < 1e-9, np.where(d < 0, -1e-9, 1e-9), d)
        x = np.clip(x - f / d, lo, hi)
    # one Newton step against the direct evaluator removes the model bias
    z = hardy_values(x, params, threads)
    d = np.asarray(model.z_deriv_at(x))
    d = np.where(np.abs(d) < 1e-9, np.where(d < 0, -1e-9, 1e-9), d)
    x = np.clip(x - z / d, lo0, hi0)
    return _certify(x, model.z_deriv_at, lo0, hi0, params, threads)


def _refine_direct(lo, hi, params: EvalParams, threads: int):
    """Bisection to 1e-6 then secant iterations, all on the direct
    evaluator (the literal, slower refinement route)."""
    lo0, hi0 = lo.copy(), hi.copy()
    zlo = hardy_values(lo, params, threads)
    zhi = hardy_values(hi, params, threads)
    while float(np.max(hi - lo)) > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        zm = hardy_values(mid, params, threads)
        west = np.signbit(zm) == np.signbit(zlo)
        lo = np.where(west, mid, lo)
        zlo = np.where(west, zm, zlo)
        hi = np.where(west, np.asarray(hi), mid)
        zhi = np.where(west, zhi, zm)
    x0, f0 = lo.copy(), zlo.copy()
    x1, f1 = hi.copy(), zhi.copy()
    slope = (f1 - f0) / np.maximum(x1 - x0, 1e-300)
    for _ in range(12):
        den = f1 - f0
        den = np.where(np.abs(den) < 1e-300,
                       np.where(den < 0, -1e-300, 1e-300), den)
        x2 = np.clip(x1 - f1 * (x1 - x0) / den, lo0, hi0)
        if float(np.max(np.abs(x2 - x1))) <= BRACKET_WIDTH:
            x1 = x2
            break
        x0, f0 = x1, f1
        x1 = x2
        f1 = hardy_values(x1, params, threads)
        moved = np.abs(x1 - x0) > 1e-300
        slope = np.where(moved, (f1 - f0) / np.where(moved, x1 - x0, 1.0),
                         slope)
    return _certify(x1, lambda ts: slope, lo0, hi0, params, threads)


def _scan_chunk(start: int, n_int: int, params: EvalParams, refine: str,
                threads: int, min_level: int, cache_dir):
    """Process one run of Gram intervals; returns (gammas, residuals,
    next_start) where next_start is the last sign-definite anchor index."""
    key = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        tag = (f"k{start}_n{n_int}_c{params.em_cutoff_factor:g}"
               f"_m{params.bernoulli_order}_e{params.target_abs_error:g}"
               f"_{refine}_l{min_level}")
        key = os.path.join(cache_dir, f"scan_{tag}.npz")
        if os.path.exists(key):
            with np.load(key) as d:
                return (d["gammas"].copy(), d["residuals"].copy(),
                        int(d["next_start"]))

    ks = np.arange(start, start + n_int + 1, dtype=np.float64)
    grams = _gram_points(ks)
    if refine == "model":
        model = build_models(_scan_centers(grams, params), params,
                             threads=threads)
        evalf = model.z_at
        # anchors with |Z| inside the model's error bound are not
        # sign-definite; merging their blocks keeps counts exact
        floor = max(_BAD_POINT_FLOOR, 4.0 * model.worst_bound)
    else:
        model = None

        def evalf(ts):
            return hardy_values(np.asarray(ts, dtype=np.float64),
                                params, threads)

        floor = _BAD_POINT_FLOOR
    zg = np.asarray(evalf(grams))
    parity = np.where(ks.astype(np.int64) % 2 == 0, 1.0, -1.0)
    good = (zg * parity) > floor
    if not good[0]:
        raise MissedZeroError(
            f"scan anchor at t={grams[0]:.6f} is not sign-definite",
            block=(float(grams[0]), float(grams[0])), expected=0, found=0)
    gidx = np.flatnonzero(good)
    if gidx.size < 2:
        raise MissedZeroError(
            "no usable anchors in scan range",
            block=(float(grams[0]), float(grams[-1])))
    los, his = [], []
    for a, b in zip(gidx[:-1], gidx[1:]):
        lo, hi = _block_brackets(evalf, grams, start, int(a), int(b),
                                 min_level)
        los.append(lo)
        his.append(hi)
    lo = np.concatenate(los)
    hi = np.concatenate(his)
    if refine == "model":
        gam, res = _refine_on_model(model, lo, hi, params, threads)
    else:
        gam, res = _refine_direct(lo, hi, params, threads)
    next_start = start + int(gidx[-1])
    if key:
        tmp = key + ".tmp.npz"
        np.savez(tmp, gammas=gam, residuals=res,
                 next_start=np.int64(next_start))
        os.replace(tmp, key)
    return gam, res, next_start


def _pick_t_max(g_last: float, g_next: float, count: int) -> float:
    """A point in the final gap where the rounded smooth count matches."""
    gap = g_next - g_last
    for f in (0.5, 0.35, 0.65, 0.2, 0.8, 0.12, 0.88):
        T = g_last + f * gap
        if min(T - g_last, g_next - T) < _CHECK_CLEARANCE:
            continue
        if int(round(count_zeros_rvm(T))) == count:
            return T
    return g_last + 0.5 * gap


def find_zeros(K: int, params: EvalParams = PIPELINE_PARAMS, *,
               refine: str = "model", threads: int | None = None,
               cache_dir: str | None = None,
               min_level: int = 1) -> ZeroTable:
    """First K ordinates, each bracketed by a sign change of width <= 1e-10
    and carrying a measured residual |Z(gamma)| <= 1e-8.

    refine="model" (default) runs bisection on certified local models with
    a direct polish; refine="direct" is the literal slow route (bisection
    then secant on the direct evaluator).  min_level widens the initial
    scan grid (min_level points per Gram interval) and exists so that
    independent runs with different scan steps can be compared.  cache_dir
    persists per-chunk results; reruns resume from whatever completed.
    """
    try:
        K = operator.index(K)
    except TypeError:
        raise DomainError(f"zero count must be an integer, got {K!r}")
    if not 1 <= K <= MAX_ZERO_COUNT:
        raise DomainError(
            f"zero count must be in [1, {MAX_ZERO_COUNT}], got {K}")
    if refine not in ("model", "direct"):
        raise DomainError(f"refine must be 'model' or 'direct', got "
                          f"{refine!r}")
    min_level = operator.index(min_level)
    if not 1 <= min_level <= 1024:
        raise DomainError("min_level must be in [1, 1024]")
    threads = resolve_threads(threads)

    reach = float(_gram_points(np.array([K + 8.0]))[0])
    if reach > T_MAX - 1.0:
        cap = int(count_zeros_rvm(T_MAX - 2.0)) - 16
        raise DomainError(
            f"first {K} zeros extend to t~{reach:.0f}, beyond the "
            f"supported height {T_MAX:g}; at most ~{cap} fit")

    parts_g, parts_r = [], []
    total = 0
    start = -1
    while total < K + 1:
        need = K + 1 - total
        n_int = _CHUNK_INTERVALS if need > 1536 else max(48, need + 24)
        gam, res, nxt = _scan_chunk(start, n_int, params, refine, threads,
                                    min_level, cache_dir)
        if nxt <= start:
            raise MissedZeroError("scan failed to advance",
                                  block=(float(gram_point(start)),
                                         float(gram_point(start + n_int))))
        parts_g.append(gam)
        parts_r.append(res)
        total += gam.size
        start = nxt
    gam = np.concatenate(parts_g)
    res = np.concatenate(parts_r)
    if gam.size > 1 and float(np.min(np.diff(gam))) <= 0.0:
        raise MissedZeroError("refined ordinates out of order",
                              block=(float(gam[0]), float(gam[-1])))
    t_max = _pick_t_max(float(gam[K - 1]), float(gam[K]), K)
    entries = tuple(
        Zero(index=i + 1, gamma=float(gam[i]), residual=float(res[i]),
             source="computed")
        for i in range(K))
    table = ZeroTable(entries=entries, t_max=t_max)
    report = verify_table(table, params=params, threads=threads)
    if not report.passed:
        raise VerificationError(
            f"freshly computed table failed verification: "
            f"{report.first_failure}")
    return table


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _default_ladder(n: int) -> list[int]:
    out = [c for c in _LADDER_COUNTS if c <= n]
    if not out or out[-1] != n:
        out.append(n)
    return out


def _checkpoint_ok(table: ZeroTable, count: int):
    """Check the zero count for one checkpoint, snapping to Gram-point
    candidates near the target so the comparison point is never ambiguous.

    Returns True/False, or None when every candidate sits within the
    clearance of some ordinate (checkpoint skipped).
    """
    g = table.gammas
    unambiguous = False
    for off in _SNAP_OFFSETS:
        m = count - 1 + off
        if m < -1:
            continue
        T = gram_point(m)
        if T > table.t_max or T < 10.0:
            continue
        pos = int(np.searchsorted(g, T))
        near = min(
            T - g[pos - 1] if pos > 0 else math.inf,
            g[pos] - T if pos < g.size else math.inf)
        if near < _CHECK_CLEARANCE:
            continue
        unambiguous = True
        if int(np.searchsorted(g, T, side="right")) == \
                int(round(count_zeros_rvm(T))):
            return True
    return False if unambiguous else None


def verify_table(table: ZeroTable, ladder=None,
                 params: EvalParams = PIPELINE_PARAMS,
                 threads: int | None = None) -> VerificationReport:
    """Structural, residual, and zero-count checks; failures are data."""
    if not isinstance(table, ZeroTable) or len(table.entries) == 0:
        raise DomainError("verification needs a nonempty ZeroTable")
    threads = resolve_threads(threads)
    checks: list[str] = []
    failures: list[str] = []

    def rec(ok: bool, label: str):
        checks.append(("PASS " if ok else "FAIL ") + label)
        if not ok:
            failures.append(label)

    def skip(label: str):
        checks.append("SKIP " + label)

    g = table.gammas
    n = g.size

    idx = np.array([z.index for z in table.entries])
    rec(bool(np.array_equal(idx, np.arange(1, n + 1))),
        "indices consecutive from 1")

    diffs = np.diff(g)
    if diffs.size and float(diffs.min()) <= 0.0:
        k = int(np.argmin(diffs))
        rec(False, f"ordinates strictly increasing (violated at "
                   f"index {k + 1})")
    else:
        rec(True, "ordinates strictly increasing")

    rec(bool(g[0] > FIRST_ORDINATE_FLOOR),
        f"first ordinate above {FIRST_ORDINATE_FLOOR:g}")
    rec(bool(g[-1] <= T_MAX), "ordinates within the supported height")
    rec(bool(math.isfinite(table.t_max) and table.t_max >= g[-1]),
        "verified range covers all entries")

    bad_res = [z.index for z in table.entries
               if not math.isfinite(z.residual) or z.residual >
               (COMPUTED_RESIDUAL_BOUND if z.source == "computed"
                else IMPORTED_RESIDUAL_BOUND)]
    rec(not bad_res,
        "stored residuals within bounds" if not bad_res else
        f"stored residuals within bounds (violated at index {bad_res[0]})")

    if g[0] > TWO_PI and g[-1] <= T_MAX:
        step = max(1, n // 200)
        sel = np.unique(np.r_[np.arange(0, n, step), n - 1])
        zt = np.abs(hardy_values(g[sel], params, threads))
        over = sel[zt > IMPORTED_RESIDUAL_BOUND]
        rec(over.size == 0,
            "recomputed |Z| small at sampled ordinates" if not over.size
            else f"recomputed |Z| small at sampled ordinates (violated at "
                 f"index {int(over[0]) + 1}, |Z|="
                 f"{float(zt[np.searchsorted(sel, over[0])]):.3g})")
    else:
        skip("recomputed |Z| sample (ordinates outside evaluator domain)")

    if ladder is None:
        counts = _default_ladder(n)
    else:
        counts = [operator.index(c) for c in ladder]
        if any(c < 1 for c in counts):
            raise DomainError("checkpoint counts must be positive")
    for c in counts:
        label = f"zero count at checkpoint {c}"
        if c > n:
            skip(label + " (beyond table)")
            continue
        got = _checkpoint_ok(table, c)
        if got is None:
            skip(label + " (all candidates ambiguous)")
        else:
            rec(got, label)

    pos = int(np.searchsorted(g, table.t_max))
    near = min(table.t_max - g[pos - 1] if pos > 0 else math.inf,
               g[pos] - table.t_max if pos < n else math.inf)
    if near >= _CHECK_CLEARANCE and table.t_max >= 10.0:
        rec(table.count_up_to(table.t_max) ==
            int(round(count_zeros_rvm(table.t_max))),
            "zero count at the verified-range end")
    else:
        skip("zero count at the verified-range end (ambiguous)")

    return VerificationReport(
        passed=not failures, checks=tuple(checks), failures=tuple(failures),
        first_failure=failures[0] if failures else None)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def export_zeros(table: ZeroTable, path, format: str) -> None:
    """Write the table; formats: "binary" (ZTBL v1) or "plain-text"."""
    if not isinstance(table, ZeroTable) or len(table.entries) == 0:
        raise DomainError("export needs a nonempty ZeroTable")
    g = table.gammas
    if format == "binary":
        with open(path, "wb") as fh:
            fh.write(_BINARY_HEADER.pack(_BINARY_MAGIC, _BINARY_VERSION,
                                         g.size, float(table.t_max)))
            fh.write(np.ascontiguousarray(g, dtype="<f8").tobytes())
    elif format == "plain-text":
        with open(path, "w", encoding="ascii") as fh:
            fh.write("# zero ordinates, one per line, ascending\n")
            fh.write(f"# count = {g.size}\n")
            fh.write(f"# t_max = {float(table.t_max):.17g}\n")
            for v in g:
                fh.write(f"{float(v):.17g}\n")
    else:
        raise DomainError(
            f"format must be 'binary' or 'plain-text', got {format!r}")


def _parse_binary(path) -> tuple[np.ndarray, float]:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _BINARY_HEADER.size:
        raise TableFormatError(
            f"truncated header: {len(data)} bytes", offset=len(data))
    magic, version, count, t_max = _BINARY_HEADER.unpack_from(data)
    if magic != _BINARY_MAGIC:
        raise TableFormatError(f"bad magic {magic!r}", offset=0)
    if version != _BINARY_VERSION:
        raise TableFormatError(f"unsupported version {version}", offset=4)
    expect = _BINARY_HEADER.size + 8 * count
    if len(data) != expect:
        raise TableFormatError(
            f"expected {expect} bytes for {count} ordinates, got "
            f"{len(data)}", offset=min(len(data), expect))
    g = np.frombuffer(data, dtype="<f8", count=count,
                      offset=_BINARY_HEADER.size).astype(np.float64)
    for i, v in _table_value_problems(g):
        raise TableFormatError(v, offset=_BINARY_HEADER.size + 8 * i)
    return g, float(t_max)


def _parse_text(path) -> tuple[np.ndarray, float]:
    vals: list[float] = []
    lines: list[int] = []
    t_max = None
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _TMAX_LINE.match(line)
                if m:
                    try:
                        t_max = float(m.group(1))
                    except ValueError:
                        raise TableFormatError(
                            f"bad t_max value {m.group(1)!r}", line=lineno)
                continue
            try:
                vals.append(float(line))
            except ValueError:
                raise TableFormatError(
                    f"non-numeric ordinate {line!r}", line=lineno)
            lines.append(lineno)
    if not vals:
        raise TableFormatError("file contains no ordinates", line=0)
    g = np.array(vals, dtype=np.float64)
    for i, v in _table_value_problems(g):
        raise TableFormatError(v, line=lines[i])
    return g, float(t_max) if t_max is not None else float(g[-1])


def _table_value_problems(g: np.ndarray):
    bad = ~np.isfinite(g)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        yield i, f"non-finite ordinate at position {i}"
        return
    if float(g.min()) <= TWO_PI or float(g.max()) > T_MAX:
        i = int(np.argmin(g) if float(g.min()) <= TWO_PI else np.argmax(g))
        yield i, (f"ordinate {g[i]:.9g} outside the supported range "
                  f"({TWO_PI:.6f}, {T_MAX:g}]")
        return
    if g.size > 1:
        d = np.diff(g)
        if float(d.min()) <= 0.0:
            i = int(np.argmin(d)) + 1
            yield i, f"ordinates not strictly increasing at position {i}"


def import_zeros(path, format: str, *,
                 params: EvalParams = PIPELINE_PARAMS,
                 threads: int | None = None) -> ZeroTable:
    """Read a table and recompute every residual with the direct evaluator.

    Parsing problems raise TableFormatError with the offending line (text)
    or byte offset (binary); semantic acceptance is verify_table's job.
    """
    if format == "binary":
        g, t_max = _parse_binary(path)
    elif format == "plain-text":
        g, t_max = _parse_text(path)
    else:
        raise DomainError(
            f"format must be 'binary' or 'plain-text', got {format!r}")
    threads = resolve_threads(threads)
    res = np.abs(hardy_values(g, params, threads))
    entries = tuple(
        Zero(index=i + 1, gamma=float(g[i]), residual=float(res[i]),
             source="imported")
        for i in range(g.size))
    return ZeroTable(entries=entries, t_max=t_max)


__all__ = [
    "Zero", "ZeroTable", "VerificationReport", "count_zeros_rvm",
    "gram_point", "find_zeros", "verify_table", "import_zeros",
    "export_zeros", "MAX_ZERO_COUNT", "BRACKET_WIDTH",
    "COMPUTED_RESIDUAL_BOUND", "IMPORTED_RESIDUAL_BOUND",
]
