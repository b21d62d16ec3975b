#!/usr/bin/env python3
"""Production run: build/verify the 100k-zero table and export every CSV
the plotting package and the acceptance analysis consume.

Stages are independent and resumable; each writes into --out and skips
nothing (reruns overwrite, byte-identically by the determinism contract).

    python3 scripts/run_full_verification.py --stage table
    python3 scripts/run_full_verification.py --stage moments --orders 1
    python3 scripts/run_full_verification.py --stage moments --orders 2,3
    python3 scripts/run_full_verification.py --stage landau-gonek

A fresh checkout with an empty cache rebuilds the table from scratch in
the `table` stage (roughly twenty minutes single-threaded); every other
stage loads it from the cache in about a second.
"""

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from shankslab.moments import (  # noqa: E402
    auto_checkpoints,
    export_moment_csv,
    landau_gonek,
    moment_series,
    scatter_export,
    shanks_verdict,
)
from shankslab.pipeline import RunConfig, StageTimer, new_manifest  # noqa: E402
from shankslab.zeros import export_zeros, find_zeros, verify_table  # noqa: E402

CACHE = ROOT / "var" / "zeros_100k"
COUNT = 100_000
LG_FREQUENCIES = (2, 3, 4, 5, 6, 7, 8, 9, 10, 12)


def load_table(threads):
    t0 = time.perf_counter()
    table = find_zeros(COUNT, threads=threads, cache_dir=CACHE)
    print(f"table: {len(table.entries)} zeros, t_max = {table.t_max:.6f} "
          f"({time.perf_counter() - t0:.1f}s)")
    return table


def stage_table(out, threads, manifest, timer):
    with timer.stage("find"):
        table = load_table(threads)
    with timer.stage("verify"):
        report = verify_table(table, threads=threads)
    for line in report.checks:
        print(f"  {line}")
    if not report.passed:
        print("verification FAILED")
        return 3
    dest = out / f"zeros_{COUNT}.ztbl"
    export_zeros(table, dest, "binary")
    manifest.add_output(dest)
    print(f"wrote {dest}")
    return 0


def stage_moments(out, threads, manifest, timer, orders):
    table = load_table(threads)
    cps = auto_checkpoints(table)
    print(f"checkpoints: {[round(T, 3) for T in cps]}")
    for n in orders:
        with timer.stage(f"series_n{n}"):
            series = moment_series(n, table, cps, threads=threads)
            mpath = out / f"moments_n{n}.csv"
            export_moment_csv(series, mpath)
            spath = out / f"scatter_n{n}.csv"
            scatter_export(n, table, spath, threads=threads)
        manifest.add_output(mpath)
        manifest.add_output(spath)
        v = shanks_verdict(n, table, cps[-1], threads=threads)
        print(f"n={n}: mean = {v.mean.real:+.6f}{v.mean.imag:+.6f}i, "
              f"sign {'OK' if v.sign_ok else 'FAIL'}, "
              f"im_ratio = {v.im_ratio:.5f}")
        print(f"wrote {mpath} and {spath}")
    return 0


def stage_landau_gonek(out, threads, manifest, timer):
    table = load_table(threads)
    T = float(table.entries[-1].gamma)
    dest = out / "landau_gonek.csv"
    with timer.stage("sums"), open(dest, "w", encoding="ascii") as fh:
        fh.write("m,T,empirical_re,empirical_im,predicted,bound,ratio\n")
        for m in LG_FREQUENCIES:
            r = landau_gonek(m, table, T, threads=threads)
            fh.write(f"{r.m},{r.T:.17g},{r.empirical.real:.17g},"
                     f"{r.empirical.imag:.17g},{r.predicted:.17g},"
                     f"{r.bound:.17g},{r.ratio:.17g}\n")
            print(f"m={m}: |emp - pred| / bound = {r.ratio:.4f}")
    manifest.add_output(dest)
    print(f"wrote {dest}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stage", required=True,
                    choices=("table", "moments", "landau-gonek"))
    ap.add_argument("--orders", default="1,2,3",
                    help="comma list of derivative orders (moments stage)")
    ap.add_argument("--out", default=str(ROOT / "var" / "full"))
    ap.add_argument("--threads", type=int, default=0)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    threads = args.threads or None
    cfg = RunConfig(zero_count=COUNT, output_dir=str(out),
                    thread_count=args.threads)
    timer = StageTimer()
    manifest = new_manifest(f"full-verification-{args.stage}", cfg)

    if args.stage == "table":
        rc = stage_table(out, threads, manifest, timer)
    elif args.stage == "moments":
        orders = [int(x) for x in args.orders.split(",") if x.strip()]
        rc = stage_moments(out, threads, manifest, timer, orders)
    else:
        rc = stage_landau_gonek(out, threads, manifest, timer)

    manifest.stage_seconds = timer.seconds
    tag = args.stage.replace("-", "_")
    if args.stage == "moments":
        tag += "_" + "_".join(args.orders.split(","))
    manifest.write(out / f"full_{tag}_manifest.json")
    return rc


if __name__ == "__main__":
    sys.exit(main())
