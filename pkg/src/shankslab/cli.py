"""Command-line front end.

Subcommands: `zeros` (find / import / verify / export), `moments`,
`landau-gonek`, `chain`, `diag`.  Every command writes its artifacts plus
a JSON manifest into the output directory.

Exit codes: 0 success, 2 usage or configuration error, 3 verification
failure (including results that cannot be certified), 4 file I/O or
format error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .arith import build_sieve
from .errors import (
    AccuracyError,
    ConfigError,
    DomainError,
    MissedZeroError,
    ShanksLabError,
    TableFormatError,
    VerificationError,
)
from .moments import (
    auto_checkpoints,
    export_moment_csv,
    heuristic_chain,
    landau_gonek,
    leading_term,
    moment_series,
    scatter_export,
    shanks_verdict,
    error_bound_diag,
)
from .pipeline import (
    StageTimer,
    build_config,
    new_manifest,
    parse_config_file,
)
from .summation import resolve_threads
from .zeros import export_zeros, find_zeros, import_zeros, verify_table

_FORMATS = ("binary", "plain-text")
_EXT = {"binary": "ztbl", "plain-text": "txt"}

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_IO = 4


def _add_common(sub):
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--out", help="output directory (default: out)")
    sub.add_argument("--threads", type=int,
                     help="worker threads, 0 = auto (flag beats "
                          "SHANKSLAB_THREADS beats config)")
    sub.add_argument("--em-cutoff-factor", type=float, dest="em_cutoff")
    sub.add_argument("--bernoulli-order", type=int, dest="bernoulli")
    sub.add_argument("--target-abs-error", type=float, dest="target")
    sub.add_argument("--sieve-limit", type=int, dest="sieve_limit")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="shankslab",
        description="zero tables and discrete moment sums on the "
                    "critical line")
    cmds = top.add_subparsers(dest="command", required=True)

    z = cmds.add_parser("zeros", help="compute, check, and convert tables")
    zsub = z.add_subparsers(dest="action", required=True)
    zf = zsub.add_parser("find", help="compute the first K zeros")
    zf.add_argument("--count", type=int, help="number of zeros K")
    zf.add_argument("--cache-dir", dest="cache_dir",
                    help="scan-chunk cache (default: OUT/scan_cache); "
                         "an interrupted run resumes from it bit-exactly")
    _add_common(zf)
    zi = zsub.add_parser("import", help="read, verify, and canonicalize")
    zi.add_argument("--file", required=True)
    zi.add_argument("--format", choices=_FORMATS, default="binary")
    _add_common(zi)
    zv = zsub.add_parser("verify", help="verify a stored table")
    zv.add_argument("--file", required=True)
    zv.add_argument("--format", choices=_FORMATS, default="binary")
    _add_common(zv)
    ze = zsub.add_parser("export", help="convert a canonical table")
    ze.add_argument("--file", required=True)
    ze.add_argument("--format", choices=_FORMATS, default="plain-text")
    _add_common(ze)

    m = cmds.add_parser("moments", help="moment series, scatter, verdicts")
    m.add_argument("--n", required=True,
                   help="comma list of derivative orders")
    m.add_argument("--table", required=True, help="binary zero table")
    m.add_argument("--checkpoints", default="auto",
                   help="'auto' or comma list of heights")
    _add_common(m)

    lg = cmds.add_parser("landau-gonek", help="prime-power exponential sums")
    lg.add_argument("--m", required=True, help="comma list of frequencies")
    lg.add_argument("--table", required=True)
    lg.add_argument("--T", type=float, help="height (default: table top)")
    _add_common(lg)

    ch = cmds.add_parser("chain", help="resummation replay report")
    ch.add_argument("--n", type=int, required=True)
    ch.add_argument("--T", type=float, required=True)
    ch.add_argument("--table", required=True)
    ch.add_argument("--allow-large", action="store_true",
                    help="override the cost guard above T = 1e4")
    _add_common(ch)

    dg = cmds.add_parser("diag", help="dominating error-bound ratio")
    dg.add_argument("--n", type=int, required=True)
    dg.add_argument("--T", type=float, required=True)
    _add_common(dg)
    return top


def _config_from_args(args, **extra_flags):
    file_values = parse_config_file(args.config) if args.config else {}
    flags = {
        "thread_count": args.threads,
        "em_cutoff_factor": args.em_cutoff,
        "bernoulli_order": args.bernoulli,
        "target_abs_error": args.target,
        "sieve_limit": args.sieve_limit,
        "output_dir": args.out,
    }
    flags.update(extra_flags)
    return build_config(file_values, flags)


def _prepare_out(cfg) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _threads(cfg, args) -> int:
    # The explicit flag outranks SHANKSLAB_THREADS, which outranks the
    # config file value already merged into cfg.
    return resolve_threads(args.threads, cfg.thread_count)


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {what} list: {text!r}") from exc


def _load_verified(path, fmt, cfg, manifest, timer, threads):
    manifest.add_input(path)
    with timer.stage("import"):
        table = import_zeros(path, fmt, params=cfg.eval_params(),
                             threads=threads)
    with timer.stage("verify"):
        report = verify_table(table, params=cfg.eval_params(),
                              threads=threads)
    for line in report.failures:
        print(f"verify: FAIL {line}")
    print(f"verify: {'PASS' if report.passed else 'FAIL'} "
          f"({len(report.checks)} checks, {len(report.failures)} failures)")
    if not report.passed:
        raise VerificationError(
            f"table {path} failed verification: {report.failures[0]}")
    return table


# ---------------------------------------------------------------------------
# command bodies
# ---------------------------------------------------------------------------

def cmd_zeros(args) -> int:
    cfg = _config_from_args(args, zero_count=getattr(args, "count", None))
    out = _prepare_out(cfg)
    threads = _threads(cfg, args)
    timer = StageTimer()
    action = args.action
    manifest = new_manifest(f"zeros-{action}", cfg)

    if action == "find":
        cache = Path(args.cache_dir) if args.cache_dir \
            else out / "scan_cache"
        with timer.stage("find"):
            table = find_zeros(cfg.zero_count, cfg.eval_params(),
                               threads=threads, cache_dir=cache)
        dest = out / f"zeros_{cfg.zero_count}.ztbl"
        with timer.stage("export"):
            export_zeros(table, dest, "binary")
        manifest.add_output(dest)
        print(f"found {len(table.entries)} zeros, t_max = {table.t_max:.6f}")
        print("verify: PASS (checked during construction)")
        print(f"wrote {dest}")
    elif action == "verify":
        _load_verified(args.file, args.format, cfg, manifest, timer, threads)
    elif action == "import":
        table = _load_verified(args.file, args.format, cfg, manifest, timer,
                               threads)
        dest = out / "zeros_imported.ztbl"
        with timer.stage("export"):
            export_zeros(table, dest, "binary")
        manifest.add_output(dest)
        print(f"wrote {dest}")
    else:  # export
        table = _load_verified(args.file, "binary", cfg, manifest, timer,
                               threads)
        dest = out / f"zeros_export.{_EXT[args.format]}"
        with timer.stage("export"):
            export_zeros(table, dest, args.format)
        manifest.add_output(dest)
        print(f"wrote {dest}")

    manifest.stage_seconds = timer.seconds
    manifest.write(out / f"zeros_{action}_manifest.json")
    return EXIT_OK


def cmd_moments(args) -> int:
    orders = _parse_int_list(args.n, "--n")
    if not orders:
        raise ConfigError("--n needs at least one order")
    for n in orders:
        if n < 1:
            raise ConfigError(
                f"--n values must satisfy n >= 1, got {n}")
    checkpoints = None if args.checkpoints == "auto" else args.checkpoints
    cfg = _config_from_args(args, checkpoint_list=checkpoints)
    out = _prepare_out(cfg)
    threads = _threads(cfg, args)
    timer = StageTimer()
    manifest = new_manifest("moments", cfg)

    table = _load_verified(args.table, "binary", cfg, manifest, timer,
                           threads)
    cps = list(cfg.checkpoint_list) or auto_checkpoints(table)
    sieve = build_sieve(cfg.sieve_limit)
    for n in orders:
        with timer.stage(f"series_n{n}"):
            series = moment_series(n, table, cps, cfg.eval_params(),
                                   sieve=sieve, threads=threads)
            mpath = out / f"moments_n{n}.csv"
            export_moment_csv(series, mpath)
            spath = out / f"scatter_n{n}.csv"
            scatter_export(n, table, spath, cfg.eval_params(),
                           threads=threads)
        manifest.add_output(mpath)
        manifest.add_output(spath)
        v = shanks_verdict(n, table, cps[-1], cfg.eval_params(),
                           threads=threads)
        print(f"n={n}: mean = {v.mean.real:+.6f}{v.mean.imag:+.6f}i, "
              f"sign {'OK' if v.sign_ok else 'FAIL'}, "
              f"im_ratio = {v.im_ratio:.5f}")

    manifest.stage_seconds = timer.seconds
    manifest.write(out / "moments_manifest.json")
    return EXIT_OK


def cmd_landau_gonek(args) -> int:
    freqs = _parse_int_list(args.m, "--m")
    if not freqs:
        raise ConfigError("--m needs at least one frequency")
    cfg = _config_from_args(args)
    out = _prepare_out(cfg)
    threads = _threads(cfg, args)
    timer = StageTimer()
    manifest = new_manifest("landau-gonek", cfg)

    table = _load_verified(args.table, "binary", cfg, manifest, timer,
                           threads)
    T = args.T if args.T is not None else table.t_max
    dest = out / "landau_gonek.csv"
    worst = 0.0
    with timer.stage("sums"), open(dest, "w", encoding="ascii") as fh:
        fh.write("m,T,empirical_re,empirical_im,predicted,bound,ratio\n")
        for m in freqs:
            r = landau_gonek(m, table, T, threads=threads)
            worst = max(worst, r.ratio)
            fh.write(f"{r.m},{r.T:.17g},{r.empirical.real:.17g},"
                     f"{r.empirical.imag:.17g},{r.predicted:.17g},"
                     f"{r.bound:.17g},{r.ratio:.17g}\n")
    manifest.add_output(dest)
    print(f"{len(freqs)} frequencies at T = {T:.6g}, "
          f"worst |empirical - predicted|/bound = {worst:.4f}")
    manifest.stage_seconds = timer.seconds
    manifest.write(out / "landau_gonek_manifest.json")
    return EXIT_OK


def cmd_chain(args) -> int:
    cfg = _config_from_args(args)
    out = _prepare_out(cfg)
    threads = _threads(cfg, args)
    timer = StageTimer()
    manifest = new_manifest("chain", cfg)

    table = _load_verified(args.table, "binary", cfg, manifest, timer,
                           threads)
    with timer.stage("chain"):
        rep = heuristic_chain(args.n, table, args.T, cfg.eval_params(),
                              allow_large=args.allow_large, threads=threads)
    dest = out / f"chain_n{rep.n}.csv"
    with open(dest, "w", encoding="ascii") as fh:
        fh.write("n,T,stage_a_re,stage_a_im,stage_b_re,stage_b_im,"
                 "stage_c,s_re,s_im,dev_ab,dev_as,dev_bs,dev_c_re_s\n")
        fh.write(f"{rep.n},{rep.T:.17g},{rep.stage_A.real:.17g},"
                 f"{rep.stage_A.imag:.17g},{rep.stage_B.real:.17g},"
                 f"{rep.stage_B.imag:.17g},{rep.stage_C:.17g},"
                 f"{rep.S_n.real:.17g},{rep.S_n.imag:.17g},"
                 f"{rep.deviations['a_vs_b']:.17g},"
                 f"{rep.deviations['a_vs_s']:.17g},"
                 f"{rep.deviations['b_vs_s']:.17g},"
                 f"{rep.deviations['c_vs_re_s']:.17g}\n")
    manifest.add_output(dest)
    rel = rep.deviations["a_vs_b"] / abs(rep.stage_A)
    print(f"stage_A vs stage_B relative deviation = {rel:.3e}")
    print(f"|stage_C - Re S|/|leading| = "
          f"{rep.deviations['c_vs_re_s'] / abs(leading_term(rep.n, rep.T)):.4f}")
    manifest.stage_seconds = timer.seconds
    manifest.write(out / "chain_manifest.json")
    return EXIT_OK


def cmd_diag(args) -> int:
    cfg = _config_from_args(args)
    out = _prepare_out(cfg)
    timer = StageTimer()
    manifest = new_manifest("diag", cfg)
    with timer.stage("diag"):
        bound = error_bound_diag(args.n, args.T)
        lead = leading_term(args.n, args.T)
        ratio = bound / abs(lead)
    dest = out / f"diag_n{args.n}.csv"
    with open(dest, "w", encoding="ascii") as fh:
        fh.write("n,T,bound,leading,ratio\n")
        fh.write(f"{args.n},{args.T:.17g},{bound:.17g},{lead:.17g},"
                 f"{ratio:.17g}\n")
    manifest.add_output(dest)
    print(f"error bound / |main term| ratio = {ratio:.4f} "
          f"({'>' if ratio > 1.0 else '<='} 1)")
    manifest.stage_seconds = timer.seconds
    manifest.write(out / "diag_manifest.json")
    return EXIT_OK


_HANDLERS = {
    "zeros": cmd_zeros,
    "moments": cmd_moments,
    "landau-gonek": cmd_landau_gonek,
    "chain": cmd_chain,
    "diag": cmd_diag,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except TableFormatError as exc:
        where = ""
        if exc.line is not None:
            where = f" (line {exc.line})"
        elif exc.offset is not None:
            where = f" (byte offset {exc.offset})"
        print(f"error: {exc}{where}", file=sys.stderr)
        return EXIT_IO
    except (VerificationError, AccuracyError, MissedZeroError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ShanksLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
