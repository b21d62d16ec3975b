#!/usr/bin/env python3
"""Reproduce the pilot measurements behind every frozen tolerance.

Runs on a 10,150-zero table (built or loaded from var/zeros_10k) and
prints the measured quantity next to the bound that was frozen from it:

  - mean-summand imaginary defect vs the 0.05 ceiling (orders 1..3)
  - running sum vs the refined prediction (0.02) and main term (0.15/0.4)
  - divisor-form oracle residual vs the 0.02 ceiling
  - prime-power sums vs the factor-10 bound
  - chain substitution scale vs the 0.40 ceiling
  - error-bound/main-term domination ratios at 10^3..10^5
"""

import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from shankslab.arith import true_value_D  # noqa: E402
from shankslab.engine import TWO_PI  # noqa: E402
from shankslab.moments import (  # noqa: E402
    discrete_sum,
    error_bound_diag,
    fujii_prediction,
    heuristic_chain,
    landau_gonek,
    leading_term,
    shanks_verdict,
)
from shankslab.zeros import find_zeros  # noqa: E402


def main() -> int:
    t0 = time.perf_counter()
    table = find_zeros(10_150, cache_dir=ROOT / "var" / "zeros_10k")
    T = 1.0e4
    print(f"table: {len(table.entries)} zeros "
          f"({time.perf_counter() - t0:.1f}s)\n")

    print("order  im_ratio (<= 0.05)   sign")
    for n in (1, 2, 3):
        v = shanks_verdict(n, table, T)
        print(f"  {n}    {v.im_ratio:<20.2e} {'OK' if v.sign_ok else 'X'}")

    print("\norder  |S/leading - 1|      |S/refined - 1|   "
          "|Re S - oracle|/|leading|")
    for n in (1, 2, 3):
        S = discrete_sum(n, table, T)
        lead = leading_term(n, T)
        rl = abs(S / lead - 1.0)
        rf = abs(S / fujii_prediction(T) - 1.0) if n == 1 else float("nan")
        sign = 1.0 if n % 2 == 1 else -1.0
        rt = abs(S.real - sign * true_value_D(n, T / TWO_PI)) / abs(lead)
        print(f"  {n}    {rl:<20.4f} {rf:<17.4f} {rt:.2e}")
    print("frozen: refined 0.02, main term 0.15 (n=1) / 0.40 (n=2,3), "
          "oracle 0.02")

    print("\nfreq   |emp - pred| / bound (<= 10)")
    for m in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12):
        r = landau_gonek(m, table, T)
        print(f"  {m:<4} {r.ratio:.4f}")

    print("\nchain substitution |C - Re S| / |leading| (frozen 0.40):")
    for height in (1.0e3, 1.0e4):
        rep = heuristic_chain(1, table, height)
        scale = rep.deviations["c_vs_re_s"] / abs(leading_term(1, height))
        print(f"  T = {height:g}: {scale:.4f}")

    print("\norder  bound/|main| at 10^3, 10^4, 10^5 (all > 1):")
    for n in (1, 2, 3):
        r = [error_bound_diag(n, h) / abs(leading_term(n, h))
             for h in (1.0e3, 1.0e4, 1.0e5)]
        print(f"  {n}    {r[0]:.3f}  {r[1]:.3f}  {r[2]:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
