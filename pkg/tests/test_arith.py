"""Sieve, prime-power sums, and the Laurent coefficients near s = 1.

Every frozen constant here is re-derived by an inline brute-force oracle
(trial division, explicit double loops, tail-corrected partial sums), so
a regression in either side breaks the test.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shankslab.arith import (
    DEFAULT_SIEVE_LIMIT,
    SieveTable,
    build_sieve,
    chebyshev_C,
    default_sieve,
    stieltjes,
    stieltjes_constants,
    true_value_D,
    unweighted_sum,
    von_mangoldt,
    weighted_sum,
)
from shankslab.engine import PIPELINE_PARAMS, zeta_em
from shankslab.errors import DomainError, SieveLimitError


def lambda_trial(m: int) -> float:
    """Trial-division oracle for the von Mangoldt weight."""
    if m < 2:
        return 0.0
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
        return math.log(m)
    q = m
    while q % p == 0:
        q //= p
    return math.log(p) if q == 1 else 0.0


@pytest.fixture(scope="module")
def big_sieve() -> SieveTable:
    return build_sieve(10 ** 6)


class TestSieve:
    def test_prime_power_values(self):
        tab = default_sieve()
        assert tab.lambda_values[1] == 0.0
        assert tab.lambda_values[2] == math.log(2)
        assert tab.lambda_values[6] == 0.0
        assert tab.lambda_values[8] == math.log(2)
        assert tab.lambda_values[9] == math.log(3)
        assert tab.limit == DEFAULT_SIEVE_LIMIT
        assert len(tab.lambda_values) == tab.limit + 1

    def test_matches_trial_division(self):
        tab = default_sieve()
        for m in range(1, 10_001):
            assert tab.lambda_values[m] == pytest.approx(
                lambda_trial(m), abs=1e-15)

    def test_divisor_identity(self):
        # sum of Lambda(d) over d | m telescopes to log m
        n = 10_000
        lam = default_sieve().lambda_values
        acc = np.zeros(n + 1)
        for d in range(2, n + 1):
            if lam[d] != 0.0:
                acc[d::d] += lam[d]
        m = np.arange(2, n + 1, dtype=np.float64)
        assert np.max(np.abs(acc[2:] - np.log(m))) <= 1e-12

    def test_limit_one(self):
        tab = build_sieve(1)
        assert tab.limit == 1
        assert list(tab.lambda_values) == [0.0, 0.0]

    def test_bad_limit(self):
        with pytest.raises(DomainError):
            build_sieve(0)

    def test_table_is_read_only(self):
        tab = default_sieve()
        with pytest.raises(ValueError):
            tab.lambda_values[2] = 1.0


class TestVonMangoldt:
    def test_examples(self):
        assert von_mangoldt(1) == 0.0
        assert von_mangoldt(8) == pytest.approx(math.log(2), rel=1e-15)
        assert von_mangoldt(6) == 0.0

    def test_factor_probe_beyond_limit(self):
        tab = build_sieve(50)
        assert von_mangoldt(243, tab) == pytest.approx(math.log(3), rel=1e-15)
        assert von_mangoldt(221, tab) == 0.0  # 13 * 17
        assert von_mangoldt(9973, tab) == pytest.approx(
            math.log(9973), rel=1e-15)
        assert von_mangoldt(2 ** 20, tab) == pytest.approx(
            math.log(2), rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            von_mangoldt(0)

    @given(st.integers(min_value=1, max_value=200_000))
    def test_agrees_with_trial_division(self, m):
        assert von_mangoldt(m) == pytest.approx(lambda_trial(m), abs=1e-15)


class TestChebyshevC:
    def test_empty_sum(self):
        assert chebyshev_C(1) == 0.0
        assert chebyshev_C(1.9) == 0.0

    def test_small_value(self):
        oracle = math.fsum(lambda_trial(m) / m for m in range(1, 5))
        got = chebyshev_C(4)
        assert math.isclose(got, oracle, rel_tol=1e-13)
        # log2/2 + log3/3 + log2/4, frozen from the oracle above
        assert math.isclose(got, 0.8860644816426623, rel_tol=1e-13)

    def test_log_growth_sweep(self, big_sieve):
        dev = max(abs(chebyshev_C(10.0 ** j, big_sieve) - j * math.log(10))
                  for j in range(1, 7))
        assert dev <= 2.0

    def test_beyond_limit(self):
        with pytest.raises(SieveLimitError):
            chebyshev_C(DEFAULT_SIEVE_LIMIT + 1)

    def test_below_one(self):
        with pytest.raises(DomainError):
            chebyshev_C(0.5)


class TestWeightedSums:
    def test_order_zero_matches_C(self):
        assert weighted_sum(0, 100) == chebyshev_C(100)

    def test_brute_force_order_one(self):
        oracle = math.fsum(
            math.log(m) * lambda_trial(m) / m for m in range(2, 11))
        assert math.isclose(weighted_sum(1, 10), oracle, rel_tol=1e-13)

    def test_asymptotic_ratio(self, big_sieve):
        # (n+1) * sum / (log T)^(n+1) -> 1 with an O(1/log T) defect
        T = 10.0 ** 6
        lt = math.log(T)
        for n in range(6):
            ratio = weighted_sum(n, T, big_sieve) * (n + 1) / lt ** (n + 1)
            assert abs(ratio - 1.0) <= 3.0 * (n + 1) / lt

    def test_unweighted_psi_ten(self):
        oracle = math.fsum(lambda_trial(m) for m in range(1, 11))
        got = unweighted_sum(0, 10)
        assert math.isclose(got, oracle, rel_tol=1e-13)
        # 3log2 + 2log3 + log5 + log7, frozen from the oracle above
        assert math.isclose(got, 7.832014180505469, rel_tol=1e-13)

    def test_unweighted_growth(self, big_sieve):
        for n in range(6):
            for T in (10.0 ** 3, 10.0 ** 4, 10.0 ** 5):
                ratio = unweighted_sum(n, T, big_sieve) / (
                    T * math.log(T) ** n)
                assert ratio <= 1.5

    def test_unweighted_at_one(self):
        for n in range(6):
            assert unweighted_sum(n, 1) == 0.0

    @given(st.integers(min_value=0, max_value=4),
           st.floats(min_value=2.0, max_value=20_000.0),
           st.floats(min_value=2.0, max_value=20_000.0))
    def test_monotone_in_T(self, n, a, b):
        lo, hi = sorted((a, b))
        assert weighted_sum(n, lo) <= weighted_sum(n, hi)
        assert unweighted_sum(n, lo) <= unweighted_sum(n, hi)

    def test_domain(self):
        with pytest.raises(DomainError):
            weighted_sum(-1, 100)
        with pytest.raises(DomainError):
            weighted_sum(1, 1.5)
        with pytest.raises(SieveLimitError):
            weighted_sum(1, DEFAULT_SIEVE_LIMIT + 1)


def double_loop_D(n: int, X: float, table: SieveTable) -> float:
    """Literal double loop over pairs l*m <= X; shares the weight vector
    with the divisor form so only the counting is under test."""
    top = int(math.floor(X))
    m = np.arange(top + 1, dtype=np.float64)
    if top >= 0:
        m[0] = 1.0
    weights = table.lambda_values[:top + 1] * np.log(m) ** n
    terms = []
    for mm in range(2, top + 1):
        w = weights[mm]
        if w == 0.0:
            continue
        ell = 1
        while ell * mm <= X:
            terms.append(w)
            ell += 1
    return math.fsum(terms)


class TestTrueValueD:
    def test_trivial_below_two(self):
        for n in range(1, 5):
            assert true_value_D(n, 1.5) == 0.0

    def test_single_pair(self):
        # only (l, m) = (1, 2) qualifies below 2, frozen from the double loop
        got = true_value_D(1, 2)
        assert got == double_loop_D(1, 2, default_sieve())
        assert math.isclose(got, math.log(2) ** 2, rel_tol=1e-13)
        assert math.isclose(got, 0.4804530139182014, rel_tol=1e-13)

    def test_divisor_form_equals_double_loop(self):
        tab = default_sieve()
        xs = list(range(1, 129)) + [250, 500, 640, 777, 1000, 402.5, 999.25]
        for n in range(1, 5):
            for X in xs:
                assert true_value_D(n, X, tab) == double_loop_D(n, X, tab)

    @given(st.integers(min_value=1, max_value=4),
           st.floats(min_value=1.0, max_value=1000.0))
    def test_divisor_form_equals_double_loop_random(self, n, X):
        tab = default_sieve()
        assert true_value_D(n, X, tab) == double_loop_D(n, X, tab)

    def test_domain(self):
        with pytest.raises(DomainError):
            true_value_D(0, 10)
        with pytest.raises(DomainError):
            true_value_D(1, 0.5)
        with pytest.raises(SieveLimitError):
            true_value_D(1, DEFAULT_SIEVE_LIMIT + 1)


class TestStieltjes:
    def test_euler_mascheroni(self):
        # harmonic partial sum with an integral tail, independent N
        N = 317_811
        m = np.arange(1, N + 1, dtype=np.float64)
        oracle = (math.fsum(1.0 / m) - math.log(N) - 0.5 / N
                  + 1.0 / (12.0 * N * N) - 1.0 / (120.0 * N ** 4))
        c0 = stieltjes(0)
        assert abs(c0 - oracle) <= 1e-10
        assert abs(c0 - 0.5772156649) <= 1e-8

    def test_first_coefficient(self):
        # log-weighted partial sum with its own tail, independent N
        N = 200_000
        m = np.arange(1, N + 1, dtype=np.float64)
        lx = math.log(N)
        classical = (math.fsum(np.log(m) / m) - 0.5 * lx * lx
                     - 0.5 * lx / N - (1.0 - lx) / (12.0 * N * N)
                     + (11.0 - 6.0 * lx) / (720.0 * N ** 4))
        c1 = stieltjes(1)
        assert abs(c1 - (-classical)) <= 1e-9
        assert c1 > 0  # Laurent coefficient flips the classical sign
        assert abs(abs(c1) - 0.0728158455) <= 1e-8

    def test_near_pole_fit(self):
        # pins both signs: zeta(1+h) = 1/h + c0 + c1 h + O(h^2)
        c = stieltjes_constants()
        for h in (1e-2, -1e-2):
            z = zeta_em(1.0 + h, PIPELINE_PARAMS)
            assert abs(z.imag) <= 1e-12
            assert abs(z.real - 1.0 / h - c.c0 - c.c1 * h) <= 5.0 * h * h

    def test_constants_dataclass(self):
        c = stieltjes_constants()
        assert c.c0 == stieltjes(0)
        assert c.c1 == stieltjes(1)
        assert c.convention == "laurent-coefficient"

    def test_unsupported_order(self):
        with pytest.raises(DomainError):
            stieltjes(2)
        with pytest.raises(DomainError):
            stieltjes(-1)
