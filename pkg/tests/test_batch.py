"""Vectorized rows and Taylor models against the scalar evaluator."""

import math

import numpy as np
import pytest

from shankslab.batch import (
    MODEL_DEGREE, TaylorTable, build_models, hardy_values, line_derivatives,
)
from shankslab.engine import (
    ACCURATE_PARAMS, PIPELINE_PARAMS, hardy_z, zeta_deriv_em, zeta_em,
)
from shankslab.errors import AccuracyError, DomainError

import oracles

PARAMS = PIPELINE_PARAMS


@pytest.fixture(scope="module")
def mixed_ts():
    return np.concatenate([
        np.linspace(15.0, 26.0, 23),
        np.linspace(950.0, 1050.0, 40),
        np.linspace(9990.0, 10010.0, 41),
    ])


@pytest.fixture(scope="module")
def mid_models():
    centers = np.arange(95.0, 116.0, 0.5)
    return build_models(centers, PARAMS)


class TestRows:
    def test_rows_match_scalar(self, mixed_ts):
        # mixed heights share one cutoff per chunk; correction-term
        # cancellation at the low rows costs a few digits but stays far
        # inside the accuracy target
        rows = line_derivatives(mixed_ts, [0, 1, 2, 3, 4], PARAMS)
        for j in (0, 1, 2, 3, 4):
            sc = np.array([zeta_deriv_em(0.5 + 1j * t, j, PARAMS)
                           for t in mixed_ts])
            err = np.abs(rows[j] - sc) / (1.0 + np.abs(sc))
            assert float(err.max()) < 1e-9

    def test_sorted_rows_match_scalar_tightly(self):
        ts = np.linspace(9990.0, 10010.0, 41)
        rows = line_derivatives(ts, [0, 3], PARAMS)
        for j in (0, 3):
            sc = np.array([zeta_deriv_em(0.5 + 1j * t, j, PARAMS)
                           for t in ts])
            err = np.abs(rows[j] - sc) / (1.0 + np.abs(sc))
            assert float(err.max()) < 1e-11

    def test_hardy_rows_match_scalar(self, mixed_ts):
        zv = hardy_values(mixed_ts, PARAMS)
        sc = np.array([hardy_z(t, PARAMS) for t in mixed_ts])
        assert float(np.max(np.abs(zv - sc))) < 1e-11

    def test_rows_match_mpmath_at_top(self):
        ts = np.array([119990.25, 119995.75, 119999.5])
        zv = hardy_values(ts, PARAMS)
        for k, t in enumerate(ts):
            assert abs(zv[k] - oracles.z_ref(float(t))) < 1e-10

    def test_thread_count_does_not_change_bits(self, mixed_ts):
        a = line_derivatives(mixed_ts, [0, 2], PARAMS, threads=1)
        b = line_derivatives(mixed_ts, [0, 2], PARAMS, threads=3)
        for j in (0, 2):
            assert np.array_equal(a[j], b[j])

    def test_empty_input(self):
        out = line_derivatives(np.array([]), [0], PARAMS)
        assert out[0].size == 0

    def test_order_cap(self):
        with pytest.raises(DomainError):
            line_derivatives(np.array([50.0]), [9], PARAMS)

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            line_derivatives(np.array([-1.0]), [0], PARAMS)
        with pytest.raises(DomainError):
            hardy_values(np.array([3.0]), PARAMS)

    def test_accuracy_gate_fires(self):
        # eighth derivative at modest height cannot meet the default budget
        with pytest.raises(AccuracyError):
            line_derivatives(np.array([100.0]), [8])


class TestModels:
    def test_values_match_scalar(self, mid_models):
        q = np.linspace(96.0, 114.0, 121)
        mv = mid_models.zeta_at(q)
        sv = np.array([zeta_em(0.5 + 1j * t, PARAMS) for t in q])
        assert float(np.max(np.abs(mv - sv))) < 1e-11

    def test_z_matches_scalar(self, mid_models):
        q = np.linspace(96.0, 114.0, 121)
        mz = mid_models.z_at(q)
        sz = np.array([hardy_z(t, PARAMS) for t in q])
        assert float(np.max(np.abs(mz - sz))) < 1e-11

    def test_deviation_within_claimed_bound(self, mid_models):
        q = np.linspace(96.0, 114.0, 321)
        mv = mid_models.zeta_at(q)
        sv = np.array([zeta_em(0.5 + 1j * t, ACCURATE_PARAMS) for t in q])
        assert float(np.max(np.abs(mv - sv))) < mid_models.worst_bound + 1e-9

    def test_bound_is_small_at_mid_height(self, mid_models):
        assert mid_models.worst_bound < 1e-10

    def test_derivatives_from_models(self, mid_models):
        q = np.linspace(97.0, 113.0, 41)
        for n in (1, 2):
            mv = mid_models.deriv_at(q, n)
            sv = np.array([zeta_deriv_em(0.5 + 1j * t, n, PARAMS)
                           for t in q])
            assert float(np.max(np.abs(mv - sv))) < 1e-9

    def test_slope_matches_difference_quotient(self, mid_models):
        q = np.linspace(97.0, 113.0, 31)
        h = 1e-5
        zp = mid_models.z_deriv_at(q)
        fd = np.array([(hardy_z(t + h, PARAMS) - hardy_z(t - h, PARAMS))
                       / (2 * h) for t in q])
        assert float(np.max(np.abs(zp - fd))) < 1e-6

    def test_scalar_query_shape(self, mid_models):
        v = mid_models.z_at(100.5)
        assert isinstance(v, float)
        c = mid_models.zeta_at(100.5)
        assert isinstance(c, complex)

    def test_coverage_enforced(self, mid_models):
        with pytest.raises(DomainError):
            mid_models.z_at(94.0)
        with pytest.raises(DomainError):
            mid_models.z_at(117.5)

    def test_top_of_range_accuracy(self):
        centers = np.arange(119980.0, 119996.0, 0.32)
        tab = build_models(centers, PARAMS)
        q = np.linspace(119981.0, 119995.0, 41)
        mz = tab.z_at(q)
        sz = np.array([hardy_z(t, PARAMS) for t in q])
        assert float(np.max(np.abs(mz - sz))) < 1e-11
        assert tab.worst_bound < 2e-9

    def test_thread_count_does_not_change_bits(self):
        centers = np.arange(500.0, 520.0, 0.5)
        a = build_models(centers, PARAMS, threads=1)
        b = build_models(centers, PARAMS, threads=4)
        assert np.array_equal(a.coeffs, b.coeffs)
        assert np.array_equal(a.bound, b.bound)

    def test_sparse_grid_rejected(self):
        centers = np.arange(119900.0, 119990.0, 4.0)
        with pytest.raises(DomainError):
            build_models(centers, PARAMS)

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            build_models(np.array([100.0]), PARAMS)
        with pytest.raises(DomainError):
            build_models(np.array([100.0, 100.0, 101.0]), PARAMS)
        with pytest.raises(DomainError):
            build_models(np.array([3.0, 5.0]), PARAMS)

    def test_degree_recorded(self, mid_models):
        assert mid_models.degree == MODEL_DEGREE
        assert mid_models.coeffs.shape == (mid_models.centers.size,
                                           MODEL_DEGREE + 1)
