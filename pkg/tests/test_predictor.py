"""Kernel predictor: frozen examples, bounds, and numeric invariants.

Expected values marked "direct evaluation" were computed with an
independent pure-python weighted-mean oracle (math.exp, explicit loops)
before this module's implementation existed.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qosalloc.predictor import (
    EmptyProfileError,
    GrnnPredictor,
    KernelParams,
    predict,
    predict_batch,
    round_response,
    squared_distance,
    variation_bound,
)
from qosalloc.profile import Profile


def make_profile(records, link_count=None, level_count=12):
    n = link_count or len(records[0][0])
    return Profile(n, level_count, None, records)


class TestSquaredDistance:
    def test_identity(self):
        assert squared_distance((10.0, 10.0), (10.0, 10.0)) == 0.0

    def test_hand_expanded(self):
        assert squared_distance((10.0, 10.0), (30.0, 30.0)) == 800.0

    def test_single_axis(self):
        assert squared_distance((45.0, 0.0), (0.0, 0.0)) == 2025.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            squared_distance((1.0, 2.0), (1.0,))

    # Mbps-scale values; squaring a subnormal difference would underflow
    # to zero and void the zero-iff-equal claim
    bandwidth = st.floats(-100, 100).map(lambda v: round(v, 6))

    @given(
        st.lists(bandwidth, min_size=1, max_size=4),
        st.lists(bandwidth, min_size=1, max_size=4),
    )
    def test_symmetric_and_nonnegative(self, a, b):
        if len(a) != len(b):
            with pytest.raises(ValueError):
                squared_distance(a, b)
            return
        d = squared_distance(a, b)
        assert d >= 0.0
        assert d == squared_distance(b, a)
        assert (d == 0.0) == (a == b)


class TestPredict:
    def test_single_record_collapses(self):
        profile = make_profile([((10.0, 10.0), 4)])
        for x in [(10.0, 10.0), (0.0, 0.0), (99.0, 1.0)]:
            pred = predict(x, profile, KernelParams(800.0))
            assert pred.y_star == 4.0
            assert pred.y_hat == 4

    def test_equidistant_symmetry(self):
        profile = make_profile([((10.0, 10.0), 4), ((30.0, 30.0), 8)])
        pred = predict((20.0, 20.0), profile, KernelParams(800.0))
        assert pred.y_star == pytest.approx(6.0, abs=1e-12)
        assert pred.y_hat == 6

    def test_weighted_mean(self):
        # direct evaluation with weights {1, e^-1}
        profile = make_profile([((10.0, 10.0), 4), ((30.0, 30.0), 8)])
        pred = predict((10.0, 10.0), profile, KernelParams(800.0))
        assert pred.y_star == pytest.approx(5.075765685479981, abs=1e-12)
        assert pred.y_hat == 5
        assert pred.kernel_sum == pytest.approx(1.0 + math.exp(-1.0), abs=1e-12)

    def test_empty_profile(self):
        with pytest.raises(EmptyProfileError):
            predict((1.0,), Profile(1, 12, None), KernelParams())

    def test_dimension_mismatch(self):
        profile = make_profile([((10.0, 10.0), 4)])
        with pytest.raises(ValueError):
            predict((1.0,), profile, KernelParams())

    def test_pure_function(self):
        profile = make_profile([((10.0, 10.0), 4), ((30.0, 30.0), 8)])
        k = KernelParams(640.0)
        first = predict((17.0, 4.0), profile, k)
        second = predict((17.0, 4.0), profile, k)
        assert first == second

    def test_batch_matches_single(self):
        rng = np.random.default_rng(5)
        profile = make_profile(
            [(tuple(rng.uniform(0, 50, 2)), int(rng.integers(1, 13))) for _ in range(9)]
        )
        k = KernelParams(333.0)
        xs = rng.uniform(0, 50, (20, 2))
        y_star, ksum = predict_batch(xs, profile, k)
        for i in range(20):
            single = predict(tuple(xs[i]), profile, k)
            assert single.y_star == y_star[i]
            assert single.kernel_sum == ksum[i]

    def test_underflow_falls_back_to_nearest(self):
        # distances drive every weight to exact zero; nearest record wins
        profile = make_profile([((0.0,), 1), ((2000.0,), 5)], level_count=12)
        pred = predict((1950.0,), profile, KernelParams(1.0))
        assert pred.kernel_sum == 0.0
        assert pred.y_star == 5.0
        assert pred.y_hat == 5

    def test_underflow_tie_keeps_lowest_index(self):
        profile = make_profile([((0.0,), 2), ((2000.0,), 5)], level_count=12)
        pred = predict((1000.0,), profile, KernelParams(1.0))
        assert pred.kernel_sum == 0.0
        assert pred.y_star == 2.0


class TestRounding:
    def test_half_up_at_target_boundary(self):
        # y* exactly a - 0.5 must round up to a
        assert round_response(6.5, 12) == 7
        assert round_response(6.499999999, 12) == 6

    def test_clamping(self):
        assert round_response(0.2, 12) == 1
        assert round_response(12.7, 12) == 12

    @given(st.floats(1.0, 12.0), st.integers(2, 12))
    def test_within_levels(self, y_star, level_count):
        assert 1 <= round_response(y_star, level_count) <= level_count


class TestConvexCombination:
    @settings(max_examples=200)
    @given(st.data())
    def test_y_star_within_response_range(self, data):
        n = data.draw(st.integers(1, 3))
        p = data.draw(st.integers(1, 12))
        records = [
            (
                tuple(data.draw(st.floats(0, 80)) for _ in range(n)),
                data.draw(st.integers(1, 12)),
            )
            for _ in range(p)
        ]
        sigma2 = data.draw(st.floats(50, 2000))
        x = tuple(data.draw(st.floats(0, 80)) for _ in range(n))
        profile = make_profile(records, link_count=n)
        pred = predict(x, profile, KernelParams(sigma2))
        responses = [r for _, r in records]
        assert min(responses) - 1e-9 <= pred.y_star <= max(responses) + 1e-9


class TestPermutation:
    def test_permuted_records_agree_to_reassociation(self):
        # summation runs in insertion order, so permuting records can move
        # y* only by float re-association noise
        rng = np.random.default_rng(11)
        for _ in range(200):
            p = int(rng.integers(2, 20))
            records = [
                (tuple(rng.uniform(0, 60, 2)), int(rng.integers(1, 13)))
                for _ in range(p)
            ]
            profile = make_profile(records)
            perm = list(rng.permutation(p))
            shuffled = make_profile([records[i] for i in perm])
            k = KernelParams(float(rng.uniform(50, 2000)))
            x = tuple(rng.uniform(0, 60, 2))
            a = predict(x, profile, k).y_star
            b = predict(x, shuffled, k).y_star
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)

    def test_same_order_is_bit_identical(self):
        records = [((3.0, 4.0), 2), ((10.0, 1.0), 9), ((7.5, 2.5), 5)]
        k = KernelParams(123.0)
        a = predict((5.0, 5.0), make_profile(records), k)
        b = predict((5.0, 5.0), make_profile(list(records)), k)
        assert a.y_star == b.y_star
        assert a.kernel_sum == b.kernel_sum


class TestVariationBound:
    def test_direct_substitution(self):
        assert variation_bound(11, 12, 11.0) == 1.0
        assert variation_bound(1, 12, 1.0) == 11.0
        assert variation_bound(4, 2, 4.0) == 0.25

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            variation_bound(3, 12, 0.0)
        with pytest.raises(ValueError):
            variation_bound(3, 12, -1.0)
        with pytest.raises(ValueError):
            variation_bound(3, 1, 2.0)
        with pytest.raises(ValueError):
            variation_bound(0, 12, 0.5)
        with pytest.raises(ValueError):
            # kernel sum cannot exceed the record count (weights <= 1)
            variation_bound(2, 12, 3.0)

    def test_append_respects_bound(self):
        # randomized spot check; the full 1000-event sweep runs in the
        # acceptance suite
        rng = np.random.default_rng(3)
        for _ in range(300):
            n = int(rng.integers(1, 3))
            p = int(rng.integers(1, 25))
            records = [
                (tuple(rng.uniform(0, 60, n)), int(rng.integers(1, 13)))
                for _ in range(p)
            ]
            x = tuple(rng.uniform(0, 60, n))
            k = KernelParams(float(rng.uniform(50, 2000)))
            before = predict(x, make_profile(records, link_count=n), k)
            records.append((tuple(rng.uniform(0, 60, n)), int(rng.integers(1, 13))))
            after = predict(x, make_profile(records, link_count=n), k)
            bound = variation_bound(p + 1, 12, after.kernel_sum)
            assert abs(after.y_star - before.y_star) <= bound + 1e-9


def test_predictor_wrapper_matches_functions():
    profile = make_profile([((0.0,), 1), ((30.0,), 3)], level_count=3)
    k = KernelParams(100.0)
    wrapper = GrnnPredictor(k)
    assert wrapper.predict((10.0,), profile) == predict((10.0,), profile, k)
