import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dyadic_weights import (
    DyadicIndex,
    NotNested,
    SizeLimit,
    WeightTree,
    convexity_lower_bound,
    doubling_constant,
    haar_coeffs_from_tree,
    lambda_op,
    lambda_op_product,
    ratio_comparison,
    symmetric_expansion_oracle,
)
from dyadic_weights.errors import DyadicError
from dyadic_weights.paraexp import amgm_bound, symmetric_sums
from dyadic_weights.periodic import PeriodicSpec, periodic_weight

from conftest import trees

lams = st.floats(0.0, 1.0)
tuples = st.lists(st.floats(0.05, 20.0), min_size=1, max_size=8)


class TestLambdaOperation:
    def test_example(self):
        moved = lambda_op(WeightTree(1, [0.6]), 0.5)
        assert moved.splits[0] == pytest.approx(0.55)
        assert haar_coeffs_from_tree(moved)[(0, 0)] == pytest.approx(-0.1)

    @given(trees())
    def test_endpoints(self, tree):
        np.testing.assert_allclose(lambda_op(tree, 0.0).leaves(), 1.0)
        np.testing.assert_array_equal(lambda_op(tree, 1.0).splits, tree.splits)

    @given(trees(), lams)
    def test_two_routes_agree(self, tree, lam):
        by_split = lambda_op(tree, lam)
        by_product = lambda_op_product(haar_coeffs_from_tree(tree), lam)
        np.testing.assert_allclose(by_product.splits, by_split.splits, atol=1e-13)

    @given(trees(), lams, lams)
    def test_composition(self, tree, lam, mu):
        twice = lambda_op(lambda_op(tree, lam), mu)
        np.testing.assert_allclose(twice.splits, lambda_op(tree, lam * mu).splits, atol=1e-14)

    @given(trees(), lams)
    def test_doubling_not_worse(self, tree, lam):
        assert doubling_constant(lambda_op(tree, lam)) <= doubling_constant(tree) * (1 + 1e-12)

    def test_negative_lambda_reflects_coefficients(self):
        t = WeightTree(1, [0.6])
        assert lambda_op(t, -1.0).splits[0] == pytest.approx(0.4)

    def test_lambda_range(self):
        with pytest.raises(DyadicError):
            lambda_op(WeightTree(1, [0.6]), 1.5)


class TestConvexity:
    def test_examples(self):
        lhs, rhs = convexity_lower_bound([2.0, 0.25], 0.5)
        assert lhs == pytest.approx(1.5 * 0.625)
        assert rhs == 0.5
        assert convexity_lower_bound([4.0, 4.0], 0.3) == pytest.approx((1.9**2, 1.0))

    @given(tuples, lams)
    def test_lower_bound(self, a, lam):
        lhs, rhs = convexity_lower_bound(a, lam)
        assert lhs >= rhs - 1e-12 * max(1.0, rhs)

    @given(tuples, lams)
    def test_expansion_matches_product(self, a, lam):
        lhs, _ = convexity_lower_bound(a, lam)
        assert symmetric_expansion_oracle(a, lam) == pytest.approx(lhs, rel=1e-10)

    def test_symmetric_sums(self):
        assert symmetric_sums([1.0, 2.0, 3.0]) == [1.0, 6.0, 11.0, 6.0]

    @given(tuples, st.data())
    def test_amgm(self, a, data):
        i = data.draw(st.integers(0, len(a)))
        e_i, bound = amgm_bound(a, i)
        assert e_i >= bound * (1 - 1e-12)

    def test_oracle_size_cap(self):
        with pytest.raises(SizeLimit):
            symmetric_expansion_oracle([1.0] * 21, 0.5)

    def test_rejects_nonpositive(self):
        with pytest.raises(DyadicError):
            convexity_lower_bound([1.0, 0.0], 0.5)


class TestRatioComparison:
    def test_example(self):
        t = periodic_weight(PeriodicSpec((0.6, 0.7)), 3)
        lhs, rhs = ratio_comparison(t, 0.5, DyadicIndex(2, 0), DyadicIndex(0, 0), -1.0)
        assert lhs == pytest.approx(1 / (1.1 * 1.2))
        assert rhs == 1.0

    @given(trees(max_depth=6), lams, st.floats(-5.0, -0.01), st.data())
    def test_inequality(self, tree, lam, r, data):
        ki = data.draw(st.integers(0, tree.depth))
        ji = data.draw(st.integers(0, 2**ki - 1))
        kj = data.draw(st.integers(0, ki))
        lhs, rhs = ratio_comparison(tree, lam, DyadicIndex(ki, ji), DyadicIndex(kj, ji >> (ki - kj)), r)
        assert lhs <= rhs * (1 + 1e-12)

    def test_not_nested(self):
        with pytest.raises(NotNested):
            ratio_comparison(WeightTree.uniform(3), 0.5, DyadicIndex(2, 0), DyadicIndex(1, 1), -1.0)

    def test_positive_r(self):
        with pytest.raises(DyadicError):
            ratio_comparison(WeightTree.uniform(3), 0.5, DyadicIndex(2, 0), DyadicIndex(0, 0), 1.0)
