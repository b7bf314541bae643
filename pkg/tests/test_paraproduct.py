import math

import numpy as np
import pytest
import scipy.linalg
import scipy.sparse as sp
from hypothesis import given, strategies as st

from dyadic_weights import (
    DyadicIndex,
    HaarSeries,
    MeanZeroFunction,
    SplitOutOfRange,
    WeightTree,
    apply_resolvent,
    haar_coeffs_from_tree,
    haar_value,
    lp_norm,
    paraproduct_matrix,
    resolvent_norm_lower_bound,
    resolvent_sweep,
)
from dyadic_weights.paraproduct import (
    apply_resolvent_adjoint,
    fit_series,
    paraproduct_adjoint_apply,
    paraproduct_apply,
)

from conftest import random_tree


def series(rng, depth, scale=0.5):
    return haar_coeffs_from_tree(random_tree(rng, depth)).scaled(scale)


def leaf_space_paraproduct(b, f):
    """pi_b f computed on leaf samples: means from the leaf values, Haar functions sampled."""
    depth = b.depth
    n = 2**depth
    xs = (np.arange(n) + 0.5) / n
    fv = f.leaves()
    out = np.zeros(n)
    for k in range(depth):
        w = n >> k
        for j in range(2**k):
            idx = DyadicIndex(k, j)
            m = fv[j * w : (j + 1) * w].mean()
            out += m * b[idx] * np.array([haar_value(idx, x) for x in xs])
    return MeanZeroFunction.from_leaves(out)


class TestFunctions:
    def test_haar_leaves(self):
        f = MeanZeroFunction.haar(2, DyadicIndex(1, 0))
        np.testing.assert_allclose(f.leaves(), [-math.sqrt(2), math.sqrt(2), 0, 0])

    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_analysis_synthesis(self, depth, seed):
        c = np.random.default_rng(seed).standard_normal(2**depth - 1)
        f = MeanZeroFunction(depth, c)
        assert abs(f.leaves().mean()) < 1e-12
        np.testing.assert_allclose(MeanZeroFunction.from_leaves(f.leaves()).coeffs, c, atol=1e-12)
        # Parseval
        assert lp_norm(f, 2) == pytest.approx(np.linalg.norm(c), rel=1e-12)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 6.0])
    def test_lp_norm_of_haar(self, p):
        f = MeanZeroFunction.haar(6, DyadicIndex(3, 5))
        assert lp_norm(f, p) == pytest.approx(2.0 ** (-3 * (1 / p - 0.5)), rel=1e-12)

    def test_lp_norm_range(self):
        with pytest.raises(ValueError):
            lp_norm(MeanZeroFunction.haar(2, DyadicIndex(0, 0)), 0.5)


class TestOperator:
    def test_matrix_example(self):
        c = 0.3
        b = HaarSeries.from_entries(2, {(1, 0): c})
        m = paraproduct_matrix(b, 2).toarray()
        col = m[:, DyadicIndex(0, 0).flat]
        expected = np.zeros(3)
        expected[DyadicIndex(1, 0).flat] = -c
        np.testing.assert_allclose(col, expected)
        # finest level feeds nothing
        assert not m[:, 1:].any()

    @given(st.integers(1, 7), st.integers(0, 2**32 - 1))
    def test_matrix_free_matches_matrix(self, depth, seed):
        rng = np.random.default_rng(seed)
        b = series(rng, depth)
        c = rng.standard_normal(2**depth - 1)
        m = paraproduct_matrix(b, depth)
        np.testing.assert_allclose(paraproduct_apply(b, c), m @ c, atol=1e-12)
        np.testing.assert_allclose(paraproduct_adjoint_apply(b, c), m.T @ c, atol=1e-12)

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_matches_leaf_space(self, depth, seed):
        rng = np.random.default_rng(seed)
        b = series(rng, depth)
        f = MeanZeroFunction(depth, rng.standard_normal(2**depth - 1))
        expected = leaf_space_paraproduct(b, f)
        np.testing.assert_allclose(paraproduct_apply(b, f.coeffs), expected.coeffs, atol=1e-11)

    @pytest.mark.parametrize("depth", [1, 4, 8, 12])
    def test_nilpotent(self, depth):
        rng = np.random.default_rng(depth)
        m = paraproduct_matrix(series(rng, depth), depth).tocsr()
        coo = m.tocoo()
        assert np.all(coo.row > coo.col)  # strictly lower triangular in level order
        power = sp.identity(m.shape[0], format="csr")
        for _ in range(depth - 1):
            power = power @ m
        if depth > 1:
            assert power.count_nonzero() > 0  # index of nilpotency is exactly the depth
        assert (power @ m).count_nonzero() == 0

    def test_fit_series(self):
        b = HaarSeries.from_entries(3, {(0, 0): 0.1, (2, 1): 0.2})
        assert fit_series(b, 2).coeffs.tolist() == [0.1, 0.0, 0.0]
        assert fit_series(b, 4)[(2, 1)] == 0.2


class TestResolvent:
    @given(st.integers(1, 10), st.floats(-1, 1), st.integers(0, 2**32 - 1))
    def test_residual(self, depth, lam, seed):
        rng = np.random.default_rng(seed)
        b = series(rng, depth, 1.0)
        f = MeanZeroFunction(depth, rng.standard_normal(2**depth - 1))
        u = apply_resolvent(b, lam, f)
        residual = u.coeffs - lam * paraproduct_apply(b, u.coeffs) - f.coeffs
        assert np.max(np.abs(residual)) <= 1e-10 * max(1.0, np.max(np.abs(u.coeffs)))

    @pytest.mark.parametrize("depth", [3, 6, 9])
    def test_forward_substitution(self, depth):
        rng = np.random.default_rng(depth)
        b = series(rng, depth)
        f = MeanZeroFunction(depth, rng.standard_normal(2**depth - 1))
        a = np.eye(2**depth - 1) - 0.7 * paraproduct_matrix(b, depth).toarray()
        expected = scipy.linalg.solve_triangular(a, f.coeffs, lower=True)
        np.testing.assert_allclose(apply_resolvent(b, 0.7, f).coeffs, expected, rtol=1e-11, atol=1e-12)
        g = rng.standard_normal(2**depth - 1)
        expected_t = scipy.linalg.solve_triangular(a.T, g, lower=False)
        np.testing.assert_allclose(
            apply_resolvent_adjoint(b, 0.7, MeanZeroFunction(depth, g)).coeffs, expected_t, rtol=1e-11, atol=1e-12
        )

    def test_identity_on_lambda_b(self):
        # (I - lam pi_b)^{-1}(lam b) is the lambda-image weight minus one
        rng = np.random.default_rng(3)
        tree = random_tree(rng, 6)
        b = haar_coeffs_from_tree(tree)
        lam = 0.6
        from dyadic_weights import lambda_op

        u = apply_resolvent(b, lam, MeanZeroFunction(6, lam * b.coeffs))
        np.testing.assert_allclose(u.leaves(), lambda_op(tree, lam).leaves() - 1.0, atol=1e-12)


class TestNormBounds:
    def test_trivial_cases(self):
        b = HaarSeries.zeros(6)
        assert resolvent_norm_lower_bound(b, 0.9, 3.0, 6).lower_bound == pytest.approx(1.0)
        rng = np.random.default_rng(1)
        bound = resolvent_norm_lower_bound(series(rng, 6), 0.0, 2.0, 6)
        assert bound.lower_bound == pytest.approx(1.0)
        assert bound.power_iter_l2 == pytest.approx(1.0)

    @pytest.mark.parametrize("depth", [3, 5, 7])
    def test_below_exact_l2_norm(self, depth):
        rng = np.random.default_rng(depth)
        b = series(rng, depth, 1.0)
        a = np.eye(2**depth - 1) - 0.9 * paraproduct_matrix(b, depth).toarray()
        exact = np.linalg.norm(np.linalg.inv(a), 2)
        bound = resolvent_norm_lower_bound(b, 0.9, 2.0, depth)
        assert bound.lower_bound <= exact * (1 + 1e-10)
        assert bound.power_iter_l2 <= exact * (1 + 1e-10)
        assert bound.power_iter_l2 == pytest.approx(exact, rel=1e-3)

    def test_seeded(self):
        rng = np.random.default_rng(5)
        b = series(rng, 8)
        one = resolvent_norm_lower_bound(b, 0.8, 3.0, 8, seed=11)
        two = resolvent_norm_lower_bound(b, 0.8, 3.0, 8, seed=11)
        assert one == two
        assert one.power_iter_l2 is None

    def test_rejects_non_paraexponential_series(self):
        b = HaarSeries.from_entries(3, {(2, 1): 0.5})  # |b h| = 1
        with pytest.raises(SplitOutOfRange):
            resolvent_norm_lower_bound(b, 0.5, 2.0, 3)
        with pytest.raises(SplitOutOfRange):
            resolvent_sweep(b, 2.0, [3], [0.5])

    def test_depth_limits(self):
        with pytest.raises(ValueError):
            resolvent_norm_lower_bound(HaarSeries.zeros(2), 0.5, 2.0, 15)
        with pytest.raises(ValueError):
            resolvent_norm_lower_bound(HaarSeries.zeros(2), 0.5, 2.0, 2, trials=0)

    def test_sweep(self):
        rows = resolvent_sweep(HaarSeries.zeros(4), 2.0, [4, 6], [0.0, 1.0], trials=2)
        assert [(r["depth"], r["lambda"]) for r in rows] == [(4, 0.0), (4, 1.0), (6, 0.0), (6, 1.0)]
        for r in rows:
            assert r["norm_lower_bound"] == pytest.approx(1.0)
            assert r["rhp_functional_omega_lambda"] == pytest.approx(1.0)
        with pytest.raises(ValueError):
            resolvent_sweep(HaarSeries.zeros(4), 2.0, [], [0.5])
