"""The lambda-operation and the convexity estimate behind A_p stability.

On split fractions the operation is affine, ``s -> 1/2 + lam (s - 1/2)``; in the
paraexponential picture it scales every Haar coefficient by ``lam``.  Both
routes are provided so that each can check the other.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .dyadic import (
    DyadicIndex,
    HaarSeries,
    WeightTree,
    log_mean,
    tree_from_haar_coeffs,
)
from .errors import DyadicError, NotNested, SizeLimit

MAX_ORACLE_TERMS = 20


def check_lambda(lam: float) -> float:
    lam = float(lam)
    if not -1.0 <= lam <= 1.0:
        raise DyadicError(f"lambda must lie in [-1, 1], got {lam}")
    return lam


def lambda_split(s, lam: float):
    s = np.asarray(s, dtype=float)
    if lam == 1.0:
        return s.copy()  # exact identity, no rounding through s - 1/2
    return 0.5 + lam * (s - 0.5)


def lambda_op(tree: WeightTree, lam: float) -> WeightTree:
    """Apply the lambda-operation split by split."""
    lam = check_lambda(lam)
    return WeightTree(tree.depth, lambda_split(tree.splits, lam), tree.eps_floor)


def lambda_op_product(series: HaarSeries, lam: float) -> WeightTree:
    """The partial product ``prod (1 + lam b_I h_I)`` as a tree."""
    lam = check_lambda(lam)
    return tree_from_haar_coeffs(series.scaled(lam))


def convexity_lower_bound(a, lam: float) -> tuple[float, float]:
    """Return ``(prod (1 + lam (a_j - 1)), min(1, prod a_j))``; the first dominates."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise DyadicError("all a_j must be positive")
    if not 0.0 <= lam <= 1.0:
        raise DyadicError(f"lambda must lie in [0, 1], got {lam}")
    lhs = math.exp(float(np.sum(np.log1p(lam * (a - 1.0)))))
    rhs = min(1.0, math.exp(float(np.sum(np.log(a)))))
    return lhs, rhs


def symmetric_sums(a) -> list[float]:
    """Elementary symmetric sums ``e_0 .. e_n`` by enumerating every subset."""
    a = [float(x) for x in a]
    if len(a) > MAX_ORACLE_TERMS:
        raise SizeLimit(f"subset enumeration capped at n = {MAX_ORACLE_TERMS}, got {len(a)}")
    return [
        math.fsum(math.prod(c) for c in itertools.combinations(a, i))
        for i in range(len(a) + 1)
    ]


def symmetric_expansion_oracle(a, lam: float) -> float:
    """``sum_i (1-lam)^{n-i} lam^i e_i(a)``, the expanded form of the product."""
    e = symmetric_sums(a)
    n = len(e) - 1
    return math.fsum((1.0 - lam) ** (n - i) * lam**i * e[i] for i in range(n + 1))


def amgm_bound(a, i: int) -> tuple[float, float]:
    """``(e_i(a), C(n, i) (prod a)^{i/n})``; arithmetic-geometric means puts the first on top."""
    a = [float(x) for x in a]
    n = len(a)
    e_i = symmetric_sums(a)[i]
    log_prod = math.fsum(math.log(x) for x in a)
    return e_i, math.comb(n, i) * math.exp(i / n * log_prod)


def ratio_comparison(
    tree: WeightTree, lam: float, inner: DyadicIndex, outer: DyadicIndex, r: float
) -> tuple[float, float]:
    """``((m_I w_lam / m_J w_lam)^r, max(1, (m_I w / m_J w)^r))`` for nested ``I`` in ``J``.

    For ``lam`` in [0, 1] and negative ``r`` the first never exceeds the second.
    """
    inner, outer = DyadicIndex(*inner), DyadicIndex(*outer)
    if not outer.contains(inner):
        raise NotNested(f"{tuple(inner)} is not contained in {tuple(outer)}")
    if not 0.0 <= lam <= 1.0:
        raise DyadicError(f"lambda must lie in [0, 1], got {lam}")
    if r >= 0:
        raise DyadicError(f"r must be negative, got {r}")
    moved = lambda_op(tree, lam)
    log_ratio_lam = log_mean(moved, inner) - log_mean(moved, outer)
    log_ratio = log_mean(tree, inner) - log_mean(tree, outer)
    return math.exp(r * log_ratio_lam), max(1.0, math.exp(r * log_ratio))
