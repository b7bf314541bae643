"""Dyadic paraproducts on mean-zero functions of finite dyadic depth.

Functions are held by their Haar coefficients on levels ``0 .. depth-1``
(flat level order), which spans exactly the mean-zero functions constant on
the depth-``depth`` leaves.  The paraproduct

    pi_b f = sum_I (m_I f) b_I h_I

only feeds coefficients at coarser levels into finer ones, so it is strictly
triangular and nilpotent; ``(I - lam pi_b)^{-1}`` is a finite Neumann sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .classes import rhp_functional
from .dyadic import DyadicIndex, HaarSeries, interleave, level_slice
from .paraexp import lambda_op_product

MAX_DEPTH = 14


def fit_series(series: HaarSeries, depth: int) -> HaarSeries:
    """Truncate or zero-pad ``series`` to ``depth`` levels."""
    if series.depth == depth:
        return series
    b = np.zeros(2**depth - 1)
    keep = min(depth, series.depth)
    b[: 2**keep - 1] = series.coeffs[: 2**keep - 1]
    return HaarSeries(depth, b)


@dataclass(frozen=True, eq=False)
class MeanZeroFunction:
    depth: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (2**self.depth - 1,):
            raise ValueError(f"expected {2**self.depth - 1} Haar coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    def level(self, k: int) -> np.ndarray:
        return self.coeffs[level_slice(k)]

    def leaves(self) -> np.ndarray:
        return _means(self.coeffs, self.depth)[-1]

    @classmethod
    def from_leaves(cls, values) -> "MeanZeroFunction":
        """Haar analysis of leaf values; the mean is discarded."""
        m = np.asarray(values, dtype=float)
        depth = int(round(math.log2(m.size)))
        out = []
        for k in range(depth - 1, -1, -1):
            left, right = m[0::2], m[1::2]
            out.append(0.5 * 2.0 ** (-k / 2) * (right - left))
            m = 0.5 * (left + right)
        return cls(depth, np.concatenate(out[::-1]) if out else np.zeros(0))

    @classmethod
    def haar(cls, depth: int, index: DyadicIndex) -> "MeanZeroFunction":
        c = np.zeros(2**depth - 1)
        c[DyadicIndex(*index).flat] = 1.0
        return cls(depth, c)


def _means(coeffs: np.ndarray, depth: int) -> list[np.ndarray]:
    """Means of the function on every level ``0 .. depth`` (root mean zero)."""
    m = np.zeros(1)
    out = [m]
    for k in range(depth):
        step = coeffs[level_slice(k)] * 2.0 ** (k / 2)
        m = interleave(m - step, m + step)
        out.append(m)
    return out


def paraproduct_apply(b: HaarSeries, coeffs: np.ndarray) -> np.ndarray:
    """Haar coefficients of ``pi_b f`` from those of ``f`` (matrix-free)."""
    means = _means(coeffs, b.depth)
    return np.concatenate([means[k] * b.level(k) for k in range(b.depth)])


def paraproduct_adjoint_apply(b: HaarSeries, coeffs: np.ndarray) -> np.ndarray:
    """Haar coefficients of ``pi_b^T g``: ``sum_{I strictly inside J} b_I g_I h_J(I)``."""
    u = b.coeffs * coeffs
    out = []
    below = np.zeros(2**b.depth)  # subtree sums of u over strictly finer levels
    for k in range(b.depth - 1, -1, -1):
        out.append(2.0 ** (k / 2) * (below[1::2] - below[0::2]))
        below = u[level_slice(k)] + below[0::2] + below[1::2]
    return np.concatenate(out[::-1])


def paraproduct_matrix(series: HaarSeries, depth: int) -> sp.csc_matrix:
    """Sparse matrix of ``pi_b`` in the Haar basis; entry ``(I, J) = b_I h_J(I)`` for ``I`` strictly inside ``J``."""
    b = fit_series(series, depth)
    rows, cols, vals = [], [], []
    for kj in range(depth):
        amp = 2.0 ** (kj / 2)
        for ki in range(kj + 1, depth):
            shift = ki - kj
            pos = np.arange(2**ki)
            bi = b.level(ki)
            nz = bi != 0
            if not nz.any():
                continue
            pos = pos[nz]
            parent = pos >> shift
            sign = np.where((pos >> (shift - 1)) & 1, 1.0, -1.0)
            rows.append(2**ki - 1 + pos)
            cols.append(2**kj - 1 + parent)
            vals.append(bi[nz] * sign * amp)
    size = 2**depth - 1
    if not rows:
        return sp.csc_matrix((size, size))
    return sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    )


def _neumann(apply, coeffs: np.ndarray, lam: float, depth: int) -> np.ndarray:
    total = coeffs.copy()
    term = coeffs
    for _ in range(depth):
        term = lam * apply(term)
        if not term.any():
            break
        total += term
    return total


def apply_resolvent(series: HaarSeries, lam: float, f: MeanZeroFunction) -> MeanZeroFunction:
    """``(I - lam pi_b)^{-1} f`` as the finite Neumann series."""
    b = fit_series(series, f.depth)
    return MeanZeroFunction(f.depth, _neumann(lambda c: paraproduct_apply(b, c), f.coeffs, lam, f.depth))


def apply_resolvent_adjoint(series: HaarSeries, lam: float, g: MeanZeroFunction) -> MeanZeroFunction:
    b = fit_series(series, g.depth)
    return MeanZeroFunction(
        g.depth, _neumann(lambda c: paraproduct_adjoint_apply(b, c), g.coeffs, lam, g.depth)
    )


def lp_norm(f: MeanZeroFunction, p: float) -> float:
    if p < 1:
        raise ValueError(f"p must be at least 1, got {p}")
    v = np.abs(f.leaves())
    scale = float(v.max()) if v.size else 0.0
    if scale == 0.0:
        return 0.0
    return scale * float(np.mean((v / scale) ** p)) ** (1.0 / p)


class NormBound(NamedTuple):
    lower_bound: float
    power_iter_l2: float | None


def trial_functions(series: HaarSeries, depth: int, trials: int, seed: int) -> list[MeanZeroFunction]:
    """Seeded Gaussian trials, the spine Haar functions, re-centred spine indicators, and ``b`` itself."""
    rng = np.random.default_rng(seed)
    size = 2**depth - 1
    out = [MeanZeroFunction(depth, rng.standard_normal(size)) for _ in range(trials)]
    for l in range(depth):
        out.append(MeanZeroFunction.haar(depth, DyadicIndex(l, 0)))
    x_left = np.arange(2**depth)
    for l in range(1, depth + 1):
        ind = (x_left < 2 ** (depth - l)).astype(float)
        out.append(MeanZeroFunction.from_leaves(ind - 2.0**-l))
    b = fit_series(series, depth)
    if b.coeffs.any():
        out.append(MeanZeroFunction(depth, b.coeffs))
    return out


def _power_iteration(series: HaarSeries, lam: float, depth: int, seed: int, iters: int = 30) -> float:
    rng = np.random.default_rng(seed + 1)
    x = rng.standard_normal(2**depth - 1)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        y = apply_resolvent(series, lam, MeanZeroFunction(depth, x)).coeffs
        est = float(np.linalg.norm(y))
        z = apply_resolvent_adjoint(series, lam, MeanZeroFunction(depth, y)).coeffs
        nz = np.linalg.norm(z)
        if nz == 0:
            break
        x = z / nz
    y = apply_resolvent(series, lam, MeanZeroFunction(depth, x)).coeffs
    return max(est, float(np.linalg.norm(y)))


def resolvent_norm_lower_bound(
    series: HaarSeries, lam: float, p: float, depth: int, trials: int = 16, seed: int = 0
) -> NormBound:
    """Lower bound on ``||(I - lam pi_b)^{-1}||`` on mean-zero ``L^p`` at the given depth."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must lie in [1, {MAX_DEPTH}]")
    b = fit_series(series, depth).check_paraexp()  # at lambda = 1, hence for every |lambda| <= 1
    best = 0.0
    for f in trial_functions(b, depth, trials, seed):
        denom = lp_norm(f, p)
        if denom > 0:
            best = max(best, lp_norm(apply_resolvent(b, lam, f), p) / denom)
    power = _power_iteration(b, lam, depth, seed) if p == 2 else None
    return NormBound(best, power)


SWEEP_COLUMNS = (
    "depth", "lambda", "p", "norm_lower_bound", "power_iter_bound_p2", "rhp_functional_omega_lambda",
)


def resolvent_sweep(
    series: HaarSeries, p: float, depths, lam_grid, trials: int = 16, seed: int = 0
) -> list[dict]:
    """Resolvent norm lower bounds next to the RH_p functional of the matching lambda-image weight."""
    depths, lam_grid = list(depths), list(lam_grid)
    if not depths or not lam_grid:
        raise ValueError("depth and lambda grids must be non-empty")
    series.check_paraexp()
    rows = []
    for depth in depths:
        b = fit_series(series, depth)
        for lam in lam_grid:
            bound = resolvent_norm_lower_bound(b, lam, p, depth, trials, seed)
            weight = lambda_op_product(b, lam)
            rows.append({
                "depth": depth,
                "lambda": lam,
                "p": p,
                "norm_lower_bound": bound.lower_bound,
                "power_iter_bound_p2": bound.power_iter_l2,
                "rhp_functional_omega_lambda": rhp_functional(weight, p),
            })
    return rows
