"""Dyadic intervals, Haar functions and finite-depth weight trees.

A dyadic interval ``(j 2^-k, (j+1) 2^-k]`` is addressed by ``DyadicIndex(k, j)``.
Trees are stored flat in level order: node ``(k, j)`` lives at ``2**k - 1 + j``.

A :class:`WeightTree` of depth ``N`` carries the fraction ``s_I`` of the mass of
``I`` that sits on its left half, for every node above level ``N``.  The weight
is constant on each level-``N`` leaf and has mean one on ``(0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from .errors import DyadicError, SplitOutOfRange

EPS_FLOOR = 1e-6
PARAEXP_EPS = 1e-3
LOG2 = math.log(2.0)


class DyadicIndex(NamedTuple):
    level: int
    position: int

    def check(self) -> "DyadicIndex":
        if self.level < 0 or not 0 <= self.position < 2**self.level:
            raise DyadicError(f"invalid dyadic index {tuple(self)}")
        return self

    @property
    def length(self) -> float:
        return 2.0**-self.level

    @property
    def flat(self) -> int:
        return 2**self.level - 1 + self.position

    @property
    def left(self) -> float:
        return self.position * 2.0**-self.level

    @property
    def right(self) -> float:
        return (self.position + 1) * 2.0**-self.level

    def parent(self) -> "DyadicIndex":
        if self.level == 0:
            raise DyadicError("the root interval has no parent")
        return DyadicIndex(self.level - 1, self.position // 2)

    def contains(self, other: "DyadicIndex") -> bool:
        """True when ``other`` is a (not necessarily strict) subinterval."""
        shift = other.level - self.level
        return shift >= 0 and other.position >> shift == self.position

    @classmethod
    def from_flat(cls, i: int) -> "DyadicIndex":
        level = (i + 1).bit_length() - 1
        return cls(level, i - (2**level - 1))


ROOT = DyadicIndex(0, 0)


def children(index: DyadicIndex, depth: int | None = None) -> tuple[DyadicIndex, DyadicIndex]:
    """Left and right halves of ``index``."""
    k, j = index
    if depth is not None and k >= depth:
        raise DyadicError(f"{tuple(index)} is at the depth bound {depth}")
    return DyadicIndex(k + 1, 2 * j), DyadicIndex(k + 1, 2 * j + 1)


def haar_value(index: DyadicIndex, x: float) -> float:
    """Value of the L2-normalised Haar function of ``index`` at ``x``.

    Negative on the left half, positive on the right half, zero off the
    (left-open, right-closed) interval.
    """
    lo, hi = index.left, index.right
    if not lo < x <= hi:
        return 0.0
    amp = 2.0 ** (index.level / 2)
    return amp if x > 0.5 * (lo + hi) else -amp


def level_slice(level: int) -> slice:
    return slice(2**level - 1, 2 ** (level + 1) - 1)


def leaf_position(x: float, depth: int) -> int:
    """Position of the depth-``depth`` dyadic interval containing ``x``."""
    if not 0.0 < x <= 1.0:
        raise DyadicError(f"x = {x} is outside (0, 1]")
    return min(max(math.ceil(x * 2**depth) - 1, 0), 2**depth - 1)


def interleave(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    out = np.empty(2 * left.size, dtype=np.result_type(left, right))
    out[0::2] = left
    out[1::2] = right
    return out


@dataclass(frozen=True, eq=False)
class WeightTree:
    """Finite-depth dyadic weight given by its mass-split fractions."""

    depth: int
    splits: np.ndarray
    eps_floor: float = field(default=EPS_FLOOR, repr=False)

    def __post_init__(self):
        if self.depth < 1:
            raise DyadicError(f"depth must be positive, got {self.depth}")
        s = np.array(self.splits, dtype=float)
        if s.shape != (2**self.depth - 1,):
            raise DyadicError(
                f"expected {2**self.depth - 1} splits for depth {self.depth}, got shape {s.shape}"
            )
        bad = ~((s > self.eps_floor) & (s < 1.0 - self.eps_floor))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            node = DyadicIndex.from_flat(i)
            raise SplitOutOfRange(
                f"split {s[i]!r} at node (level={node.level}, pos={node.position}) "
                f"is outside ({self.eps_floor}, {1 - self.eps_floor})",
                node=node,
            )
        s.setflags(write=False)
        object.__setattr__(self, "splits", s)

    @classmethod
    def uniform(cls, depth: int, eps_floor: float = EPS_FLOOR) -> "WeightTree":
        return cls(depth, np.full(2**depth - 1, 0.5), eps_floor)

    @classmethod
    def from_levels(cls, levels, eps_floor: float = EPS_FLOOR) -> "WeightTree":
        """Build from a list whose ``k``-th entry holds the ``2**k`` splits of level ``k``."""
        flat = np.concatenate([np.asarray(lv, dtype=float).ravel() for lv in levels])
        return cls(len(levels), flat, eps_floor)

    def level(self, k: int) -> np.ndarray:
        return self.splits[level_slice(k)]

    def split(self, index: DyadicIndex) -> float:
        return float(self.splits[index.flat])

    @cached_property
    def log_leaves(self) -> np.ndarray:
        """Log of the leaf values, computed top-down through the chain of splits."""
        logm = np.zeros(1)
        for k in range(self.depth):
            s = self.level(k)
            logm = interleave(logm + np.log(2.0 * s), logm + np.log(2.0 * (1.0 - s)))
        logm.setflags(write=False)
        return logm

    def leaves(self) -> np.ndarray:
        return np.exp(self.log_leaves)

    def truncate(self, depth: int) -> "WeightTree":
        """The same weight averaged over the leaves of a shallower tree."""
        if not 1 <= depth <= self.depth:
            raise DyadicError(f"cannot truncate a depth-{self.depth} tree to depth {depth}")
        return WeightTree(depth, self.splits[: 2**depth - 1], self.eps_floor)

    def reflect(self) -> "WeightTree":
        """The weight composed with ``x -> 1 - x``."""
        levels = [1.0 - self.level(k)[::-1] for k in range(self.depth)]
        return WeightTree.from_levels(levels, self.eps_floor)

    def to_dict(self) -> dict:
        return {"depth": self.depth, "splits": self.splits.tolist()}

    @classmethod
    def from_dict(cls, data: dict, eps_floor: float = EPS_FLOOR) -> "WeightTree":
        return cls(int(data["depth"]), np.asarray(data["splits"], dtype=float), eps_floor)


@dataclass(frozen=True, eq=False)
class HaarSeries:
    """Normalised Haar coefficients ``b_I`` on levels ``0 .. depth-1``, stored flat."""

    depth: int
    coeffs: np.ndarray

    def __post_init__(self):
        b = np.array(self.coeffs, dtype=float)
        if b.shape != (2**self.depth - 1,):
            raise DyadicError(
                f"expected {2**self.depth - 1} coefficients for depth {self.depth}, got shape {b.shape}"
            )
        b.setflags(write=False)
        object.__setattr__(self, "coeffs", b)

    @classmethod
    def zeros(cls, depth: int) -> "HaarSeries":
        return cls(depth, np.zeros(2**depth - 1))

    @classmethod
    def from_entries(cls, depth: int, entries) -> "HaarSeries":
        """``entries`` maps ``DyadicIndex`` (or ``(level, pos)``) to ``b_I``."""
        b = np.zeros(2**depth - 1)
        for idx, val in dict(entries).items():
            idx = DyadicIndex(*idx).check()
            if idx.level >= depth:
                raise DyadicError(f"{tuple(idx)} is below the series depth {depth}")
            b[idx.flat] = val
        return cls(depth, b)

    def level(self, k: int) -> np.ndarray:
        return self.coeffs[level_slice(k)]

    def __getitem__(self, index) -> float:
        return float(self.coeffs[DyadicIndex(*index).flat])

    def sup_haar_product(self) -> float:
        """``sup_I |b_I h_I| = sup_I |b_I| |I|^{-1/2}``."""
        return max(
            (float(np.max(np.abs(self.level(k)))) * 2.0 ** (k / 2) for k in range(self.depth)),
            default=0.0,
        )

    def check_paraexp(self, eps: float = PARAEXP_EPS) -> "HaarSeries":
        """Raise unless ``|b_I h_I| <= 1 - eps`` everywhere; names the first offending node."""
        scaled = np.abs(self.coeffs) / _sqrt_lengths(self.depth)
        bad = np.flatnonzero(scaled > 1.0 - eps)
        if bad.size:
            node = DyadicIndex.from_flat(int(bad[0]))
            raise SplitOutOfRange(
                f"|b h| = {scaled[bad[0]]} at (level={node.level}, pos={node.position}) exceeds 1 - eps = {1 - eps}",
                node=node,
            )
        return self

    def scaled(self, lam: float) -> "HaarSeries":
        return HaarSeries(self.depth, lam * self.coeffs)

    def to_dict(self) -> dict:
        entries = []
        for i in np.flatnonzero(self.coeffs):
            idx = DyadicIndex.from_flat(int(i))
            entries.append({"level": idx.level, "pos": idx.position, "b": float(self.coeffs[i])})
        return {"depth": self.depth, "coeffs": entries}

    @classmethod
    def from_dict(cls, data: dict) -> "HaarSeries":
        entries = {(int(e["level"]), int(e["pos"])): float(e["b"]) for e in data["coeffs"]}
        return cls.from_entries(int(data["depth"]), entries)


def _sqrt_lengths(depth: int) -> np.ndarray:
    """``|I|^{1/2}`` for every node in level order."""
    return np.concatenate([np.full(2**k, 2.0 ** (-k / 2)) for k in range(depth)])


def mean(tree: WeightTree, index: DyadicIndex) -> float:
    """``m_I w`` as the product of ``2 s_K`` / ``2 (1 - s_K)`` along the chain from the root."""
    return math.exp(log_mean(tree, index))


def log_mean(tree: WeightTree, index: DyadicIndex) -> float:
    k, j = DyadicIndex(*index).check()
    if k > tree.depth:
        raise DyadicError(f"{(k, j)} is below the tree depth {tree.depth}")
    total = 0.0
    for lev in range(k):
        anc = j >> (k - lev)
        s = tree.splits[2**lev - 1 + anc]
        went_right = (j >> (k - lev - 1)) & 1
        total += math.log(2.0 * (1.0 - s)) if went_right else math.log(2.0 * s)
    return total


def evaluate(tree: WeightTree, x: float) -> float:
    return float(math.exp(tree.log_leaves[leaf_position(x, tree.depth)]))


def _leaf_block(tree: WeightTree, index: DyadicIndex) -> np.ndarray:
    k, j = DyadicIndex(*index).check()
    if k > tree.depth:
        raise DyadicError(f"{(k, j)} is below the tree depth {tree.depth}")
    width = 2 ** (tree.depth - k)
    return tree.log_leaves[j * width : (j + 1) * width]


def mean_power(tree: WeightTree, index: DyadicIndex, r: float) -> float:
    """``(1/|I|) int_I w^r`` summed exactly over the leaves under ``I``."""
    block = _leaf_block(tree, index)
    return float(np.exp(logsumexp(r * block) - math.log(block.size)))


def haar_coeffs_from_tree(tree: WeightTree) -> HaarSeries:
    """``b_I = (1 - 2 s_I) |I|^{1/2}``, so that ``1 + b_I h_I`` is ``2 s_I`` on the left half."""
    return HaarSeries(tree.depth, (1.0 - 2.0 * tree.splits) * _sqrt_lengths(tree.depth))


def tree_from_haar_coeffs(series: HaarSeries, eps_floor: float = EPS_FLOOR) -> WeightTree:
    """Partial paraexponential product ``prod (1 + b_I h_I)`` realised as splits."""
    s = 0.5 * (1.0 - series.coeffs / _sqrt_lengths(series.depth))
    bad = ~((s > 0.0) & (s < 1.0))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        node = DyadicIndex.from_flat(i)
        raise SplitOutOfRange(
            f"coefficient at (level={node.level}, pos={node.position}) gives split {s[i]!r}",
            node=node,
        )
    return WeightTree(series.depth, s, eps_floor)


def splits_from_log_leaves(log_leaves: np.ndarray) -> list[np.ndarray]:
    """Per-level splits of the leaf-constant weight with the given log leaf values."""
    depth = int(round(math.log2(log_leaves.size)))
    levels = []
    lm = log_leaves
    for _ in range(depth):
        left, right = lm[0::2], lm[1::2]
        parent = np.logaddexp(left, right)
        levels.append(np.exp(left - parent))
        lm = parent
    return levels[::-1]


def power_weight(tree: WeightTree, theta: float) -> WeightTree:
    """Pointwise ``w**theta`` renormalised to mean one."""
    if not 0.0 <= theta <= 1.0:
        raise DyadicError(f"theta must lie in [0, 1], got {theta}")
    if theta == 1.0:
        return tree
    return WeightTree.from_levels(splits_from_log_leaves(theta * tree.log_leaves), tree.eps_floor)
