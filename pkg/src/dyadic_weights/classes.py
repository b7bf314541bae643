"""Finite-depth constants of the dyadic doubling weight classes.

Every functional is a supremum over the dyadic intervals of level at most the
tree depth.  At finite depth all of them are finite, so membership in a class
can only be read off as a trend in the depth.  Pass ``return_witness=True`` to
get the interval attaining the supremum as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import LOG2, DyadicIndex, HaarSeries, WeightTree, haar_coeffs_from_tree

__all__ = [
    "ClassReport",
    "a1_functional",
    "ainf_functional",
    "ap_functional",
    "buckley_functional",
    "buckley_profile",
    "carleson_norm",
    "carleson_profile",
    "class_report",
    "doubling_constant",
    "rhp_functional",
]


def _check_p(p):
    if not p > 1:
        raise ValueError(f"exponent p must exceed 1, got {p}")


def _log_pyramid(tree: WeightTree, r: float | None = None):
    """Yield ``(level, log m_I w, log m_I w^r)`` from the leaves up to the root.

    With ``r`` None the third entry is the mean of ``log w`` instead.
    """
    lm = tree.log_leaves
    lp = lm if r is None else r * lm
    for k in range(tree.depth, -1, -1):
        yield k, lm, lp
        if k == 0:
            break
        lm = np.logaddexp(lm[0::2], lm[1::2]) - LOG2
        if r is None:
            lp = 0.5 * (lp[0::2] + lp[1::2])
        else:
            lp = np.logaddexp(lp[0::2], lp[1::2]) - LOG2


def _sup(levels, return_witness, log=True):
    best, arg = -np.inf, DyadicIndex(0, 0)
    for k, vals in levels:
        j = int(np.argmax(vals))
        if vals[j] > best:
            best, arg = float(vals[j]), DyadicIndex(k, j)
    value = math.exp(best) if log else best
    return (value, arg) if return_witness else value


def doubling_constant(tree: WeightTree, return_witness=False):
    """``sup int_parent w / int_child w = sup max(1/s, 1/(1-s))``."""
    worst = np.minimum(tree.splits, 1.0 - tree.splits)
    i = int(np.argmin(worst))
    value = 1.0 / float(worst[i])
    return (value, DyadicIndex.from_flat(i)) if return_witness else value


def ainf_functional(tree: WeightTree, return_witness=False):
    """``sup_I m_I w / exp(m_I log w)``."""
    levels = ((k, lm - lg) for k, lm, lg in _log_pyramid(tree, None))
    return _sup(levels, return_witness)


def rhp_functional(tree: WeightTree, p: float, return_witness=False):
    """``sup_I (m_I w^p)^{1/p} / m_I w``."""
    _check_p(p)
    levels = ((k, lp / p - lm) for k, lm, lp in _log_pyramid(tree, p))
    return _sup(levels, return_witness)


def ap_functional(tree: WeightTree, p: float, return_witness=False):
    """``sup_I m_I w (m_I w^{-1/(p-1)})^{p-1}``."""
    _check_p(p)
    levels = ((k, lm + (p - 1.0) * lp) for k, lm, lp in _log_pyramid(tree, -1.0 / (p - 1.0)))
    return _sup(levels, return_witness)


def a1_functional(tree: WeightTree, return_witness=False):
    """``sup_{I within J} m_J w / m_I w``.

    For fixed ``J`` the smallest mean over its subintervals is the smallest
    leaf value under ``J``, so one bottom-up pass of running minima suffices.
    """

    def levels():
        lo = tree.log_leaves
        for k, lm, _ in _log_pyramid(tree, 1.0):
            if k < tree.depth:
                lo = np.minimum(lo[0::2], lo[1::2])
            yield k, lm - lo

    return _sup(levels(), return_witness)


def carleson_profile(series: HaarSeries) -> list[np.ndarray]:
    """Per-level arrays of ``(1/|J|) sum_{I within J} b_I^2``, levels ``0 .. depth-1``."""
    out = []
    acc = np.zeros(2**series.depth)
    for k in range(series.depth - 1, -1, -1):
        acc = series.level(k) ** 2 + acc[0::2] + acc[1::2]
        out.append(acc * 2.0**k)
    return out[::-1]


def carleson_norm(series: HaarSeries, return_witness=False):
    """``sup_J (1/|J|) sum_{I within J} b_I^2`` (zero for the empty series)."""
    levels = list(enumerate(carleson_profile(series)))
    if not levels:
        return (0.0, DyadicIndex(0, 0)) if return_witness else 0.0
    return _sup(levels, return_witness, log=False)


def buckley_profile(tree: WeightTree, p: float, coeffs: HaarSeries | None = None) -> list[np.ndarray]:
    """Per-level arrays of ``(1/|J|) sum_{I within J} (m_I w / m_J w)^{-1/(p-1)} b_I^2``.

    ``I`` ranges over levels below the depth (no coefficient lives on the
    leaves).  The coefficients default to those of ``tree`` itself.
    """
    _check_p(p)
    r = -1.0 / (p - 1.0)
    b = haar_coeffs_from_tree(tree) if coeffs is None else coeffs
    pyramid = {k: lm for k, lm, _ in _log_pyramid(tree, 1.0)}
    out = []
    with np.errstate(divide="ignore"):
        log_acc = np.full(2**tree.depth, -np.inf)
        for k in range(tree.depth - 1, -1, -1):
            lm = pyramid[k]
            term = r * lm + np.log(b.level(k) ** 2)
            log_acc = np.logaddexp(term, np.logaddexp(log_acc[0::2], log_acc[1::2]))
            out.append(np.exp(log_acc - r * lm + k * LOG2))
    return out[::-1]


def buckley_functional(tree: WeightTree, p: float, return_witness=False):
    levels = list(enumerate(buckley_profile(tree, p)))
    return _sup(levels, return_witness, log=False)


@dataclass
class ClassReport:
    depth: int
    doubling_const: float
    ainf_const: float
    carleson_norm: float
    a1_const: float
    per_p: dict[float, dict[str, float]] = field(default_factory=dict)
    witnesses: dict[str, tuple[int, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "doubling_const": self.doubling_const,
            "ainf_const": self.ainf_const,
            "carleson_norm": self.carleson_norm,
            "a1_const": self.a1_const,
            "per_p": [{"p": p, **vals} for p, vals in self.per_p.items()],
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
            "note": "buckley sums exclude intervals at the leaf level",
        }

    CSV_COLUMNS = (
        "depth", "p", "doubling_const", "ainf_const", "carleson_norm", "a1_const",
        "rhp_const", "ap_const", "buckley_const",
    )

    def csv_rows(self) -> list[dict]:
        return [
            {
                "depth": self.depth,
                "p": p,
                "doubling_const": self.doubling_const,
                "ainf_const": self.ainf_const,
                "carleson_norm": self.carleson_norm,
                "a1_const": self.a1_const,
                **vals,
            }
            for p, vals in self.per_p.items()
        ]


def class_report(tree: WeightTree, ps) -> ClassReport:
    witnesses = {}
    dbl, witnesses["doubling"] = doubling_constant(tree, return_witness=True)
    ainf, witnesses["ainf"] = ainf_functional(tree, return_witness=True)
    carl, witnesses["carleson"] = carleson_norm(haar_coeffs_from_tree(tree), return_witness=True)
    a1, witnesses["a1"] = a1_functional(tree, return_witness=True)
    report = ClassReport(tree.depth, dbl, ainf, carl, a1, witnesses=witnesses)
    for p in ps:
        rhp, witnesses[f"rhp_{p}"] = rhp_functional(tree, p, return_witness=True)
        ap, witnesses[f"ap_{p}"] = ap_functional(tree, p, return_witness=True)
        buck, witnesses[f"buckley_{p}"] = buckley_functional(tree, p, return_witness=True)
        report.per_p[p] = {"rhp_const": rhp, "ap_const": ap, "buckley_const": buck}
    return report
