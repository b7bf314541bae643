"""n-periodic left-spine weights and the reverse Hölder counterexamples.

An n-periodic weight puts the fraction ``s_i`` of the mass of ``[0, 2^{1-i}]``
on its left half ``[0, 2^{-i}]`` and spreads the rest evenly over the right
half, with ``s_{i+n} = s_i``.  Its RH_p constant is finite exactly when
``f(s) = 2^n s_1 ... s_n < 2^{n/p}``.

Moving the cube point ``s`` towards the centre ``(1/2, ..., 1/2)`` is the
lambda-operation, and along the line through ``(a, 1, ..., 1)`` and the
centre ``f`` first rises above ``2^{n/p}`` and then drops back.  A point below
the threshold whose image lies above it is a weight in RH_p whose
lambda-image is not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
import scipy.optimize

from .dyadic import EPS_FLOOR, LOG2, WeightTree
from .errors import DivergentSeries, DyadicError, OutOfRange, SplitOutOfRange

BISECT_XTOL = 1e-12
BISECT_FTOL = 1e-10
BISECT_MAXITER = 200


@dataclass(frozen=True)
class PeriodicSpec:
    s: tuple[float, ...]
    eps_floor: float = EPS_FLOOR

    def __post_init__(self):
        s = tuple(float(x) for x in self.s)
        if not s:
            raise DyadicError("a periodic spec needs at least one split")
        for i, x in enumerate(s, start=1):
            if not self.eps_floor < x < 1.0 - self.eps_floor:
                raise SplitOutOfRange(
                    f"s_{i} = {x} is outside ({self.eps_floor}, {1 - self.eps_floor})", node=(i - 1, 0)
                )
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def log_f(self) -> float:
        """``log(2^n s_1 ... s_n)``."""
        return self.n * LOG2 + math.fsum(math.log(x) for x in self.s)

    @property
    def f(self) -> float:
        return math.exp(self.log_f)

    def split(self, i: int) -> float:
        """``s_i`` for any ``i >= 1``."""
        return self.s[(i - 1) % self.n]

    def canonical(self) -> "PeriodicSpec":
        """The same weight with its smallest period."""
        n = self.n
        for d in range(1, n + 1):
            if n % d == 0 and all(self.s[i] == self.s[i % d] for i in range(n)):
                return PeriodicSpec(self.s[:d], self.eps_floor)
        return self

    def c(self, i: int) -> float:
        """Value of the weight on ``(2^{-i}, 2^{1-i}]``: ``2^i s_1 ... s_{i-1} (1 - s_i)``."""
        if i < 1:
            raise DyadicError("c_i is defined for i >= 1")
        logs = i * LOG2 + math.fsum(math.log(self.split(k)) for k in range(1, i))
        return math.exp(logs + math.log(1.0 - self.split(i)))

    def to_dict(self) -> dict:
        return {"period": self.n, "s": list(self.s)}

    @classmethod
    def from_dict(cls, data: dict, eps_floor: float = EPS_FLOOR) -> "PeriodicSpec":
        s = tuple(float(x) for x in data["s"])
        if "period" in data and int(data["period"]) != len(s):
            raise DyadicError(f"period {data['period']} does not match {len(s)} splits")
        return cls(s, eps_floor)


def periodic_weight(spec: PeriodicSpec, depth: int) -> WeightTree:
    """Depth-``depth`` tree with splits ``s_1, s_2, ...`` down the left spine, 1/2 elsewhere."""
    if depth < 1:
        raise DyadicError("depth must be positive")
    splits = np.full(2**depth - 1, 0.5)
    for i in range(depth):
        splits[2**i - 1] = spec.split(i + 1)
    return WeightTree(depth, splits, spec.eps_floor)


class Condition(NamedTuple):
    holds: bool
    margin: float


def rhp_threshold(n: int, p: float) -> float:
    return 2.0 ** (n / p)


def rhp_condition(spec: PeriodicSpec, p: float) -> Condition:
    """Whether ``2^n s_1 ... s_n < 2^{n/p}``, with the signed margin ``2^{n/p} - 2^n prod s``."""
    if not p > 1:
        raise ValueError(f"exponent p must exceed 1, got {p}")
    margin = rhp_threshold(spec.n, p) - spec.f
    return Condition(margin > 0, margin)


def _d(spec: PeriodicSpec, p: float, m: int) -> float:
    return math.fsum(spec.c(j + m) ** p * 2.0 ** -(j + m) for j in range(1, spec.n + 1))


def rhp_ratio_closed_form(spec: PeriodicSpec, p: float, l: int) -> float:
    """``m_J(w^p) / (m_J w)^p`` on ``J = [0, 2^{-l}]`` for the infinite periodic weight."""
    if not rhp_condition(spec, p).holds:
        raise DivergentSeries(f"2^n s_1...s_n = {spec.f} >= 2^(n/p); the series diverges")
    if l < 0:
        raise DyadicError("l must be non-negative")
    n = spec.n
    q, m = divmod(l, n)
    prod_s = math.exp(spec.log_f - n * LOG2)
    growth = math.exp(p * spec.log_f - n * LOG2)
    log_val = (
        l * (1.0 - p) * LOG2
        + math.log(_d(spec, p, m))
        - p * math.log(_d(spec, 1.0, m))
        + n * (p - 1.0) * q * LOG2
        + p * math.log1p(-prod_s)
        - math.log1p(-growth)
    )
    return math.exp(log_val)


def rhp_constant_periodic(spec: PeriodicSpec, p: float) -> float:
    """Exact RH_p constant of the infinite-depth periodic weight, normalised like ``rhp_functional``.

    Only the intervals ``[0, 2^{-l}]`` matter; the weight is constant on every
    other dyadic interval.
    """
    worst = max(rhp_ratio_closed_form(spec, p, m) for m in range(spec.n))
    return max(1.0, worst ** (1.0 / p))


class LineGeometry(NamedTuple):
    g: Callable[[float], float]
    t_m: float
    g_max: float


def line_point(n: int, a: float, t: float) -> tuple[float, ...]:
    """Point at parameter ``t`` on the line from ``(a, 1, ..., 1)`` (t = 0) through the centre (t = 1)."""
    return (a + (0.5 - a) * t,) + (1.0 - 0.5 * t,) * (n - 1)


def line_value(n: int, a: float, t: float) -> float:
    return (2.0 * a + (1.0 - 2.0 * a) * t) * (2.0 - t) ** (n - 1)


def peak_parameter(n: int, a: float) -> float:
    return 2.0 * (1.0 - (n + 1) * a) / (n * (1.0 - 2.0 * a))


def peak_value(n: int, a: float) -> float:
    """Maximum of ``f`` along the line, as a function of ``a``."""
    log_h = (
        n * LOG2
        + (n - 1) * math.log(n - 1)
        + n * math.log1p(-a)
        - n * math.log(n)
        - (n - 1) * math.log1p(-2.0 * a)
    )
    return math.exp(log_h)


def line_geometry(n: int, a: float) -> LineGeometry:
    if n < 2:
        raise DyadicError("the line geometry needs n >= 2")
    if not 0.0 <= a < 1.0 / (n + 1):
        raise OutOfRange(f"a = {a} must lie in [0, 1/(n+1)) = [0, {1 / (n + 1)})")
    return LineGeometry(lambda t: line_value(n, a, t), peak_parameter(n, a), peak_value(n, a))


def critical_p(n: int) -> float:
    if n < 2:
        raise DyadicError("critical_p needs n >= 2")
    return n * LOG2 / (n * LOG2 - math.log(n + 1))


def threshold_gap(n: int, p: float) -> float:
    """``log(2^n/(n+1)) - log(2^{n/p})``; positive when period ``n`` admits counterexamples at ``p``."""
    return n * LOG2 * (1.0 - 1.0 / p) - math.log(n + 1)


def minimal_period(p: float, tol: float = 1e-12) -> int:
    """Smallest ``n >= 2`` with ``2^{n/p} < 2^n/(n+1)``, demanding a log-gap above ``tol``."""
    if not p > 1:
        raise ValueError(f"exponent p must exceed 1, got {p}")
    n = 2
    while threshold_gap(n, p) <= tol:
        n += 1
    return n


def _spine_logs(spec: PeriodicSpec, depth: int) -> tuple[np.ndarray, float]:
    """``log c_i`` for ``i = 1 .. depth`` and ``log m_{J_depth} w`` of the truncated weight."""
    log_s = np.log(np.array([spec.split(i) for i in range(1, depth + 1)]))
    log_1ms = np.log1p(-np.array([spec.split(i) for i in range(1, depth + 1)]))
    before = np.concatenate([[0.0], np.cumsum(log_s)])
    i = np.arange(1, depth + 1)
    log_c = i * LOG2 + before[:-1] + log_1ms
    return log_c, depth * LOG2 + before[-1]


def truncated_rhp_functional(spec: PeriodicSpec, p: float, depth: int) -> float:
    """Same value as ``rhp_functional(periodic_weight(spec, depth), p)``, in O(depth) time.

    Off the left spine the truncated weight is constant, so only the
    intervals ``[0, 2^{-l}]`` for ``l <= depth`` can beat 1.
    """
    log_c, log_tail = _spine_logs(spec, depth)
    i = np.arange(1, depth + 1)

    def suffix(power):
        # log of sum_{i > l} c_i^power 2^{-i} + m^power 2^{-depth}, for l = 0 .. depth
        terms = power * log_c - i * LOG2
        tail = power * log_tail - depth * LOG2
        acc = np.logaddexp.accumulate(np.concatenate([[tail], terms[::-1]]))
        return acc[::-1]

    l = np.arange(depth + 1)
    log_ratio = (suffix(p) + l * LOG2) / p - (suffix(1.0) + l * LOG2)
    return float(np.exp(max(0.0, float(np.max(log_ratio)))))


@dataclass
class CounterexampleCert:
    """Witness that the lambda-operation can push an RH_p weight out of RH_p."""

    p: float
    n: int
    a_p: float
    t_P: float
    t_m: float
    lam: float
    spec_P: PeriodicSpec
    spec_Plam: PeriodicSpec
    f_P: float
    f_Plam: float
    threshold: float
    delta_margin: float
    overshoot: float
    branch: str

    @property
    def margin_P(self) -> float:
        return self.threshold - self.f_P

    @property
    def margin_Plam(self) -> float:
        return self.f_Plam - self.threshold

    def problems(self, tol: float = 1e-12) -> list[str]:
        """Invariant violations; empty for a valid certificate."""
        from .paraexp import lambda_split

        out = []
        if not 0.0 < self.a_p < 1.0 / (self.n + 1):
            out.append(f"a_p = {self.a_p} outside (0, 1/(n+1))")
        if not 0.0 < self.t_P < self.t_m < 1.0:
            out.append(f"need 0 < t_P < t_m < 1, got t_P = {self.t_P}, t_m = {self.t_m}")
        if not 0.0 < self.lam < 1.0:
            out.append(f"lambda = {self.lam} outside (0, 1)")
        if not rhp_condition(self.spec_P, self.p).holds:
            out.append("P violates the RH_p condition")
        if rhp_condition(self.spec_Plam, self.p).holds:
            out.append("P_lambda satisfies the RH_p condition")
        if not self.f_P < self.threshold <= self.f_Plam:
            out.append("f-values do not straddle the threshold")
        moved = lambda_split(self.spec_P.s, self.lam)
        err = float(np.max(np.abs(moved - np.array(self.spec_Plam.s))))
        if err > tol:
            out.append(f"lambda-operation misses P_lambda by {err}")
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "a_p": self.a_p,
            "t_P": self.t_P,
            "t_m": self.t_m,
            "lambda": self.lam,
            "spec_P": self.spec_P.to_dict(),
            "spec_Plambda": self.spec_Plam.to_dict(),
            "f_P": self.f_P,
            "f_Plambda": self.f_Plam,
            "threshold": self.threshold,
            "margin_P": self.margin_P,
            "margin_Plambda": self.margin_Plam,
            "delta_margin": self.delta_margin,
            "overshoot": self.overshoot,
            "branch": self.branch,
        }


def _solve_increasing(func, lo: float, hi: float, target: float) -> float:
    """Bisection for ``func(x) = target`` on a bracket where ``func`` increases."""
    root = scipy.optimize.bisect(lambda x: func(x) - target, lo, hi, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER)
    residual = abs(func(root) - target)
    if residual > BISECT_FTOL * max(1.0, abs(target)):
        raise DyadicError(f"bisection residual {residual} exceeds {BISECT_FTOL}")
    return root


def _certificate_for_period(p: float, n: int, delta_margin: float, overshoot: float) -> CounterexampleCert:
    thr = rhp_threshold(n, p)
    if threshold_gap(n, p) <= 0:
        raise OutOfRange(f"period {n} admits no counterexample at p = {p} (needs p > {critical_p(n)})")
    if peak_value(n, 0.0) < thr:
        branch = "bisection"
        a_lo = _solve_increasing(lambda a: peak_value(n, a), 0.0, 1.0 / (n + 1), thr)
        # keep f(a, 1, ..., 1) = 2^n a below the threshold and the peak inside the cube
        a_hi = min(1.0 / (n + 1), thr / 2.0**n)
        a_p = a_lo + overshoot * (a_hi - a_lo)
    else:
        branch = "small_a"
        a_p = min(thr / 2.0 ** (n + 1), 1.0 / (2 * (n + 1)))
    t_m = peak_parameter(n, a_p)
    g0 = line_value(n, a_p, 0.0)
    t_P = _solve_increasing(lambda t: line_value(n, a_p, t), 0.0, t_m, g0 + delta_margin * (thr - g0))
    lam = (1.0 - t_m) / (1.0 - t_P)
    spec_P = PeriodicSpec(line_point(n, a_p, t_P))
    # P_lambda is taken as the lambda-image of P so the two agree to rounding
    from .paraexp import lambda_split

    spec_Plam = PeriodicSpec(tuple(lambda_split(spec_P.s, lam)))
    return CounterexampleCert(
        p=p, n=n, a_p=a_p, t_P=t_P, t_m=t_m, lam=lam,
        spec_P=spec_P, spec_Plam=spec_Plam,
        f_P=spec_P.f, f_Plam=spec_Plam.f, threshold=thr,
        delta_margin=delta_margin, overshoot=overshoot, branch=branch,
    )


def witness_growth(cert: CounterexampleCert, depth: int = 24) -> float:
    """Growth of the truncated RH_p functional of the lambda-image from depth ``n+2`` to ``depth``."""
    lo = truncated_rhp_functional(cert.spec_Plam, cert.p, cert.n + 2)
    return truncated_rhp_functional(cert.spec_Plam, cert.p, depth) / lo


def build_counterexample(
    p: float,
    delta_margin: float = 0.5,
    overshoot: float = 0.5,
    period: int | str = "auto",
    witness_depth: int = 24,
    witness_factor: float = 2.0,
) -> CounterexampleCert:
    """Construct ``P`` below and ``P_lambda`` above the RH_p threshold on one line.

    ``overshoot`` in [0, 1) moves ``a_p`` from the root of ``h(a) = 2^{n/p}``
    towards the largest admissible value, so that ``P_lambda`` lies strictly
    above the threshold; 0 puts it exactly on the threshold.  ``delta_margin``
    places ``f(P)`` between ``f(a_p, 1, ..., 1)`` and the threshold.

    ``period`` is an explicit ``n``, ``"minimal"`` for the smallest admissible
    ``n``, or ``"auto"``: the smallest admissible ``n`` whose lambda-image shows
    RH_p growth by ``witness_factor`` between depths ``n + 2`` and
    ``witness_depth`` (falling back to the fastest-growing ``n``).
    """
    if not p > 1:
        raise ValueError(f"exponent p must exceed 1, got {p}")
    if not 0.0 < delta_margin < 1.0:
        raise DyadicError("delta_margin must lie in (0, 1)")
    if not 0.0 <= overshoot < 1.0:
        raise DyadicError("overshoot must lie in [0, 1)")
    n_min = minimal_period(p)
    if isinstance(period, int):
        return _certificate_for_period(p, period, delta_margin, overshoot)
    if period == "minimal":
        return _certificate_for_period(p, n_min, delta_margin, overshoot)
    if period != "auto":
        raise DyadicError(f"unknown period rule {period!r}")
    best, best_growth = None, -np.inf
    for n in range(n_min, witness_depth - 1):
        cert = _certificate_for_period(p, n, delta_margin, overshoot)
        growth = witness_growth(cert, witness_depth)
        if growth > witness_factor:
            return cert
        if growth > best_growth:
            best, best_growth = cert, growth
    return best
