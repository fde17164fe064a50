"""Closed-form RDP budget curves and pure-DP parameters of basic mechanisms.

All noise scales are expressed in units of the query's sensitivity: a query
with l1-sensitivity ``d`` released through Laplace noise of scale ``b`` is
``Laplace(scale=b / d)``, and likewise ``Gaussian(sigma=s / d2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from renyi_dp.divergence import check_order


def _log_ratio(p: float) -> float:
    return abs(math.log(p) - math.log1p(-p))


@dataclass(frozen=True)
class RandomizedResponse:
    """Reports a predicate truthfully with probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"randomized response needs 0 < p < 1, got {self.p}")

    def rdp_epsilon(self, alpha: float) -> float:
        alpha = check_order(alpha)
        p = self.p
        lp, lq = math.log(p), math.log1p(-p)
        if alpha == 1.0:
            return (2.0 * p - 1.0) * (lp - lq)
        if math.isinf(alpha):
            return abs(lp - lq)
        a = alpha * lp + (1.0 - alpha) * lq
        b = alpha * lq + (1.0 - alpha) * lp
        return max(0.0, float(np.logaddexp(a, b)) / (alpha - 1.0))

    def pure_dp_epsilon(self) -> float:
        return _log_ratio(self.p)


@dataclass(frozen=True)
class Laplace:
    """Additive Laplace noise with the given scale (sensitivity 1)."""

    scale: float

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError(f"Laplace scale must be positive, got {self.scale}")

    def rdp_epsilon(self, alpha: float) -> float:
        alpha = check_order(alpha)
        lam = self.scale
        if alpha == 1.0:
            return 1.0 / lam + math.expm1(-1.0 / lam)
        if math.isinf(alpha):
            return 1.0 / lam
        denom = 2.0 * alpha - 1.0
        a = math.log(alpha / denom) + (alpha - 1.0) / lam
        b = math.log((alpha - 1.0) / denom) - alpha / lam
        return max(0.0, float(np.logaddexp(a, b)) / (alpha - 1.0))

    def pure_dp_epsilon(self) -> float:
        return 1.0 / self.scale


@dataclass(frozen=True)
class Gaussian:
    """Additive Gaussian noise with standard deviation ``sigma`` (sensitivity 1)."""

    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"Gaussian sigma must be positive, got {self.sigma}")

    def rdp_epsilon(self, alpha: float) -> float:
        alpha = check_order(alpha)
        if math.isinf(alpha):
            return math.inf
        return alpha / (2.0 * self.sigma**2)

    def pure_dp_epsilon(self) -> float:
        return math.inf


@dataclass(frozen=True)
class PureDP:
    """Any mechanism known only to be eps-differentially private.

    Its curve is min(eps, 2 * alpha * eps**2): the quadratic branch holds for
    any mechanism whose max-divergence is at most eps in both directions, and
    the flat branch follows from monotonicity in the order.
    """

    eps: float

    def __post_init__(self):
        if not (self.eps >= 0 and math.isfinite(self.eps)):
            raise ValueError(f"pure DP epsilon must be finite and >= 0, got {self.eps}")

    def rdp_epsilon(self, alpha: float) -> float:
        alpha = check_order(alpha)
        if math.isinf(alpha):
            return self.eps
        return min(self.eps, 2.0 * alpha * self.eps**2)

    def pure_dp_epsilon(self) -> float:
        return self.eps


@dataclass(frozen=True)
class TabulatedRdp:
    """A mechanism known only through RDP guarantees at a few orders.

    Between reported orders the guarantee of the next larger reported order
    applies (the divergence is nondecreasing in the order). Above the largest
    reported order nothing is known and the curve is infinite.
    """

    orders: tuple[float, ...]
    epsilons: tuple[float, ...]

    def __post_init__(self):
        orders = tuple(check_order(a) for a in self.orders)
        epsilons = tuple(float(e) for e in self.epsilons)
        if not orders or len(orders) != len(epsilons):
            raise ValueError("need one epsilon per reported order")
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise ValueError("reported orders must be strictly increasing")
        if any(not (e >= 0) for e in epsilons):
            raise ValueError("reported epsilons must be non-negative")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "epsilons", epsilons)

    def rdp_epsilon(self, alpha: float) -> float:
        alpha = check_order(alpha)
        covering = [e for a, e in zip(self.orders, self.epsilons) if a >= alpha]
        return min(covering) if covering else math.inf

    def pure_dp_epsilon(self) -> float:
        if math.isinf(self.orders[-1]):
            return self.epsilons[-1]
        return math.inf


Mechanism = Union[RandomizedResponse, Laplace, Gaussian, PureDP, TabulatedRdp]


def rdp_epsilon(mechanism: Mechanism, alpha: float) -> float:
    """RDP epsilon of a single invocation at the given order."""
    return mechanism.rdp_epsilon(alpha)


def pure_dp_epsilon(mechanism: Mechanism) -> float:
    """Pure-DP epsilon of a single invocation (``inf`` if none holds)."""
    return mechanism.pure_dp_epsilon()
