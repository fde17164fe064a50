"""Brute-force checks used to validate the closed forms and optimisers.

Everything here deliberately avoids the code paths it is meant to check:
divergences are summed directly in extended precision instead of in log
space, composition is checked by building the joint distribution
explicitly, and optimisers are checked against a dense grid scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np

from renyi_dp.divergence import (  # noqa: F401  (QuadratureSettings re-exported)
    DiscreteDistribution,
    QuadratureSettings,
    check_order,
    renyi_divergence,
)

DEFAULT_SEED = 1729
MAX_JOINT_SUPPORT = 10**6
MAX_EXHAUSTIVE_SUPPORT = 12

# Rounding allowance when comparing an event probability with its bound.
PRESERVATION_SLACK_TOLERANCE = 1e-12


class JointSupportTooLarge(RuntimeError):
    pass


class PreservationViolation(AssertionError):
    def __init__(self, subset, probability, bound):
        super().__init__(
            f"P(A) = {probability!r} exceeds bound {bound!r} for A = {subset}"
        )
        self.subset = subset
        self.probability = probability
        self.bound = bound


def trial_rng(trial: int, seed: int = DEFAULT_SEED) -> np.random.Generator:
    """Independent generator per trial, so trials can run in any order."""
    return np.random.default_rng([seed, trial])


def random_distribution(
    rng: np.random.Generator, k: int, floor: float = 0.0
) -> DiscreteDistribution:
    """Dirichlet(1, ..., 1) sample, mixed with the uniform so every mass >= floor."""
    if not 0 <= floor * k < 1:
        raise ValueError("floor too large for the outcome count")
    w = rng.dirichlet(np.ones(k))
    w = floor + (1.0 - floor * k) * w
    return DiscreteDistribution(w / w.sum())


def random_kernel(rng: np.random.Generator, k: int, m: int) -> np.ndarray:
    """Random row-stochastic k x m matrix."""
    kernel = rng.dirichlet(np.ones(m), size=k)
    return kernel / kernel.sum(axis=1, keepdims=True)


def direct_renyi_divergence(
    p: DiscreteDistribution, q: DiscreteDistribution, alpha: float, dps: int = 50
) -> float:
    """D_alpha by plain summation of p^alpha q^(1-alpha) at ``dps`` digits."""
    alpha = check_order(alpha)
    with mpmath.workdps(dps):
        pm = [mpmath.mpf(float(x)) for x in p.masses]
        qm = [mpmath.mpf(float(x)) for x in q.masses]
        if any(a > 0 and b == 0 for a, b in zip(pm, qm)):
            return math.inf
        pairs = [(a, b) for a, b in zip(pm, qm) if a > 0]
        if alpha == 1.0:
            return float(mpmath.fsum(a * mpmath.log(a / b) for a, b in pairs))
        if math.isinf(alpha):
            return float(max(mpmath.log(a / b) for a, b in pairs))
        a_mp = mpmath.mpf(alpha)
        total = mpmath.fsum(a**a_mp * b ** (1 - a_mp) for a, b in pairs)
        return float(mpmath.log(total) / (a_mp - 1))


def product_compose(
    ps: Sequence[DiscreteDistribution], qs: Sequence[DiscreteDistribution]
) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Joint distributions of independent releases, flattened row-major."""
    if len(ps) != len(qs) or not ps:
        raise ValueError("need equally many (nonzero) P and Q distributions")
    size = 1
    for p, q in zip(ps, qs):
        if len(p) != len(q):
            raise ValueError("each P/Q pair must share an outcome set")
        size *= len(p)
    if size > MAX_JOINT_SUPPORT:
        raise JointSupportTooLarge(
            f"joint support of {size} outcomes exceeds {MAX_JOINT_SUPPORT}"
        )
    joint_p, joint_q = ps[0].masses, qs[0].masses
    for p, q in zip(ps[1:], qs[1:]):
        joint_p = np.multiply.outer(joint_p, p.masses).reshape(-1)
        joint_q = np.multiply.outer(joint_q, q.masses).reshape(-1)
    return DiscreteDistribution(joint_p), DiscreteDistribution(joint_q)


@dataclass(frozen=True)
class PreservationReport:
    """Tightest event found by an exhaustive scan of all nonempty events."""

    divergence: float
    min_slack: float
    witness: tuple[int, ...]
    events_checked: int


def exhaustive_preservation_check(
    p: DiscreteDistribution, q: DiscreteDistribution, alpha: float
) -> PreservationReport:
    """Checks P(A) <= (e^D Q(A))^((alpha-1)/alpha) for every nonempty event A.

    Raises ``PreservationViolation`` with the offending event if any event
    breaks the inequality by more than ``PRESERVATION_SLACK_TOLERANCE``.
    """
    alpha = check_order(alpha)
    if alpha == 1.0 or math.isinf(alpha):
        raise ValueError("exhaustive check needs a finite order above 1")
    k = len(p)
    if k != len(q):
        raise ValueError("distributions have different outcome sets")
    if k > MAX_EXHAUSTIVE_SUPPORT:
        raise ValueError(f"support of {k} outcomes is too large to enumerate")
    d = renyi_divergence(p, q, alpha)

    codes = np.arange(1, 2**k)
    masks = ((codes[:, None] >> np.arange(k)) & 1).astype(float)
    prob_p = masks @ p.masses
    prob_q = masks @ q.masses
    with np.errstate(divide="ignore"):
        log_bound = (alpha - 1.0) / alpha * (d + np.log(prob_q))
    bound = np.exp(log_bound)
    slack = bound - prob_p
    i = int(np.argmin(slack))
    witness = tuple(int(j) for j in np.flatnonzero(masks[i]))
    if slack[i] < -PRESERVATION_SLACK_TOLERANCE:
        raise PreservationViolation(witness, float(prob_p[i]), float(bound[i]))
    return PreservationReport(d, float(slack[i]), witness, codes.size)


def grid_optimize(
    objective: Callable[[float], float], lo: float, hi: float, points: int
) -> tuple[float, float]:
    """Minimises over ``points`` log-spaced orders in [lo, hi]; first minimum wins."""
    if not (lo > 1 and hi > lo and points >= 2):
        raise ValueError("need 1 < lo < hi and at least two points")
    alphas = np.geomspace(lo, hi, int(points))
    alphas[0], alphas[-1] = lo, hi
    values = np.array([objective(float(a)) for a in alphas], dtype=float)
    if np.any(np.isnan(values)):
        raise ValueError("objective returned NaN")
    i = int(np.argmin(values))
    return float(alphas[i]), float(values[i])
