"""RDP budget curves and what can be concluded from them.

A curve is a symbolic list of (mechanism, count) pairs; evaluating it at an
order sums the closed-form curves of its components, so no interpolation is
ever involved. From a curve we derive (eps, delta)-DP statements, two-sided
bounds on how much the probability of an event can move, group-privacy
statements and moment bounds on the Bayes factor. The generic composition
bounds that only see a pure-DP epsilon live here too, for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np
from scipy import optimize

from renyi_dp.divergence import check_order
from renyi_dp.mechanisms import Mechanism

INF = math.inf

DEFAULT_ORDERS: tuple[float, ...] = (
    1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 16.0, 32.0, 64.0, INF,
)

# Continuous refinement searches alpha in (1 + MIN_EXCESS, MAX_ORDER].
MIN_EXCESS = 1e-6
MAX_ORDER = 1e6
_SCAN_POINTS = 241
_CAP = 1e300


class PreconditionError(ValueError):
    """The theorem being applied does not cover the given parameters."""


def _check_probability(name: str, value: float, *, open_low=False, open_high=False) -> float:
    value = float(value)
    low_ok = value > 0 if open_low else value >= 0
    high_ok = value < 1 if open_high else value <= 1
    if not (low_ok and high_ok):
        raise ValueError(f"{name} must be a probability in the allowed range, got {value}")
    return value


def _check_count(name: str, n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class OrdersGrid:
    """Strictly increasing orders above 1, optionally ending with ``inf``."""

    orders: tuple[float, ...] = DEFAULT_ORDERS

    def __post_init__(self):
        orders = tuple(float(a) for a in self.orders)
        if not orders:
            raise ValueError("orders grid is empty")
        if any(math.isnan(a) or a <= 1.0 for a in orders):
            raise ValueError(f"grid orders must be > 1, got {orders}")
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise ValueError(f"grid orders must be strictly increasing, got {orders}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def parse(cls, text: str) -> "OrdersGrid":
        """Reads ``"default"`` or a comma-separated list such as ``"2,4,inf"``."""
        text = text.strip()
        if text.lower() == "default":
            return cls()
        return cls(tuple(float(tok) for tok in text.split(",") if tok.strip()))

    def __iter__(self):
        return iter(self.orders)

    def __len__(self):
        return len(self.orders)

    @property
    def finite(self) -> tuple[float, ...]:
        return tuple(a for a in self.orders if math.isfinite(a))


DEFAULT_GRID = OrdersGrid()


@dataclass(frozen=True, eq=False)
class RdpCurve:
    """The budget curve alpha -> eps(alpha) of a composition of mechanisms.

    Identical mechanisms are merged into a single entry with a summed count.
    Evaluations are memoised per order; the memo never changes a result.
    """

    components: tuple[tuple[Mechanism, int], ...] = ()
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        merged: dict = {}
        for mechanism, count in self.components:
            merged[mechanism] = merged.get(mechanism, 0) + _check_count("count", count)
        object.__setattr__(self, "components", tuple(merged.items()))

    @classmethod
    def of(cls, mechanism: Mechanism, count: int = 1) -> "RdpCurve":
        return cls(((mechanism, count),))

    def evaluate(self, alpha: float) -> float:
        alpha = check_order(alpha)
        try:
            return self._memo[alpha]
        except KeyError:
            pass
        value = math.fsum(n * m.rdp_epsilon(alpha) for m, n in self.components)
        if math.isnan(value):  # fsum of several infinities
            value = INF
        self._memo[alpha] = value
        return value

    __call__ = evaluate

    def __add__(self, other: "RdpCurve") -> "RdpCurve":
        return compose([self, other])

    def __mul__(self, n: int) -> "RdpCurve":
        """n-fold self-composition; ``0 * curve`` is the empty curve."""
        if n == 0:
            return RdpCurve()
        n = _check_count("repetitions", n)
        return RdpCurve(tuple((m, c * n) for m, c in self.components))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RdpCurve):
            return NotImplemented
        return dict(self.components) == dict(other.components)

    def __hash__(self):
        return hash(frozenset(self.components))


def compose(curves: Sequence[RdpCurve]) -> RdpCurve:
    """Sequential composition: budget curves add pointwise."""
    curves = list(curves)
    if not curves:
        raise ValueError("nothing to compose")
    return RdpCurve(tuple(pair for c in curves for pair in c.components))


@dataclass(frozen=True)
class EpsDelta:
    """An (eps, delta)-DP statement and the order it was derived from.

    ``alpha`` is ``inf`` for statements that were not derived from a
    particular finite order (the generic advanced composition bound).
    """

    eps: float
    delta: float
    alpha: float

    def __post_init__(self):
        _check_probability("delta", self.delta, open_low=True, open_high=True)


@dataclass(frozen=True)
class ProbabilityInterval:
    """Range for Pr[f(D') in S] given Pr[f(D) in S] and an RDP curve."""

    lower: float
    upper: float
    alpha_lower: float
    alpha_upper: float
    vacuous: bool = False

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")


PrivacyReport = Union[EpsDelta, ProbabilityInterval]


def group_privacy(curve: RdpCurve, c: int, alpha: float) -> tuple[float, float]:
    """Guarantee after a 2**c-stable preprocessing step.

    Returns ``(alpha / 2**c, 3**c * curve(alpha))``. Only defined for finite
    ``alpha >= 2**(c + 1)``.
    """
    if isinstance(c, bool) or int(c) != c or c < 0:
        raise ValueError(f"c must be a non-negative integer, got {c!r}")
    c = int(c)
    alpha = check_order(alpha)
    if math.isinf(alpha) or alpha < 2.0 ** (c + 1):
        raise PreconditionError(
            f"group privacy for 2**{c}-stable maps needs finite alpha >= {2 ** (c + 1)}, "
            f"got {alpha}"
        )
    return alpha / 2.0**c, 3.0**c * curve.evaluate(alpha)


def to_eps_delta(curve: RdpCurve, alpha: float, delta: float) -> EpsDelta:
    """(eps(alpha) + log(1/delta) / (alpha - 1), delta)-DP."""
    delta = _check_probability("delta", delta, open_low=True, open_high=True)
    alpha = check_order(alpha)
    if alpha == 1.0 or math.isinf(alpha):
        raise PreconditionError(f"conversion needs a finite order above 1, got {alpha}")
    return EpsDelta(curve.evaluate(alpha) - math.log(delta) / (alpha - 1.0), delta, alpha)


def _exp(x: float) -> float:
    """exp that saturates to inf instead of raising."""
    try:
        return math.exp(x)
    except OverflowError:
        return INF


def _to_order(t: float) -> float:
    return 1.0 + math.exp(t)


def _minimize_over_orders(
    objective: Callable[[float], float],
    orders: Iterable[float],
    continuous: bool,
) -> tuple[float, float]:
    """Minimises ``objective`` over the grid, optionally refined over (1, MAX_ORDER].

    Ties go to the smallest order. The continuous search parametrises the
    order as 1 + exp(t), scans t on a uniform grid and polishes the best scan
    point with a bounded Brent search between its two neighbours; the result
    is only used if it beats the grid.
    """
    candidates = [(objective(a), a) for a in orders]
    if continuous:
        ts = np.linspace(math.log(MIN_EXCESS), math.log(MAX_ORDER - 1.0), _SCAN_POINTS)
        values = [objective(_to_order(t)) for t in ts]
        i = int(np.argmin(values))
        candidates.append((values[i], _to_order(ts[i])))
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
        if math.isfinite(values[i]) and hi > lo:
            # Brent's parabolic step needs finite values
            res = optimize.minimize_scalar(
                lambda t: min(objective(_to_order(t)), _CAP), bounds=(lo, hi),
                method="bounded", options={"xatol": 1e-9},
            )
            if res.fun < _CAP:
                candidates.append((float(res.fun), _to_order(float(res.x))))
    best_value, best_alpha = INF, INF
    for value, alpha in candidates:
        if math.isnan(value):
            continue
        if value < best_value or (value == best_value and alpha < best_alpha):
            best_value, best_alpha = value, alpha
    if best_alpha == INF and best_value == INF:
        # every candidate was infinite: report the smallest order examined
        best_alpha = min(a for _, a in candidates)
    return best_value, best_alpha


def optimal_eps_for_delta(
    curve: RdpCurve,
    delta: float,
    grid: OrdersGrid = DEFAULT_GRID,
    continuous: bool = False,
) -> EpsDelta:
    """Tightest (eps, delta) statement over the grid (and optionally all orders)."""
    delta = _check_probability("delta", delta, open_low=True, open_high=True)
    finite = grid.finite
    if not finite:
        raise ValueError("grid has no finite order to convert from")
    log_inv_delta = -math.log(delta)

    def objective(alpha):
        return curve.evaluate(alpha) + log_inv_delta / (alpha - 1.0)

    eps, alpha = _minimize_over_orders(objective, finite, continuous)
    return EpsDelta(eps, delta, alpha)


def log_upper_bound_at(curve: RdpCurve, q: float, alpha: float) -> float:
    """log of (e^eps(alpha) * q)^((alpha-1)/alpha), without clamping."""
    if q == 0:
        return -INF
    eps = curve.evaluate(alpha)
    if math.isinf(alpha):
        return eps + math.log(q)
    return (alpha - 1.0) / alpha * (eps + math.log(q))


def upper_bound_at(curve: RdpCurve, q: float, alpha: float) -> float:
    """Largest Pr[f(D') in S] allowed at one order; not clamped to 1."""
    alpha = check_order(alpha)
    q = _check_probability("q", q)
    if math.isinf(alpha):
        return _exp(curve.evaluate(alpha)) * q
    return _exp(log_upper_bound_at(curve, q, alpha))


def log_lower_bound_at(curve: RdpCurve, q: float, alpha: float) -> float:
    """log of e^-eps(alpha) * q^(alpha/(alpha-1))."""
    if q == 0:
        return -INF
    eps = curve.evaluate(alpha)
    if math.isinf(alpha):
        return -eps + math.log(q)
    return -eps + alpha / (alpha - 1.0) * math.log(q)


def lower_bound_at(curve: RdpCurve, q: float, alpha: float) -> float:
    """Smallest Pr[f(D') in S] allowed at one order."""
    alpha = check_order(alpha)
    q = _check_probability("q", q)
    if math.isinf(alpha):
        return math.exp(-curve.evaluate(alpha)) * q
    return math.exp(log_lower_bound_at(curve, q, alpha))


def optimal_upper_bound(
    curve: RdpCurve,
    q: float,
    grid: OrdersGrid = DEFAULT_GRID,
    continuous: bool = False,
) -> tuple[float, float]:
    """Smallest unclamped upper bound on Pr[f(D') in S] and its order."""
    q = _check_probability("q", q)
    if q == 0:
        return 0.0, grid.orders[0]
    value, alpha = _minimize_over_orders(
        lambda a: log_upper_bound_at(curve, q, a), grid, continuous
    )
    if math.isinf(alpha):
        return _exp(curve.evaluate(alpha)) * q, alpha
    return _exp(value), alpha


def optimal_lower_bound(
    curve: RdpCurve,
    q: float,
    grid: OrdersGrid = DEFAULT_GRID,
    continuous: bool = False,
) -> tuple[float, float]:
    q = _check_probability("q", q)
    if q == 0:
        return 0.0, grid.orders[0]
    value, alpha = _minimize_over_orders(
        lambda a: -log_lower_bound_at(curve, q, a), grid, continuous
    )
    return math.exp(-value), alpha


def probability_interval(
    curve: RdpCurve,
    q: float,
    grid: OrdersGrid = DEFAULT_GRID,
    continuous: bool = False,
) -> ProbabilityInterval:
    """Two-sided range for an event's probability under the neighbouring input.

    ``q`` is the event's probability under one input; the interval bounds it
    under any adjacent input. An upper bound at or above 1 carries no
    information and is reported as 1 with ``vacuous=True``.
    """
    upper, alpha_upper = optimal_upper_bound(curve, q, grid, continuous)
    lower, alpha_lower = optimal_lower_bound(curve, q, grid, continuous)
    vacuous = upper >= 1.0
    upper = min(1.0, upper)
    lower = min(lower, upper)
    return ProbabilityInterval(lower, upper, alpha_lower, alpha_upper, vacuous)


def advanced_composition_bound(eps: float, n: int, q: float, clamp: bool = True) -> float:
    """exp(2 eps sqrt(n log(1/q))) * q for n adaptively composed eps-DP mechanisms.

    With ``clamp=False`` the raw right-hand side is returned even when it
    exceeds 1.
    """
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be finite and non-negative, got {eps}")
    n = _check_count("n", n)
    q = _check_probability("q", q)
    if q == 0:
        return 0.0
    value = _exp(2.0 * eps * math.sqrt(-n * math.log(q)) + math.log(q))
    return min(1.0, value) if clamp else value


def advanced_eps_delta(eps: float, n: int, delta: float) -> EpsDelta:
    """eps' = 4 eps sqrt(2 n log(1/delta)) for n composed eps-DP mechanisms."""
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be finite and non-negative, got {eps}")
    n = _check_count("n", n)
    delta = _check_probability("delta", delta, open_low=True, open_high=True)
    log_inv_delta = -math.log(delta)
    if log_inv_delta < eps**2 * n:
        raise PreconditionError(
            f"log(1/delta) = {log_inv_delta:.6g} < eps^2 n = {eps**2 * n:.6g}; "
            "outside the high privacy regime where this bound holds"
        )
    return EpsDelta(4.0 * eps * math.sqrt(2.0 * n * log_inv_delta), delta, INF)


def drv_eps_delta(eps: float, k: int, delta_prime: float) -> float:
    """eps' = sqrt(2k ln(1/delta')) eps + k eps (e^eps - 1) for k-fold composition."""
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be finite and non-negative, got {eps}")
    k = _check_count("k", k)
    delta_prime = _check_probability("delta_prime", delta_prime, open_low=True, open_high=True)
    return math.sqrt(-2.0 * k * math.log(delta_prime)) * eps + k * eps * math.expm1(eps)


def drv_probability_bound(
    eps: float,
    k: int,
    q: float,
    clamp: bool = True,
    points: int = 4000,
    delta_range: tuple[float, float] = (1e-12, 1.0 - 1e-6),
) -> tuple[float, float]:
    """min over delta' of e^eps'(delta') q + delta', on a log-spaced delta' grid.

    Returns ``(bound, delta')``.
    """
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be finite and non-negative, got {eps}")
    k = _check_count("k", k)
    q = _check_probability("q", q)
    deltas = np.geomspace(delta_range[0], delta_range[1], points)
    eps_prime = np.sqrt(-2.0 * k * np.log(deltas)) * eps + k * eps * math.expm1(eps)
    with np.errstate(over="ignore"):
        bounds = np.exp(eps_prime) * q + deltas
    i = int(np.argmin(bounds))
    value = float(bounds[i])
    return (min(1.0, value) if clamp else value), float(deltas[i])


def naive_eps(eps: float, n: int) -> float:
    """Basic composition: epsilons add."""
    if not (eps >= 0):
        raise ValueError(f"eps must be non-negative, got {eps}")
    return _check_count("n", n) * eps


def bayes_moment_bound(curve: RdpCurve, alpha: float) -> float:
    """exp((alpha - 1) eps(alpha)), bounding the alpha-th moment of the odds change."""
    alpha = check_order(alpha)
    if math.isinf(alpha):
        raise PreconditionError("moment bound needs a finite order")
    if alpha == 1.0:
        return 1.0
    return _exp((alpha - 1.0) * curve.evaluate(alpha))


def odds_tail_bound(curve: RdpCurve, alpha: float, beta: float) -> float:
    """Markov bound on Pr[posterior odds grow by more than a factor beta].

    Uses the (alpha - 1)-th moment of the odds change, which is at most
    exp((alpha - 1) eps(alpha)).
    """
    alpha = check_order(alpha)
    if alpha == 1.0 or math.isinf(alpha):
        raise PreconditionError("tail bound needs a finite order above 1")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    log_bound = (alpha - 1.0) * (curve.evaluate(alpha) - math.log(beta))
    return min(1.0, math.exp(log_bound)) if log_bound < 0 else 1.0
