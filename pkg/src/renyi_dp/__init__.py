"""Renyi differential privacy accounting."""

from renyi_dp.accountant import (
    DEFAULT_GRID,
    DEFAULT_ORDERS,
    EpsDelta,
    OrdersGrid,
    PreconditionError,
    ProbabilityInterval,
    RdpCurve,
    advanced_composition_bound,
    advanced_eps_delta,
    bayes_moment_bound,
    compose,
    drv_eps_delta,
    drv_probability_bound,
    group_privacy,
    naive_eps,
    odds_tail_bound,
    optimal_eps_for_delta,
    optimal_upper_bound,
    probability_interval,
    to_eps_delta,
)
from renyi_dp.divergence import (
    DiscreteDistribution,
    QuadratureError,
    QuadratureSettings,
    renyi_divergence,
    balanced_holder_exponent,
    renyi_divergence_quadrature,
    weak_triangle_bound,
)
from renyi_dp.mechanisms import (
    Gaussian,
    Laplace,
    PureDP,
    RandomizedResponse,
    TabulatedRdp,
    pure_dp_epsilon,
    rdp_epsilon,
)

__version__ = "0.1.0"
