"""Datasets comparing composition bounds under repeated invocation.

``figure2_rows`` pits four upper bounds on the multiplicative growth of an
event's probability against each other for a self-composed randomized
response or Laplace mechanism. ``figure3_rows`` shows how little is lost by
reading a mixed composition's curve only at the 13 default orders.

All growth factors are reported unclamped, i.e. they may exceed 1/q.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from renyi_dp.accountant import (
    DEFAULT_GRID,
    RdpCurve,
    advanced_composition_bound,
    drv_probability_bound,
    optimal_upper_bound,
)
from renyi_dp.mechanisms import Gaussian, Laplace, Mechanism, RandomizedResponse

FIGURE2_DEFAULTS = {"rr": 0.51, "laplace": 20.0}
FIGURE2_N_MAX = 250
FIGURE3_BASELINES = (0.1, 1e-3, 1e-6)
FIGURE3_N_MAX = 100

FIGURE2_HEADER = ("n", "naive", "advanced_eps_delta_opt", "prop_advanced", "rdp_opt")
FIGURE3_HEADER = (
    "n", "q", "bound_continuous", "bound_grid", "alpha_continuous", "alpha_grid",
)

_LN10 = math.log(10.0)


class Figure2Row(NamedTuple):
    n: int
    naive: float
    advanced_eps_delta_opt: float
    prop_advanced: float
    rdp_opt: float


class Figure3Row(NamedTuple):
    n: int
    q: float
    bound_continuous: float
    bound_grid: float
    alpha_continuous: float
    alpha_grid: float


def figure2_mechanism(name: str, param: float | None = None) -> Mechanism:
    if name not in FIGURE2_DEFAULTS:
        raise ValueError(f"unknown mechanism {name!r}; expected one of {sorted(FIGURE2_DEFAULTS)}")
    value = FIGURE2_DEFAULTS[name] if param is None else param
    return RandomizedResponse(value) if name == "rr" else Laplace(value)


def figure2_rows(mechanism: Mechanism, q: float, n_max: int = FIGURE2_N_MAX) -> list[Figure2Row]:
    """log10 of the bound on Pr[f(D') in S] / q after n = 1..n_max compositions."""
    if not 0 < q < 1:
        raise ValueError(f"baseline must be in (0, 1), got {q}")
    eps = mechanism.pure_dp_epsilon()
    base = RdpCurve.of(mechanism)
    log_q = math.log(q)
    rows = []
    for n in range(1, n_max + 1):
        drv, _ = drv_probability_bound(eps, n, q, clamp=False)
        advanced = advanced_composition_bound(eps, n, q, clamp=False)
        rdp, _ = optimal_upper_bound(base * n, q, DEFAULT_GRID, continuous=True)
        rows.append(Figure2Row(
            n,
            n * eps / _LN10,
            (math.log(drv) - log_q) / _LN10,
            (math.log(advanced) - log_q) / _LN10,
            (math.log(rdp) - log_q) / _LN10,
        ))
    return rows


def mixed_curve(rr_p: float = 0.52, laplace_scale: float = 20.0, gaussian_sigma: float = 10.0) -> RdpCurve:
    """One round of randomized response, Laplace and Gaussian releases."""
    return RdpCurve((
        (RandomizedResponse(rr_p), 1),
        (Laplace(laplace_scale), 1),
        (Gaussian(gaussian_sigma), 1),
    ))


def figure3_rows(
    baselines: Sequence[float] = FIGURE3_BASELINES,
    n_max: int = FIGURE3_N_MAX,
    round_curve: RdpCurve | None = None,
) -> list[Figure3Row]:
    """Growth bound Pr[f(D') in S] / q for n = 0..n_max rounds, grid vs all orders."""
    round_curve = mixed_curve() if round_curve is None else round_curve
    rows = []
    for q in baselines:
        if not 0 < q < 1:
            raise ValueError(f"baseline must be in (0, 1), got {q}")
        for n in range(n_max + 1):
            curve = round_curve * n
            grid_bound, grid_alpha = optimal_upper_bound(curve, q, DEFAULT_GRID, continuous=False)
            cont_bound, cont_alpha = optimal_upper_bound(curve, q, DEFAULT_GRID, continuous=True)
            rows.append(Figure3Row(n, q, cont_bound / q, grid_bound / q, cont_alpha, grid_alpha))
    return rows
