import math

import numpy as np
import pytest
from hypothesis import strategies as st

from renyi_dp.divergence import (
    DiscreteDistribution,
    QuadratureSettings,
    gaussian_log_density,
    laplace_log_density,
    renyi_divergence_quadrature,
)


def laplace_pair_divergence(scale, alpha, tol=1e-10):
    """D_alpha(Lap(0, scale) || Lap(1, scale)) by quadrature."""
    settings = QuadratureSettings(
        (-60.0 * scale, 1.0 + 60.0 * scale), breakpoints=(0.0, 1.0), abs_tolerance=tol
    )
    return renyi_divergence_quadrature(
        laplace_log_density(0.0, scale), laplace_log_density(1.0, scale), alpha, settings
    )


def gaussian_pair_divergence(sigma, alpha, mu=1.0, tol=1e-10):
    """D_alpha(N(0, sigma^2) || N(mu, sigma^2)) by quadrature.

    The integrand peaks at (1 - alpha) mu, so the window is widened by alpha.
    """
    reach = 40.0 * sigma + abs(alpha * mu)
    settings = QuadratureSettings((-reach, reach + mu), abs_tolerance=tol)
    return renyi_divergence_quadrature(
        gaussian_log_density(0.0, sigma), gaussian_log_density(mu, sigma), alpha, settings
    )


@st.composite
def distribution_pairs(draw, min_size=2, max_size=8, floor=1e-3, count=2):
    k = draw(st.integers(min_size, max_size))
    out = []
    for _ in range(count):
        raw = draw(st.lists(st.floats(0.0, 1.0), min_size=k, max_size=k))
        w = np.asarray(raw) + floor
        if w.sum() == 0:
            w[0] = 1.0
        out.append(DiscreteDistribution(w / w.sum()))
    return tuple(out)


orders = st.one_of(
    st.just(1.0),
    st.floats(1.01, 200.0),
    st.just(math.inf),
)


@pytest.fixture
def rng():
    return np.random.default_rng(1729)
