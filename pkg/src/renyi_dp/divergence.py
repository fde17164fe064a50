"""Renyi divergence between finite distributions and between 1-D densities.

Orders are plain floats: ``1.0`` selects the Kullback-Leibler limit,
``math.inf`` the max-divergence, and anything strictly between is a finite
order. Orders below 1 are rejected.

Divergence values are floats in ``[0, inf]``; ``inf`` signals a genuine
failure of absolute continuity and is never produced by overflow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize
from scipy.special import logsumexp

# |alpha - 1| at or below this is evaluated as the KL divergence.
KL_ROUTING_WIDTH = 1e-9

MASS_TOLERANCE = 1e-12

LogDensity = Callable[[np.ndarray], np.ndarray]


class QuadratureError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate and its error bound travel with the
    exception so callers can decide whether the result is still usable.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


def check_order(alpha: float) -> float:
    """Validates a divergence order and returns it as a float.

    Orders within ``KL_ROUTING_WIDTH`` of 1 are snapped to exactly 1.0.
    """
    alpha = float(alpha)
    if math.isnan(alpha):
        raise ValueError("order must not be NaN")
    if abs(alpha - 1.0) <= KL_ROUTING_WIDTH:
        return 1.0
    if alpha < 1.0:
        raise ValueError(f"orders below 1 are not supported, got {alpha}")
    return alpha


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """A probability vector over an ordered, finite outcome set."""

    masses: np.ndarray
    labels: Optional[tuple] = field(default=None)

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float).reshape(-1)
        if masses.size == 0:
            raise ValueError("distribution needs at least one outcome")
        if not np.all(np.isfinite(masses)):
            raise ValueError("masses must be finite")
        if np.any(masses < 0):
            raise ValueError("masses must be non-negative")
        total = math.fsum(masses)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"masses sum to {total!r}, expected 1")
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != masses.size:
                raise ValueError(
                    f"{len(labels)} labels for {masses.size} outcomes"
                )
            object.__setattr__(self, "labels", labels)

    @classmethod
    def bernoulli(cls, theta: float) -> "DiscreteDistribution":
        """Outcomes (0, 1) with Pr[1] = theta."""
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"Bernoulli parameter must be in [0, 1], got {theta}")
        return cls(np.array([1.0 - theta, theta]), labels=(0, 1))

    def __len__(self) -> int:
        return self.masses.size

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.masses > 0)

    def push_forward(self, kernel: np.ndarray) -> "DiscreteDistribution":
        """Applies a row-stochastic matrix (outcome -> new outcome)."""
        kernel = np.asarray(kernel, dtype=float)
        if kernel.ndim != 2 or kernel.shape[0] != len(self):
            raise ValueError(
                f"kernel shape {kernel.shape} does not match {len(self)} outcomes"
            )
        if np.any(kernel < 0) or not np.allclose(kernel.sum(axis=1), 1.0, atol=1e-12):
            raise ValueError("kernel rows must be probability vectors")
        out = self.masses @ kernel
        return DiscreteDistribution(out / out.sum())


def _check_compatible(p: DiscreteDistribution, q: DiscreteDistribution) -> None:
    if len(p) != len(q):
        raise ValueError(
            f"distributions have different outcome sets ({len(p)} vs {len(q)})"
        )
    if p.labels is not None and q.labels is not None and p.labels != q.labels:
        raise ValueError("distributions are labelled with different outcomes")


def renyi_divergence(
    p: DiscreteDistribution, q: DiscreteDistribution, alpha: float
) -> float:
    """D_alpha(p || q) for distributions over the same outcomes."""
    _check_compatible(p, q)
    alpha = check_order(alpha)
    pm, qm = p.masses, q.masses
    on_p = pm > 0
    if np.any(qm[on_p] == 0):
        return math.inf

    lp = np.log(pm[on_p])
    lq = np.log(qm[on_p])
    log_ratio = lp - lq

    if alpha == 1.0:
        return max(0.0, float(np.dot(pm[on_p], log_ratio)))
    if math.isinf(alpha):
        # p already lives inside supp(q), so the sup is over on_p.
        return max(0.0, float(np.max(log_ratio)))

    # p^a q^(1-a) = p * (p/q)^(a-1); keeps the identity case exactly log(1).
    terms = lp + (alpha - 1.0) * log_ratio
    return max(0.0, float(logsumexp(terms)) / (alpha - 1.0))


def balanced_holder_exponent(alpha: float) -> float:
    """Hoelder exponent h making both orders in ``weak_triangle_bound`` equal.

    Solving h * alpha = h / (h - 1) * (alpha - 1 / h) gives
    h = 1 + sqrt(1 - 1 / alpha), so the common order is
    alpha + sqrt(alpha * (alpha - 1)), close to 2 * alpha - 1/2.
    """
    alpha = check_order(alpha)
    if alpha == 1.0 or math.isinf(alpha):
        raise ValueError("balanced exponent needs a finite order above 1")
    return 1.0 + math.sqrt(1.0 - 1.0 / alpha)


def weak_triangle_bound(
    p: DiscreteDistribution,
    r: DiscreteDistribution,
    q: DiscreteDistribution,
    alpha: float,
    holder: float,
) -> float:
    """Upper bound on D_alpha(p || q) routed through an intermediate r.

    For a Hoelder exponent ``holder`` = h in [1, inf] with conjugate
    h' = h / (h - 1), the bound is

        (alpha - 1/h) / (alpha - 1) * D_{h alpha}(p || r) + D_{h' (alpha - 1/h)}(r || q).

    The endpoints are the limits: h = inf gives
    alpha / (alpha - 1) * D_inf(p || r) + D_alpha(r || q), and h = 1 gives
    D_alpha(p || r) + D_inf(r || q).
    """
    alpha = check_order(alpha)
    if alpha == 1.0 or math.isinf(alpha):
        raise ValueError("weak triangle bound needs a finite order above 1")
    holder = float(holder)
    if math.isnan(holder) or holder < 1.0:
        raise ValueError(f"Hoelder exponent must be in [1, inf], got {holder}")
    if math.isinf(holder):
        first = alpha / (alpha - 1.0) * renyi_divergence(p, r, math.inf)
        return first + renyi_divergence(r, q, alpha)
    if holder == 1.0:
        return renyi_divergence(p, r, alpha) + renyi_divergence(r, q, math.inf)
    conjugate = holder / (holder - 1.0)
    shifted = alpha - 1.0 / holder
    first = shifted / (alpha - 1.0) * renyi_divergence(p, r, holder * alpha)
    return first + renyi_divergence(r, q, conjugate * shifted)


@dataclass(frozen=True)
class QuadratureSettings:
    """Integration window and accuracy target for density divergences.

    ``breakpoints`` mark kinks or peaks inside the window (for example the
    two centres of a pair of Laplace densities). Mass outside the window is
    integrated separately over the two half-lines and folded into the total.
    """

    interval: tuple[float, float]
    max_subdivisions: int = 200
    abs_tolerance: float = 1e-10
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        lo, hi = self.interval
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"interval must be finite with lower < upper, got {self.interval}")
        if self.abs_tolerance <= 0:
            raise ValueError("abs_tolerance must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


def _knots(settings: QuadratureSettings, extra: Sequence[float] = ()) -> list[float]:
    lo, hi = settings.interval
    inner = {float(b) for b in (*settings.breakpoints, *extra) if lo < b < hi}
    return [lo, *sorted(inner), hi]


def _quad_pieces(func, knots, settings, epsabs, epsrel):
    """Integrates func over the real line split at knots; returns (value, error)."""
    total, error = 0.0, 0.0
    edges = [(-math.inf, knots[0])]
    edges += list(zip(knots[:-1], knots[1:]))
    edges.append((knots[-1], math.inf))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in edges:
            value, err = integrate.quad(
                func, a, b, epsabs=epsabs, epsrel=epsrel,
                limit=settings.max_subdivisions,
            )
            total += value
            error += err
    return total, error


def _safe_log_integrand(log_p, log_q, alpha):
    def f(x):
        lp = np.asarray(log_p(x), dtype=float)
        lq = np.asarray(log_q(x), dtype=float)
        with np.errstate(invalid="ignore"):
            out = alpha * lp + (1.0 - alpha) * lq
        return np.where(np.isneginf(lp), -np.inf, out)
    return f


def renyi_divergence_quadrature(
    log_p: LogDensity,
    log_q: LogDensity,
    alpha: float,
    settings: QuadratureSettings,
) -> float:
    """D_alpha between two densities on the real line, by adaptive quadrature.

    ``log_p`` and ``log_q`` must accept numpy arrays. For finite orders the
    integrand p^alpha q^(1-alpha) is rescaled by its maximum over a dense
    sample of the window before integration, so large orders do not
    overflow. Raises ``QuadratureError`` when the propagated error estimate
    on the divergence exceeds ``settings.abs_tolerance``.
    """
    alpha = check_order(alpha)
    lo, hi = settings.interval
    probe = np.union1d(np.linspace(lo, hi, 4001), _knots(settings))
    tol = settings.abs_tolerance

    if math.isinf(alpha):
        gap = np.asarray(log_p(probe)) - np.asarray(log_q(probe))
        i = int(np.argmax(gap))
        left, right = probe[max(i - 1, 0)], probe[min(i + 1, probe.size - 1)]
        best = float(gap[i])
        if right > left:
            res = optimize.minimize_scalar(
                lambda x: -(float(log_p(np.array([x]))[0]) - float(log_q(np.array([x]))[0])),
                bounds=(left, right), method="bounded",
                options={"xatol": 1e-12},
            )
            best = max(best, -float(res.fun))
        return max(0.0, best)

    if alpha == 1.0:
        def kl_integrand(x):
            lp = float(log_p(np.array([x]))[0])
            if lp == -math.inf:
                return 0.0
            lq = float(log_q(np.array([x]))[0])
            return math.exp(lp) * (lp - lq)

        value, error = _quad_pieces(
            kl_integrand, _knots(settings), settings,
            epsabs=tol * 1e-2, epsrel=1e-12,
        )
        if not error <= tol:
            raise QuadratureError("KL integral did not converge", value, error)
        return max(0.0, value)

    log_f = _safe_log_integrand(log_p, log_q, alpha)
    sampled = log_f(probe)
    peak = int(np.argmax(sampled))
    shift = float(sampled[peak])
    if not math.isfinite(shift):
        raise QuadratureError("integrand is not finite inside the window", shift, math.inf)

    def integrand(x):
        return math.exp(float(log_f(np.array([x]))[0]) - shift)

    # the peak is added as a knot so quad never straddles the bulk of the mass
    value, error = _quad_pieces(
        integrand, _knots(settings, [probe[peak]]), settings,
        epsabs=1e-300, epsrel=1e-13,
    )
    if not value > 0:
        raise QuadratureError("integral vanished after rescaling", -math.inf, math.inf)
    result = (shift + math.log(value)) / (alpha - 1.0)
    d_error = error / (value * (alpha - 1.0))
    if not d_error <= tol:
        raise QuadratureError("Renyi integral did not converge", result, d_error)
    return max(0.0, result)


def laplace_log_density(loc: float, scale: float) -> LogDensity:
    """log of (1 / 2b) exp(-|x - loc| / b)."""
    log_norm = -math.log(2.0 * scale)
    return lambda x: log_norm - np.abs(np.asarray(x, dtype=float) - loc) / scale


def gaussian_log_density(loc: float, sigma: float) -> LogDensity:
    log_norm = -math.log(sigma) - 0.5 * math.log(2.0 * math.pi)
    return lambda x: log_norm - 0.5 * ((np.asarray(x, dtype=float) - loc) / sigma) ** 2
