"""Baseline lifetime distributions.

A baseline is an absolutely continuous distribution on ``(0, inf)``.  Every
quantity the rest of the package consumes is derived from four primitives:
``log f``, ``log F``, ``log(1 - F)`` and the density elasticity
``t f'(t) / f(t)``.  Working in log space keeps reverse hazards finite far
into both tails, where ``f`` or ``F`` alone would under- or overflow.

The generalized gamma family ``GG(beta, alpha)`` has density
``beta / Gamma(alpha/beta) * t**(alpha-1) * exp(-t**beta)`` and contains the
exponential ``(1, 1)``, gamma ``(1, a)`` and Weibull ``(a, a)`` laws.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._special import log_gammainc_pair, lower_series, upper_fraction
from .errors import DomainError

__all__ = [
    "Baseline",
    "ConditionFunctions",
    "GeneralizedGamma",
    "GeneralizedGammaParams",
    "condition_functions",
    "gg_cdf",
    "gg_log_density_slope",
    "gg_pdf",
    "gg_reverse_hazard",
    "gg_reverse_hazard_derivative",
    "make_special",
]


def _as_times(t, *, allow_zero: bool) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(np.isnan(arr)):
        raise DomainError("t must not be NaN")
    bad = arr < 0 if allow_zero else arr <= 0
    if np.any(bad):
        bound = ">= 0" if allow_zero else "> 0"
        raise DomainError(f"t must be {bound}, got {arr[bad][0]!r}")
    return arr, scalar


def _out(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


class Baseline(ABC):
    """Absolutely continuous lifetime distribution with ``F(t) > 0`` for ``t > 0``.

    Subclasses implement the underscored primitives on validated, positive,
    one-dimensional arrays.  The public methods accept scalars or arrays and
    return the same kind.
    """

    @abstractmethod
    def _log_pdf(self, u: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _log_cdf_sf(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...

    @abstractmethod
    def _elasticity(self, u: np.ndarray) -> np.ndarray:
        """``u f'(u) / f(u)``."""

    @abstractmethod
    def spec(self) -> str:
        """Round-trippable textual form used by the CLI."""

    def _log_rh(self, u: np.ndarray) -> np.ndarray:
        return self._log_pdf(u) - self._log_cdf_sf(u)[0]

    def _terms(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(log F, log(1-F), log r)`` in one pass; override when cheaper jointly."""
        log_cdf, log_sf = self._log_cdf_sf(u)
        return log_cdf, log_sf, self._log_pdf(u) - log_cdf

    # -- public evaluation -------------------------------------------------

    def log_pdf(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self._log_pdf(u), scalar)

    def pdf(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(np.exp(self._log_pdf(u)), scalar)

    def log_cdf(self, t):
        u, scalar = _as_times(t, allow_zero=True)
        out = np.full_like(u, -np.inf)
        pos = u > 0
        if np.any(pos):
            out[pos] = self._log_cdf_sf(u[pos])[0]
        return _out(out, scalar)

    def cdf(self, t):
        return np.exp(self.log_cdf(t))

    def log_sf(self, t):
        u, scalar = _as_times(t, allow_zero=True)
        out = np.zeros_like(u)
        pos = u > 0
        if np.any(pos):
            out[pos] = self._log_cdf_sf(u[pos])[1]
        return _out(out, scalar)

    def sf(self, t):
        return np.exp(self.log_sf(t))

    def log_reverse_hazard(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self._log_rh(u), scalar)

    def reverse_hazard(self, t):
        """``r(t) = f(t) / F(t)``."""
        u, scalar = _as_times(t, allow_zero=False)
        return _out(np.exp(self._log_rh(u)), scalar)

    def elasticity(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self._elasticity(u), scalar)

    def log_density_slope(self, t):
        """``f'(t) / f(t)``."""
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self._elasticity(u) / u, scalar)

    def reverse_hazard_derivative(self, t):
        """``r'(t)``, via ``r' = f'/F - r**2 = r * (f'/f - r)``."""
        u, scalar = _as_times(t, allow_zero=False)
        r = np.exp(self._log_rh(u))
        return _out(r * (self._elasticity(u) / u - r), scalar)


@dataclass(frozen=True)
class GeneralizedGamma(Baseline):
    """``GG(beta, alpha)``; both shapes must be positive and finite."""

    beta: float
    alpha: float

    def __post_init__(self):
        for name in ("beta", "alpha"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def shape_ratio(self) -> float:
        """``alpha / beta``, the gamma shape of ``T**beta``."""
        return self.alpha / self.beta

    @cached_property
    def _log_norm(self) -> float:
        return math.log(self.beta) - math.lgamma(self.shape_ratio)

    def spec(self) -> str:
        return f"gg:beta={self.beta!r},alpha={self.alpha!r}"

    def _log_pdf(self, u):
        return self._log_norm + (self.alpha - 1.0) * np.log(u) - u**self.beta

    def _log_cdf_sf(self, u):
        return log_gammainc_pair(self.shape_ratio, u**self.beta)

    def _elasticity(self, u):
        return self.alpha - 1.0 - self.beta * u**self.beta

    def _terms(self, u):
        s = self.shape_ratio
        x = u**self.beta
        log_u = np.log(u)
        log_p = np.empty_like(u)
        log_q = np.empty_like(u)
        log_rh = np.empty_like(u)

        # Below s + 1 the series gives t r(t) = alpha / S directly, so the
        # reverse hazard never passes through a tiny F.
        small = x < s + 1.0
        if np.any(small):
            xs, lu = x[small], log_u[small]
            log_series = np.log(lower_series(s, xs))
            lp = self.alpha * lu - xs - math.lgamma(s + 1.0) + log_series
            log_p[small] = lp
            log_q[small] = np.log1p(-np.exp(lp))
            log_rh[small] = math.log(self.alpha) - log_series - lu

        large = ~small
        if np.any(large):
            xl, lu = x[large], log_u[large]
            lq = self.alpha * lu - xl - math.lgamma(s) + np.log(upper_fraction(s, xl))
            lp = np.log1p(-np.exp(lq))
            log_q[large] = lq
            log_p[large] = lp
            log_rh[large] = self._log_norm + (self.alpha - 1.0) * lu - xl - lp
        return log_p, log_q, log_rh

    def _log_rh(self, u):
        return self._terms(u)[2]

    def eta_identity(self, t):
        """``-(alpha - 1 - beta t**beta - t r(t))``: closed form of ``-t r'/r``."""
        u, scalar = _as_times(t, allow_zero=False)
        tr = u * np.exp(self._log_rh(u))
        return _out(-(self.alpha - 1.0 - self.beta * u**self.beta - tr), scalar)


GeneralizedGammaParams = GeneralizedGamma


def make_special(kind: str, shape: float | None = None) -> GeneralizedGamma:
    """Exponential, Weibull or gamma law as a member of the GG family.

    >>> make_special("weibull", 0.5)
    GeneralizedGamma(beta=0.5, alpha=0.5)
    """
    kind = kind.lower()
    if kind in ("exp", "exponential"):
        return GeneralizedGamma(1.0, 1.0)
    if kind not in ("weibull", "gamma"):
        raise ValueError(f"unknown special case {kind!r}")
    if shape is None or not (math.isfinite(shape) and shape > 0):
        raise DomainError(f"{kind} shape must be positive, got {shape!r}")
    if kind == "weibull":
        return GeneralizedGamma(shape, shape)
    return GeneralizedGamma(1.0, shape)


def gg_pdf(params: GeneralizedGamma, t):
    return params.pdf(t)


def gg_cdf(params: GeneralizedGamma, t):
    return params.cdf(t)


def gg_reverse_hazard(params: GeneralizedGamma, t):
    return params.reverse_hazard(t)


def gg_log_density_slope(params: GeneralizedGamma, t):
    return params.log_density_slope(t)


def gg_reverse_hazard_derivative(params: GeneralizedGamma, t):
    return params.reverse_hazard_derivative(t)


@dataclass(frozen=True)
class ConditionFunctions:
    """The three shape functions whose monotonicity the ordering results need.

    ``psi(t) = t r(t)``, ``eta(t) = -t r'(t) / r(t)`` and ``chi(t) = t**2 r'(t)``.
    ``eta`` and ``chi`` are formed from ``psi`` and the density elasticity
    (``-t r'/r = psi - t f'/f``) so they stay finite where ``r`` underflows.
    """

    baseline: Baseline

    def values(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        u, _ = _as_times(t, allow_zero=False)
        psi = u * np.exp(self.baseline._log_rh(u))
        el = self.baseline._elasticity(u)
        return psi, psi - el, psi * (el - psi)

    def psi(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self.values(u)[0], scalar)

    def eta(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self.values(u)[1], scalar)

    def chi(self, t):
        u, scalar = _as_times(t, allow_zero=False)
        return _out(self.values(u)[2], scalar)


def condition_functions(baseline: Baseline) -> ConditionFunctions:
    return ConditionFunctions(baseline)
