"""Largest order statistics of independent scale-family components.

For components ``X_i ~ F_i(lambda_i t)`` the parallel-system lifetime
``max_i X_i`` has

* CDF ``prod_i F_i(lambda_i t)``,
* reverse hazard ``sum_i lambda_i r_i(lambda_i t)``,
* density ``CDF * reverse hazard``.

All reductions run over the components in a canonical order (baseline spec,
then scale), so results are bit-for-bit invariant under permuting the
component list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from scipy.special import logsumexp

from .baseline import Baseline, _as_times, _out
from .errors import DomainError

__all__ = [
    "OutlierModel",
    "ScaleModel",
    "TwoBaselineModel",
    "as_scale_model",
    "expand",
    "max_cdf",
    "max_log_cdf",
    "max_log_pdf",
    "max_log_reverse_hazard",
    "max_log_sf",
    "max_pdf",
    "max_reverse_hazard",
]

# F(lambda_i t) below this makes the product CDF (and density) report 0.
UNDERFLOW = 1e-300
_LOG_UNDERFLOW = math.log(UNDERFLOW)


def _check_scale(value, what="lambda") -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{what} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ScaleModel:
    """Independent components ``X_i ~ baselines[i](lambdas[i] * t)``."""

    baselines: tuple[Baseline, ...]
    lambdas: tuple[float, ...]

    def __post_init__(self):
        baselines = tuple(self.baselines)
        lambdas = tuple(_check_scale(v) for v in self.lambdas)
        if not lambdas:
            raise DomainError("a scale model needs at least one component")
        if len(baselines) != len(lambdas):
            raise DomainError(
                f"{len(baselines)} baselines for {len(lambdas)} scale parameters"
            )
        object.__setattr__(self, "baselines", baselines)
        object.__setattr__(self, "lambdas", lambdas)

    @classmethod
    def single(cls, baseline: Baseline, lambdas) -> "ScaleModel":
        lambdas = tuple(lambdas)
        return cls((baseline,) * len(lambdas), lambdas)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def components(self) -> tuple[tuple[Baseline, float], ...]:
        return tuple(zip(self.baselines, self.lambdas))

    @property
    def common_baseline(self) -> Baseline | None:
        first = self.baselines[0]
        return first if all(b == first for b in self.baselines) else None

    @cached_property
    def _groups(self) -> tuple[tuple[Baseline, np.ndarray], ...]:
        order = sorted(range(self.n), key=lambda i: (self.baselines[i].spec(), self.lambdas[i]))
        groups: dict[Baseline, list[float]] = {}
        for i in order:
            groups.setdefault(self.baselines[i], []).append(self.lambdas[i])
        return tuple((b, np.asarray(lams)) for b, lams in groups.items())

    def component_terms(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-component ``(log F, log(1-F), log lambda + log r)``, shape ``(n, len(t))``.

        ``t`` must already be a validated positive 1-d array.
        """
        parts = []
        for baseline, lams in self._groups:
            u = np.multiply.outer(lams, t)
            log_cdf, log_sf, log_rh = baseline._terms(u.ravel())
            shape = u.shape
            parts.append(
                (
                    log_cdf.reshape(shape),
                    log_sf.reshape(shape),
                    log_rh.reshape(shape) + np.log(lams)[:, None],
                )
            )
        return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))

    def describe(self) -> str:
        if self.common_baseline is not None:
            lams = ",".join(repr(v) for v in self.lambdas)
            return f"baseline={self.common_baseline.spec()} lambda={lams}"
        comps = ";".join(f"{b.spec()}@{v!r}" for b, v in self.components)
        return f"components={comps}"


@dataclass(frozen=True)
class OutlierModel:
    """``p`` components at scale ``lambda1`` and ``q`` at scale ``lam``."""

    baseline: Baseline
    p: int
    lambda1: float
    q: int
    lam: float

    def __post_init__(self):
        for name in ("p", "q"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "lambda1", _check_scale(self.lambda1, "lambda1"))
        object.__setattr__(self, "lam", _check_scale(self.lam, "lambda"))

    @property
    def n(self) -> int:
        return self.p + self.q

    def expand(self) -> ScaleModel:
        return ScaleModel.single(self.baseline, (self.lambda1,) * self.p + (self.lam,) * self.q)

    def reverse_hazard(self, t):
        """``p lambda1 r(lambda1 t) + q lambda r(lambda t)``."""
        b = self.baseline
        return self.p * self.lambda1 * b.reverse_hazard(
            np.multiply(self.lambda1, t)
        ) + self.q * self.lam * b.reverse_hazard(np.multiply(self.lam, t))


@dataclass(frozen=True)
class TwoBaselineModel:
    """``p`` components ``F(lambda1 t)`` and ``q`` components ``G(lam t)``."""

    baseline_f: Baseline
    baseline_g: Baseline
    p: int
    lambda1: float
    q: int
    lam: float

    def __post_init__(self):
        OutlierModel.__post_init__(self)  # same field checks

    @property
    def n(self) -> int:
        return self.p + self.q

    def expand(self) -> ScaleModel:
        return ScaleModel(
            (self.baseline_f,) * self.p + (self.baseline_g,) * self.q,
            (self.lambda1,) * self.p + (self.lam,) * self.q,
        )

    def reverse_hazard(self, t):
        """``p lambda1 r_F(lambda1 t) + q lambda r_G(lambda t)``."""
        return self.p * self.lambda1 * self.baseline_f.reverse_hazard(
            np.multiply(self.lambda1, t)
        ) + self.q * self.lam * self.baseline_g.reverse_hazard(np.multiply(self.lam, t))


AnyModel = Union[ScaleModel, OutlierModel, TwoBaselineModel]


def as_scale_model(model: AnyModel) -> ScaleModel:
    if isinstance(model, ScaleModel):
        return model
    if isinstance(model, (OutlierModel, TwoBaselineModel)):
        return model.expand()
    raise TypeError(f"not a scale model: {model!r}")


def expand(outlier: OutlierModel | TwoBaselineModel) -> ScaleModel:
    return outlier.expand()


def max_log_cdf(model: AnyModel, t):
    u, scalar = _as_times(t, allow_zero=True)
    out = np.full_like(u, -np.inf)
    pos = u > 0
    if np.any(pos):
        log_cdf, _, _ = as_scale_model(model).component_terms(u[pos])
        out[pos] = log_cdf.sum(axis=0)
    return _out(out, scalar)


def max_log_sf(model: AnyModel, t):
    """``log(1 - F_max)``, accurate in the upper tail."""
    log_cdf = np.atleast_1d(max_log_cdf(model, t))
    with np.errstate(divide="ignore"):
        out = np.log(-np.expm1(log_cdf))
    return _out(out, np.ndim(t) == 0)


def max_log_reverse_hazard(model: AnyModel, t):
    u, scalar = _as_times(t, allow_zero=False)
    _, _, log_terms = as_scale_model(model).component_terms(u)
    return _out(logsumexp(log_terms, axis=0), scalar)


def max_log_pdf(model: AnyModel, t):
    u, scalar = _as_times(t, allow_zero=False)
    log_cdf, _, log_terms = as_scale_model(model).component_terms(u)
    return _out(log_cdf.sum(axis=0) + logsumexp(log_terms, axis=0), scalar)


def max_cdf(model: AnyModel, t):
    """``prod_i F(lambda_i t)``; reported as 0 once any factor drops below 1e-300."""
    u, scalar = _as_times(t, allow_zero=True)
    out = np.zeros_like(u)
    pos = u > 0
    if np.any(pos):
        log_cdf, _, _ = as_scale_model(model).component_terms(u[pos])
        vals = np.exp(log_cdf.sum(axis=0))
        vals[np.any(log_cdf < _LOG_UNDERFLOW, axis=0)] = 0.0
        out[pos] = vals
    return _out(out, scalar)


def max_reverse_hazard(model: AnyModel, t):
    """``sum_i lambda_i r(lambda_i t)``."""
    u, scalar = _as_times(t, allow_zero=False)
    _, _, log_terms = as_scale_model(model).component_terms(u)
    return _out(np.exp(log_terms).sum(axis=0), scalar)


def max_pdf(model: AnyModel, t):
    """``F_max(t) * r_max(t)``; 0 under the same underflow rule as :func:`max_cdf`."""
    u, scalar = _as_times(t, allow_zero=False)
    log_cdf, _, log_terms = as_scale_model(model).component_terms(u)
    vals = np.exp(log_cdf.sum(axis=0)) * np.exp(log_terms).sum(axis=0)
    vals[np.any(log_cdf < _LOG_UNDERFLOW, axis=0)] = 0.0
    return _out(vals, scalar)
