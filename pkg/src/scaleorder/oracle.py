"""Monte Carlo cross-checks by inverse-CDF sampling.

Draws are reproducible from a public 64-bit seed.  The seed feeds a
:class:`numpy.random.SeedSequence`, which is split into independent child
streams; each stream drives a PCG64 generator.  A batch of ``count`` draws
split over ``k`` streams is the concatenation of the per-stream draws in
stream order, so output depends only on ``(seed, count, streams)``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .baseline import Baseline, _out
from .errors import DomainError
from .scale_model import AnyModel, as_scale_model, max_cdf

__all__ = [
    "SampleBatch",
    "StReport",
    "ks_distance",
    "mc_check_st",
    "model_ks_distance",
    "quantile",
    "sample_max",
    "uniforms",
]

_MAX_SEED = 2**64
_BRACKET_STEPS = 12
_LOG_T_LIMIT = 700.0
_BISECT_STEPS = 200


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < _MAX_SEED:
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def quantile(baseline: Baseline, u):
    """Solve ``F(t) = u`` for ``t`` (vectorized over ``u``).

    The root is bracketed in ``log t`` starting from ``t = 1`` with a step
    that doubles until the bracket straddles ``u``, then refined by
    bisection in ``log t`` down to adjacent floating-point values.  For
    ``u > 1/2`` the survival function is used so that upper-tail levels
    keep full relative precision.

    Raises
    ------
    DomainError
        If any ``u`` lies outside the open interval ``(0, 1)``.
    """
    uu = np.asarray(u, dtype=float)
    scalar = uu.ndim == 0
    uu = np.atleast_1d(uu).ravel()
    bad = ~((uu > 0) & (uu < 1))
    if np.any(bad):
        raise DomainError(f"quantile level must lie in (0, 1), got {uu[bad][0]!r}")

    upper = uu > 0.5
    target = np.where(upper, np.log1p(-uu), np.log(uu))

    def below(log_t, idx):
        """True where ``F(exp(log_t)) < u`` for the entries ``idx``."""
        t = np.exp(log_t)
        out = np.empty(idx.size, dtype=bool)
        up = upper[idx]
        if np.any(up):
            out[up] = baseline.log_sf(t[up]) > target[idx][up]
        if np.any(~up):
            out[~up] = baseline.log_cdf(t[~up]) < target[idx][~up]
        return out

    everything = np.arange(uu.size)
    lo = np.zeros(uu.size)
    start_below = below(lo, everything)
    hi = lo.copy()
    step = np.where(start_below, 1.0, -1.0)
    pending = everything.copy()
    for _ in range(_BRACKET_STEPS):
        if pending.size == 0:
            break
        trial = np.clip(hi[pending] + step[pending], -_LOG_T_LIMIT, _LOG_T_LIMIT)
        still = below(trial, pending) == start_below[pending]
        hi[pending] = trial
        lo[pending[still]] = trial[still]
        step[pending] *= 2.0
        pending = pending[still]
    if pending.size:
        raise DomainError("could not bracket the quantile; level too close to 0 or 1")

    a = np.minimum(lo, hi)  # F(e^a) < u <= F(e^b)
    b = np.maximum(lo, hi)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (a + b)
        active = (mid > a) & (mid < b)
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        go_up = below(mid[idx], idx)
        a[idx[go_up]] = mid[idx[go_up]]
        b[idx[~go_up]] = mid[idx[~go_up]]
    return _out(np.exp(b), scalar)


def uniforms(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on the open interval ``(0, 1)``."""
    u = rng.random(size)
    u[u == 0.0] = 2.0**-54
    return u


@dataclass(frozen=True)
class SampleBatch:
    """Draws of the parallel-system lifetime ``max_i X_i``."""

    values: np.ndarray
    seed: int
    model: str
    streams: int = 1

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or not np.all(values > 0):
            raise DomainError("sample values must be a 1-d array of positive numbers")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def to_csv(self) -> str:
        """Single-column CSV preceded by a ``#`` comment with model and seed."""
        buf = io.StringIO()
        buf.write(
            f"# model={self.model} seed={self.seed} streams={self.streams} "
            f"count={self.values.size}\n"
        )
        buf.write("value\n")
        for v in self.values:
            buf.write(f"{float(v)!r}\n")
        return buf.getvalue()

    def summary(self) -> dict:
        v = self.values
        qs = np.quantile(v, [0.05, 0.25, 0.5, 0.75, 0.95])
        return {
            "count": int(v.size),
            "mean": float(v.mean()),
            "min": float(v.min()),
            "max": float(v.max()),
            "quantiles": {
                key: float(q) for key, q in zip(("0.05", "0.25", "0.5", "0.75", "0.95"), qs)
            },
        }


def _stream_sizes(count: int, streams: int) -> list[int]:
    base, extra = divmod(count, streams)
    return [base + (i < extra) for i in range(streams)]


def _draw(model, rng: np.random.Generator, count: int) -> np.ndarray:
    comps = model.components
    u = uniforms(rng, (count, len(comps)))
    cols = [quantile(b, u[:, i]) / lam for i, (b, lam) in enumerate(comps)]
    return np.max(np.column_stack(cols), axis=1)


def sample_max(model: AnyModel, count: int, seed: int, streams: int = 1) -> SampleBatch:
    """Sample ``count`` parallel-system lifetimes.

    Each draw is ``max_i Q_i(u_i) / lambda_i`` with ``Q_i`` the baseline
    quantile function and independent uniforms ``u_i``, taken in the
    component order of ``model``.
    """
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    if int(streams) != streams or streams < 1:
        raise DomainError(f"streams must be a positive integer, got {streams!r}")
    seed = _check_seed(seed)
    sm = as_scale_model(model)
    children = np.random.SeedSequence(seed).spawn(int(streams))
    parts = [
        _draw(sm, np.random.default_rng(child), size)
        for child, size in zip(children, _stream_sizes(int(count), int(streams)))
        if size
    ]
    return SampleBatch(np.concatenate(parts), seed, sm.describe(), int(streams))


def ks_distance(values, cdf) -> float:
    """Sup distance between the empirical CDF of ``values`` and ``cdf``."""
    return float(stats.kstest(np.asarray(values, dtype=float), cdf).statistic)


def model_ks_distance(batch: SampleBatch, model: AnyModel) -> float:
    """:func:`ks_distance` against the analytic ``max_cdf`` of ``model``."""
    return ks_distance(batch.values, lambda t: max_cdf(model, t))


@dataclass(frozen=True)
class StReport:
    """Empirical check of ``X <=st Y``, i.e. ``F_X >= F_Y`` everywhere."""

    count: int
    seed: int
    levels: int
    max_violation: float
    max_excess: float
    violated: bool
    at_t: float
    band_sigmas: float = 4.0

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "levels": self.levels,
            "max_violation": self.max_violation,
            "max_excess": self.max_excess,
            "violated": self.violated,
            "at_t": self.at_t,
            "band_sigmas": self.band_sigmas,
        }


def _ecdf(sorted_values: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.searchsorted(sorted_values, t, side="right") / sorted_values.size


def mc_check_st(
    model_x: AnyModel,
    model_y: AnyModel,
    count: int,
    seed: int,
    levels: int = 100,
    sigmas: float = 4.0,
) -> StReport:
    """Compare empirical CDFs of sampled maxima at pooled quantile levels.

    The evaluation points are the pooled-sample quantiles at ``levels``
    evenly spaced probabilities in ``(0, 1)``.  At each point the signed
    violation ``F_Y - F_X`` is set against a ``sigmas``-standard-error
    binomial band; ``violated`` is true when any point exceeds its band.
    """
    seed = _check_seed(seed)
    sx, sy = np.random.SeedSequence(seed).spawn(2)
    seed_x = int(sx.generate_state(2, np.uint64)[0])
    seed_y = int(sy.generate_state(2, np.uint64)[0])
    xs = np.sort(sample_max(model_x, count, seed_x).values)
    ys = np.sort(sample_max(model_y, count, seed_y).values)

    probs = np.arange(1, levels + 1) / (levels + 1)
    ts = np.quantile(np.concatenate([xs, ys]), probs)
    fx, fy = _ecdf(xs, ts), _ecdf(ys, ts)
    pooled = np.clip(0.5 * (fx + fy), 1.0 / count, 1.0 - 1.0 / count)
    band = sigmas * np.sqrt(2.0 * pooled * (1.0 - pooled) / count)
    diff = fy - fx
    excess = diff - band
    k = int(np.argmax(diff))
    return StReport(
        count=int(count),
        seed=seed,
        levels=levels,
        max_violation=float(diff[k]),
        max_excess=float(excess.max()),
        violated=bool(np.any(excess > 0)),
        at_t=float(ts[k]),
        band_sigmas=sigmas,
    )
