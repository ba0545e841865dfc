"""Grid certification of stochastic orders between parallel systems.

Every "increasing in t" or "for all t" statement is checked on a finite grid;
a ``holds`` outcome therefore means *no violation on the grid*, never a proof.

Comparisons run in log space: reverse hazards, CDF ratios and density ratios
are monotone iff their logarithms are, and the logs stay finite in tails
where the raw quantities under- or overflow.  A step counts as a violation
only when it exceeds ``tol * max(|v1|, |v2|, 1)``; equality within that
margin never counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Literal

import numpy as np

from .baseline import Baseline, ConditionFunctions, GeneralizedGamma
from .errors import GridMismatchError
from .scale_model import AnyModel, ScaleModel, as_scale_model

__all__ = [
    "DEFAULT_TOL",
    "STANDARD_GRID",
    "ConditionReport",
    "Grid",
    "MonotoneVerdict",
    "OrderVerdict",
    "Witness",
    "check_lr",
    "check_monotone",
    "check_rf_over_rg_increasing",
    "check_rh",
    "check_rh_ratio_increasing",
    "check_st",
    "lr_from_rh",
    "theorems_for_conditions",
    "verify_conditions",
]

DEFAULT_TOL = 1e-9
# Grid points where both densities fall below this are skipped by the direct
# likelihood-ratio check.
DENSITY_FLOOR = 1e-290
_LOG_DENSITY_FLOOR = math.log(DENSITY_FLOOR)
_LOG_HALF = math.log(0.5)

Outcome = Literal["holds", "fails", "inconclusive"]
Direction = Literal["increasing", "decreasing"]


@dataclass(frozen=True)
class Grid:
    t_min: float
    t_max: float
    points: int = 2000
    spacing: Literal["log", "linear"] = "log"

    def __post_init__(self):
        t_min, t_max = float(self.t_min), float(self.t_max)
        if not (math.isfinite(t_min) and math.isfinite(t_max) and 0 < t_min < t_max):
            raise ValueError(f"need 0 < t_min < t_max, got {t_min!r}, {t_max!r}")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points!r}")
        spacing = {"lin": "linear"}.get(self.spacing, self.spacing)
        if spacing not in ("log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        object.__setattr__(self, "t_min", t_min)
        object.__setattr__(self, "t_max", t_max)
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "spacing", spacing)

    @cached_property
    def nodes(self) -> np.ndarray:
        if self.spacing == "log":
            ts = np.geomspace(self.t_min, self.t_max, self.points)
        else:
            ts = np.linspace(self.t_min, self.t_max, self.points)
        ts.flags.writeable = False
        return ts

    @classmethod
    def for_models(cls, *models: AnyModel, points: int = 2000) -> "Grid":
        """Default grid ``[1e-3 / max lambda, 50 / min lambda]`` over all models."""
        lams = [v for m in models for v in as_scale_model(m).lambdas]
        return cls(1e-3 / max(lams), 50.0 / min(lams), points)

    def scaled(self, factor: float) -> "Grid":
        return Grid(self.t_min * factor, self.t_max * factor, self.points, self.spacing)

    def to_dict(self) -> dict:
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "points": self.points,
            "spacing": self.spacing,
        }


STANDARD_GRID = Grid(1e-3, 50.0)


@dataclass(frozen=True)
class Witness:
    t1: float
    t2: float
    v1: float
    v2: float

    def to_dict(self) -> dict:
        return {k: _json_float(getattr(self, k)) for k in ("t1", "t2", "v1", "v2")}


def _json_float(v: float):
    v = float(v)
    return v if math.isfinite(v) else str(v)


@dataclass(frozen=True)
class MonotoneVerdict:
    outcome: Outcome
    direction: Direction
    tolerance: float
    grid: Grid
    quantity: str = ""
    witness: Witness | None = None
    reason: str | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> bool:
        return self.outcome == "holds"

    @property
    def fails(self) -> bool:
        return self.outcome == "fails"

    def to_dict(self) -> dict:
        out = {
            "outcome": self.outcome,
            "direction": self.direction,
            "quantity": self.quantity,
            "tolerance": self.tolerance,
            "grid": self.grid.to_dict(),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.reason:
            out["reason"] = self.reason
        if self.diagnostics:
            out["diagnostics"] = {k: _jsonable(v) for k, v in self.diagnostics.items()}
        return out


@dataclass(frozen=True)
class OrderVerdict:
    order: Literal["st", "rh", "lr"]
    outcome: Outcome
    tolerance: float
    grid: Grid
    quantity: str = ""
    witness: Witness | None = None
    reason: str | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)
    parts: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> bool:
        return self.outcome == "holds"

    @property
    def fails(self) -> bool:
        return self.outcome == "fails"

    def to_dict(self) -> dict:
        out = {
            "order": self.order,
            "outcome": self.outcome,
            "quantity": self.quantity,
            "tolerance": self.tolerance,
            "grid": self.grid.to_dict(),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.reason:
            out["reason"] = self.reason
        if self.diagnostics:
            out["diagnostics"] = {k: _jsonable(v) for k, v in self.diagnostics.items()}
        if self.parts:
            out["parts"] = {k: v.to_dict() for k, v in self.parts.items()}
        return out


def _jsonable(v):
    if isinstance(v, (float, np.floating)):
        return _json_float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


# -- primitives --------------------------------------------------------------


def _monotone(
    ts: np.ndarray,
    values: np.ndarray,
    direction: Direction,
    tol: float,
    grid: Grid,
    quantity: str,
) -> MonotoneVerdict:
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = int(np.argmax(bad))
        return MonotoneVerdict(
            "inconclusive", direction, tol, grid, quantity,
            reason=f"non-finite {quantity or 'value'} ({values[k]}) at t={ts[k]!r}",
        )
    if values.size < 2:
        return MonotoneVerdict(
            "inconclusive", direction, tol, grid, quantity,
            reason="fewer than two usable grid points",
        )
    v1, v2 = values[:-1], values[1:]
    scale = tol * np.maximum(np.maximum(np.abs(v1), np.abs(v2)), 1.0)
    step = v2 - v1 if direction == "increasing" else v1 - v2
    rel = step / scale
    worst = int(np.argmin(rel))
    diagnostics = {"worst_step": float(step[worst]), "worst_step_t": float(ts[worst])}
    violated = rel < -1.0
    if np.any(violated):
        k = int(np.argmax(violated))
        witness = Witness(float(ts[k]), float(ts[k + 1]), float(v1[k]), float(v2[k]))
        return MonotoneVerdict(
            "fails", direction, tol, grid, quantity, witness, diagnostics=diagnostics
        )
    return MonotoneVerdict("holds", direction, tol, grid, quantity, diagnostics=diagnostics)


def check_monotone(
    g: Callable,
    grid: Grid = STANDARD_GRID,
    direction: Direction = "increasing",
    tol: float = DEFAULT_TOL,
    quantity: str = "",
) -> MonotoneVerdict:
    """Certify that ``g`` is monotone on ``grid``.

    ``g`` is first called on the whole node array; if that fails or returns
    the wrong shape it is called point by point.  Evaluation errors give an
    ``inconclusive`` verdict carrying the error text.
    """
    if direction not in ("increasing", "decreasing"):
        raise ValueError(f"direction must be 'increasing' or 'decreasing', got {direction!r}")
    ts = grid.nodes
    try:
        try:
            values = np.asarray(g(ts), dtype=float)
            if values.shape != ts.shape:
                raise ValueError
        except Exception:
            values = np.array([float(g(float(t))) for t in ts])
    except Exception as exc:  # noqa: BLE001 - any evaluation failure is reported
        return MonotoneVerdict(
            "inconclusive", direction, tol, grid, quantity,
            reason=f"evaluation failed: {type(exc).__name__}: {exc}",
        )
    return _monotone(ts, values, direction, tol, grid, quantity)


@dataclass(frozen=True)
class _Profile:
    log_cdf: np.ndarray
    log_sf: np.ndarray
    log_rh: np.ndarray
    log_pdf: np.ndarray


@lru_cache(maxsize=256)
def _profile(model: ScaleModel, grid: Grid) -> _Profile:
    from scipy.special import logsumexp

    log_cdf_c, _, log_terms = model.component_terms(grid.nodes)
    log_cdf = log_cdf_c.sum(axis=0)
    log_rh = logsumexp(log_terms, axis=0)
    with np.errstate(divide="ignore"):
        log_sf = np.log(-np.expm1(log_cdf))
    arrays = [log_cdf, log_sf, log_rh, log_cdf + log_rh]
    for a in arrays:
        a.flags.writeable = False
    return _Profile(*arrays)


def _pointwise(
    order, ts, margin, scale, grid, tol, quantity, v1, v2, diagnostics
) -> OrderVerdict:
    violated = margin < -scale
    if np.any(violated):
        k = int(np.argmax(violated))
        t = float(ts[k])
        return OrderVerdict(
            order, "fails", tol, grid, quantity,
            Witness(t, t, float(v1[k]), float(v2[k])),
            diagnostics=diagnostics,
        )
    return OrderVerdict(order, "holds", tol, grid, quantity, diagnostics=diagnostics)


def _models(x: AnyModel, y: AnyModel, grid: Grid | None):
    mx, my = as_scale_model(x), as_scale_model(y)
    grid = grid or Grid.for_models(mx, my)
    return mx, my, grid


def check_st(x: AnyModel, y: AnyModel, grid: Grid | None = None, tol: float = DEFAULT_TOL) -> OrderVerdict:
    """``X <=st Y`` for maxima: ``F_X(t) >= F_Y(t)`` at every grid point.

    The lower tail is compared through ``log F`` and the upper tail through
    ``log(1 - F)`` so that neither tail is swamped by rounding.
    """
    mx, my, grid = _models(x, y, grid)
    px, py = _profile(mx, grid), _profile(my, grid)
    ts = grid.nodes
    lower = np.maximum(px.log_cdf, py.log_cdf) <= _LOG_HALF
    with np.errstate(invalid="ignore"):
        upper_margin = py.log_sf - px.log_sf
    upper_margin = np.where(np.isneginf(px.log_sf) & np.isneginf(py.log_sf), 0.0, upper_margin)
    margin = np.where(lower, px.log_cdf - py.log_cdf, upper_margin)
    mag = np.where(
        lower,
        np.maximum(np.abs(px.log_cdf), np.abs(py.log_cdf)),
        np.fmax(np.abs(px.log_sf), np.abs(py.log_sf)),
    )
    mag = np.where(np.isfinite(mag), mag, 0.0)
    scale = tol * np.maximum(mag, 1.0)
    fx, fy = np.exp(px.log_cdf), np.exp(py.log_cdf)
    gap = fx - fy
    k = int(np.argmin(gap))
    diagnostics = {"min_cdf_gap": float(gap[k]), "argmin_t": float(ts[k])}
    return _pointwise("st", ts, margin, scale, grid, tol, "F_X - F_Y", fx, fy, diagnostics)


def check_rh(x: AnyModel, y: AnyModel, grid: Grid | None = None, tol: float = DEFAULT_TOL) -> OrderVerdict:
    """``X <=rh Y``: ``r_X(t) <= r_Y(t)`` on the grid.

    Cross-checked by requiring ``F_Y / F_X`` to be increasing; a pointwise
    pass with a failed cross-check is reported as inconclusive.
    """
    mx, my, grid = _models(x, y, grid)
    px, py = _profile(mx, grid), _profile(my, grid)
    ts = grid.nodes
    margin = py.log_rh - px.log_rh
    scale = tol * np.maximum(np.maximum(np.abs(px.log_rh), np.abs(py.log_rh)), 1.0)
    k = int(np.argmin(margin))
    diagnostics = {
        "min_log_gap": float(margin[k]),
        "argmin_t": float(ts[k]),
        "max_relative_gap": float(np.max(margin / scale)),
    }
    verdict = _pointwise(
        "rh", ts, margin, scale, grid, tol, "log r_Y - log r_X",
        px.log_rh, py.log_rh, diagnostics,
    )
    cross = _monotone(
        ts, py.log_cdf - px.log_cdf, "increasing", tol, grid, "log F_Y - log F_X"
    )
    parts = {"cdf_ratio": cross}
    if verdict.holds and not cross.holds:
        return OrderVerdict(
            "rh", "inconclusive", tol, grid, verdict.quantity, cross.witness,
            reason="reverse hazards ordered pointwise but F_Y/F_X not increasing on the grid",
            diagnostics=diagnostics, parts=parts,
        )
    return OrderVerdict(
        "rh", verdict.outcome, tol, grid, verdict.quantity, verdict.witness,
        diagnostics=diagnostics, parts=parts,
    )


def check_rh_ratio_increasing(
    x: AnyModel, y: AnyModel, grid: Grid | None = None, tol: float = DEFAULT_TOL
) -> MonotoneVerdict:
    """Monotone verdict for ``t -> r_Y(t) / r_X(t)`` (checked as a log ratio)."""
    mx, my, grid = _models(x, y, grid)
    px, py = _profile(mx, grid), _profile(my, grid)
    return _monotone(
        grid.nodes, py.log_rh - px.log_rh, "increasing", tol, grid, "log r_Y - log r_X"
    )


def lr_from_rh(rh: OrderVerdict, ratio: MonotoneVerdict) -> OrderVerdict:
    """``X <=rh Y`` and ``r_Y / r_X`` increasing together give ``X <=lr Y``.

    The implication is one-directional, so a missing hypothesis yields
    ``inconclusive`` (with the failing hypothesis' witness), never ``fails``.
    """
    if rh.grid != ratio.grid:
        raise GridMismatchError("rh verdict and ratio verdict were computed on different grids")
    parts = {"rh": rh, "rh_ratio": ratio}
    if rh.holds and ratio.holds:
        return OrderVerdict("lr", "holds", rh.tolerance, rh.grid, "composition", parts=parts)
    if not ratio.holds:
        witness, reason = ratio.witness, f"reverse hazard ratio check: {ratio.outcome}"
    else:
        witness, reason = rh.witness, f"rh check: {rh.outcome}"
    return OrderVerdict(
        "lr", "inconclusive", rh.tolerance, rh.grid, "composition", witness, reason, parts=parts
    )


def check_lr(x: AnyModel, y: AnyModel, grid: Grid | None = None, tol: float = DEFAULT_TOL) -> OrderVerdict:
    """``X <=lr Y``: ``f_Y / f_X`` increasing on the grid.

    The direct density-ratio check decides the outcome; the composed verdict
    from :func:`lr_from_rh` is attached under ``parts['composed']`` and only
    decides when the direct check is inconclusive.
    """
    mx, my, grid = _models(x, y, grid)
    px, py = _profile(mx, grid), _profile(my, grid)
    ts = grid.nodes
    keep = ~((px.log_pdf < _LOG_DENSITY_FLOOR) & (py.log_pdf < _LOG_DENSITY_FLOOR))
    direct = _monotone(
        ts[keep], (py.log_pdf - px.log_pdf)[keep], "increasing", tol, grid, "log f_Y - log f_X"
    )
    dropped = int(np.size(keep) - np.count_nonzero(keep))
    if dropped:
        direct.diagnostics["truncated_points"] = dropped
        direct.diagnostics["note"] = f"{dropped} grid points skipped: both densities below {DENSITY_FLOOR}"
    composed = lr_from_rh(check_rh(mx, my, grid, tol), check_rh_ratio_increasing(mx, my, grid, tol))
    parts = {"direct": direct, "composed": composed}
    diagnostics = {"agree": direct.outcome == composed.outcome}
    if direct.outcome == "inconclusive" and composed.holds:
        return OrderVerdict(
            "lr", "holds", tol, grid, "composition", diagnostics=diagnostics, parts=parts
        )
    return OrderVerdict(
        "lr", direct.outcome, tol, grid, direct.quantity, direct.witness, direct.reason,
        diagnostics=diagnostics, parts=parts,
    )


# -- baseline preconditions --------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    """Grid verdicts for the three analytic shape conditions of one baseline.

    ``psi_decreasing``: ``t r(t)`` decreasing.  ``chi_increasing``:
    ``t**2 r'(t)`` increasing.  ``eta_increasing``: ``-t r'(t)/r(t)``
    increasing, i.e. ``t r'(t)/r(t)`` decreasing.
    """

    baseline: str
    psi_decreasing: MonotoneVerdict
    chi_increasing: MonotoneVerdict
    eta_increasing: MonotoneVerdict
    applicable_theorems: tuple[str, ...]
    expected: dict = field(default_factory=dict, compare=False)
    notes: tuple[str, ...] = ()

    @property
    def flags(self) -> tuple[bool, bool, bool]:
        return self.psi_decreasing.holds, self.chi_increasing.holds, self.eta_increasing.holds

    @property
    def contradictions(self) -> tuple[str, ...]:
        """Conditions guaranteed analytically that nevertheless failed on the grid."""
        return tuple(
            name
            for name in ("psi_decreasing", "chi_increasing", "eta_increasing")
            if self.expected.get(name) is True and getattr(self, name).fails
        )

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline,
            "psi_decreasing": self.psi_decreasing.to_dict(),
            "chi_increasing": self.chi_increasing.to_dict(),
            "eta_increasing": self.eta_increasing.to_dict(),
            "applicable_theorems": list(self.applicable_theorems),
            "expected": dict(self.expected),
            "notes": list(self.notes),
            "contradictions": list(self.contradictions),
        }


def theorems_for_conditions(psi: bool, chi: bool, eta: bool) -> tuple[str, ...]:
    """Theorem ids whose baseline-shape hypotheses are met.

    Scale-vector hypotheses (majorization, outlier structure, minimality of
    the changed scale) are checked separately by the theorem engine.
    """
    out = []
    if chi:
        out.append("thm1")
    if psi and chi:
        out.append("thm2")
    if psi and eta:
        out += ["thm3", "thm6", "thm8"]
    if psi and eta and chi:
        out += ["thm4", "thm7", "corollary"]
    return tuple(sorted(out))


def verify_conditions(
    baseline: Baseline, grid: Grid = STANDARD_GRID, tol: float = DEFAULT_TOL
) -> ConditionReport:
    psi, eta, chi = ConditionFunctions(baseline).values(grid.nodes)
    ts = grid.nodes
    psi_v = _monotone(ts, psi, "decreasing", tol, grid, "t r(t)")
    chi_v = _monotone(ts, chi, "increasing", tol, grid, "t^2 r'(t)")
    eta_v = _monotone(ts, eta, "increasing", tol, grid, "-t r'(t)/r(t)")

    expected: dict = {}
    notes: list[str] = []
    if isinstance(baseline, GeneralizedGamma):
        a, b = baseline.alpha, baseline.beta
        expected["psi_decreasing"] = True
        expected["chi_increasing"] = True if b <= 1 else None
        expected["eta_increasing"] = True if a <= b else None
        if b > 1:
            notes.append(
                "beta > 1: outside the region where t^2 r'(t) is known to be "
                "increasing; the chi verdict is empirical only"
            )
        if a > b:
            notes.append(
                "alpha > beta: no analytic guarantee that t r'(t)/r(t) is "
                "decreasing; the eta verdict is empirical only"
            )
        if a <= b <= 1:
            notes.append("alpha <= beta <= 1: all three conditions hold analytically")

    return ConditionReport(
        baseline=baseline.spec(),
        psi_decreasing=psi_v,
        chi_increasing=chi_v,
        eta_increasing=eta_v,
        applicable_theorems=theorems_for_conditions(psi_v.holds, chi_v.holds, eta_v.holds),
        expected=expected,
        notes=tuple(notes),
    )


def check_rf_over_rg_increasing(
    baseline_f: Baseline, baseline_g: Baseline, grid: Grid = STANDARD_GRID, tol: float = DEFAULT_TOL
) -> MonotoneVerdict:
    """Monotone verdict for ``r_F(t) / r_G(t)`` (checked as a log ratio)."""
    ts = grid.nodes
    values = baseline_f._log_rh(ts) - baseline_g._log_rh(ts)
    return _monotone(ts, values, "increasing", tol, grid, "log r_F - log r_G")
