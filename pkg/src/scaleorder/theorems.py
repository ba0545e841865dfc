"""Map verified hypotheses to ordering conclusions, then validate each one.

Theorem ids and what they conclude (``X`` built from ``lambda``, ``Y`` from
``theta``, one shared baseline unless stated):

``thm1``
    ``t^2 r'`` increasing and ``lambda <=m theta``  =>  ``X <=rh Y``.
``thm2``
    ``t r`` decreasing, ``t^2 r'`` increasing, ``lambda <=w theta``  =>  ``X <=rh Y``.
``thm3`` / ``thm6``
    ``t r`` decreasing, ``t r'/r`` decreasing, outlier structure
    ``(lambda1 x p, lam x q)`` vs ``(lambda1* x p, lam x q)`` with
    ``lambda1* = min`` and weak supermajorization  =>  ``r_Y / r_X``
    increasing (``thm3`` is the ``n = 2`` case).
``thm4`` / ``thm7``
    the above plus ``t^2 r'`` increasing  =>  ``X <=lr Y``.
``corollary``
    ``n = 2``, ``Y = (lam, lam)`` with ``lam <= min(lambda1, lambda2)``
    (hence ``lam <= (lambda1 + lambda2)/2``), all three conditions  =>  ``X <=lr Y``.
``thm8``
    two baselines, ``p`` components ``F`` at ``lambda1`` / ``lambda1*`` and
    ``q`` components ``G`` at ``lam``; ``t r_F`` decreasing, ``t r_F'/r_F``
    decreasing, ``r_F / r_G`` increasing, ``lambda1* = min``  =>  ``X <=lr Y``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .baseline import Baseline
from .errors import TheoremContradiction
from .majorization import relation
from .orders import (
    DEFAULT_TOL,
    ConditionReport,
    Grid,
    MonotoneVerdict,
    OrderVerdict,
    check_lr,
    check_rf_over_rg_increasing,
    check_rh,
    check_rh_ratio_increasing,
    verify_conditions,
)
from .scale_model import AnyModel, ScaleModel, as_scale_model

__all__ = ["Conclusion", "applicable_theorems", "condition_grid", "outlier_split"]

_REL = 1e-12


@dataclass(frozen=True)
class Conclusion:
    theorem: str
    order: str  # "rh", "lr" or "rh_ratio"
    statement: str
    verdict: OrderVerdict | MonotoneVerdict

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "order": self.order,
            "statement": self.statement,
            "validated": self.verdict.outcome,
            "verdict": self.verdict.to_dict(),
        }


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _REL * max(abs(a), abs(b))


def _le(a: float, b: float) -> bool:
    return a <= b or _close(a, b)


def condition_grid(x: ScaleModel, y: ScaleModel, grid: Grid) -> Grid:
    """Baseline-scale grid covering every argument ``lambda_i t`` the models touch."""
    lams = x.lambdas + y.lambdas
    return Grid(min(lams) * grid.t_min, max(lams) * grid.t_max, grid.points, grid.spacing)


def outlier_split(lam, theta) -> tuple[int, float, int, float, float] | None:
    """Find ``(p, lambda1, q, lam, lambda1*)`` with ``lambda = (lambda1 x p, lam x q)``
    and ``theta = (lambda1* x p, lam x q)``, preferring ``lambda1* = min``.

    Returns ``None`` when no such decomposition exists.
    """
    n = len(lam)
    if n != len(theta) or n < 2:
        return None
    cx, cy = Counter(lam), Counter(theta)
    found = []
    for common in set(cx) | set(cy):
        for q in range(1, n):
            if cx[common] < q or cy[common] < q:
                continue
            rest_x = list((cx - Counter({common: q})).elements())
            rest_y = list((cy - Counter({common: q})).elements())
            if len(set(rest_x)) == 1 and len(set(rest_y)) == 1:
                found.append((n - q, rest_x[0], q, common, rest_y[0]))
    if not found:
        return None
    found.sort(key=lambda s: (not _le(s[4], min(s[1], s[3])), s[2], s[3]))
    return found[0]


def _two_baseline_split(x: ScaleModel, y: ScaleModel):
    if x.n != y.n:
        return None
    kinds = set(x.baselines) | set(y.baselines)
    if len(kinds) != 2:
        return None
    for f, g in (tuple(kinds), tuple(kinds)[::-1]):
        fx = [v for b, v in x.components if b == f]
        gx = [v for b, v in x.components if b == g]
        fy = [v for b, v in y.components if b == f]
        gy = [v for b, v in y.components if b == g]
        if not (fx and gx and len(fx) == len(fy) and len(gx) == len(gy)):
            continue
        if len(set(fx)) == 1 and len(set(fy)) == 1 and len(set(gx)) == 1 and set(gx) == set(gy):
            lam1, lam1s, lam = fx[0], fy[0], gx[0]
            if _le(lam1s, min(lam, lam1)):
                return f, g, len(fx), lam1, len(gx), lam, lam1s
    return None


def applicable_theorems(
    model_x: AnyModel,
    model_y: AnyModel,
    report: ConditionReport | Mapping[Baseline, ConditionReport] | None = None,
    grid: Grid | None = None,
    tol: float = DEFAULT_TOL,
) -> list[Conclusion]:
    """Emit every theorem whose hypotheses hold for ``(X, Y)`` and validate it.

    Baseline-shape hypotheses come from ``report`` (computed on a grid that
    spans all ``lambda_i t`` when not given).  Each emitted conclusion is
    checked on ``grid``; a refuted conclusion raises
    :class:`~scaleorder.errors.TheoremContradiction`.
    """
    mx, my = as_scale_model(model_x), as_scale_model(model_y)
    if mx.n != my.n:
        return []
    grid = grid or Grid.for_models(mx, my)
    cgrid = condition_grid(mx, my, grid)

    def report_for(b: Baseline) -> ConditionReport:
        if isinstance(report, ConditionReport):
            return report
        if report is not None and b in report:
            return report[b]
        return verify_conditions(b, cgrid, tol)

    pending: list[tuple[str, str, str]] = []
    baseline = mx.common_baseline
    if baseline is not None and baseline == my.common_baseline:
        psi, chi, eta = report_for(baseline).flags
        lam, theta = mx.lambdas, my.lambdas
        rel = relation(lam, theta)
        if chi and rel.majorized:
            pending.append(("thm1", "rh", "lambda <=m theta => X <=rh Y"))
        if psi and chi and rel.weakly_supermajorized:
            pending.append(("thm2", "rh", "lambda <=w theta => X <=rh Y"))
        split = outlier_split(lam, theta)
        if split is not None and psi and eta and rel.weakly_supermajorized:
            p, lam1, q, common, lam1s = split
            if _le(lam1s, min(common, lam1)):
                small = mx.n == 2
                desc = f"p={p}, lambda1={lam1!r}, q={q}, lambda={common!r}, lambda1*={lam1s!r}"
                pending.append(
                    ("thm3" if small else "thm6", "rh_ratio", f"{desc}: r_Y/r_X increasing")
                )
                if chi:
                    pending.append(("thm4" if small else "thm7", "lr", f"{desc}: X <=lr Y"))
        if mx.n == 2 and psi and eta and chi and _close(theta[0], theta[1]):
            common = theta[0]
            if _le(common, min(lam)) and _le(common, sum(lam) / 2):
                pending.append(
                    ("corollary", "lr", f"theta=({common!r}, {common!r}) below min(lambda): X <=lr Y")
                )
    else:
        split = _two_baseline_split(mx, my)
        if split is not None:
            f, g, p, lam1, q, lam, lam1s = split
            psi, _, eta = report_for(f).flags
            if psi and eta and check_rf_over_rg_increasing(f, g, cgrid, tol).holds:
                pending.append(
                    (
                        "thm8", "lr",
                        f"F={f.spec()} x {p} at {lam1!r} -> {lam1s!r}, "
                        f"G={g.spec()} x {q} at {lam!r}: X <=lr Y",
                    )
                )

    checks = {"rh": check_rh, "lr": check_lr, "rh_ratio": check_rh_ratio_increasing}
    conclusions = []
    for theorem, order, statement in pending:
        verdict = checks[order](mx, my, grid, tol)
        conclusion = Conclusion(theorem, order, statement, verdict)
        if verdict.fails:
            raise TheoremContradiction(conclusion)
        conclusions.append(conclusion)
    return conclusions
