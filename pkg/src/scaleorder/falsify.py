"""Randomized search for counterexamples to the ordering theorems.

In *validate* mode every sampled instance satisfies the theorem's hypotheses
and the conclusion must hold on the grid; any failure is recorded as a
counterexample (which would mean a numerical bug or a tolerance problem).
In *explore* mode one hypothesis is deliberately dropped and the observed
verdicts are tallied without asserting anything.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .baseline import GeneralizedGamma
from .errors import TheoremContradiction
from .orders import DEFAULT_TOL, Grid, check_lr, check_rh
from .scale_model import ScaleModel, TwoBaselineModel
from .theorems import applicable_theorems

__all__ = [
    "DEFAULT_RANGES",
    "DROPPABLE",
    "FalsifyReport",
    "THEOREMS",
    "falsify",
    "random_majorized_pair",
    "random_weak_pair",
]

THEOREMS = ("thm1", "thm2", "thm4", "corollary", "thm7", "thm8", "gamma-wmaj")

# hypotheses that explore mode may drop, per theorem
DROPPABLE = {
    "thm1": ("region", "majorization"),
    "thm2": ("region", "majorization"),
    "thm4": ("region", "min"),
    "corollary": ("region", "min"),
    "thm7": ("region", "min"),
    "thm8": ("min", "ratio"),
    "gamma-wmaj": (),
}

DEFAULT_RANGES = {
    "beta": (0.05, 1.0),
    "alpha": (0.05, 2.0),
    "lambda": (0.2, 5.0),
    "n": (2, 6),
    "pq": (1, 5),
    "gamma_alpha": (0.05, 3.0),
}

_CONCLUSION_ORDER = {
    "thm1": "rh", "thm2": "rh", "gamma-wmaj": "rh",
    "thm4": "lr", "corollary": "lr", "thm7": "lr", "thm8": "lr",
}


def _scales(rng: np.random.Generator, lo: float, hi: float, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))


def random_majorized_pair(rng: np.random.Generator, n: int, lo: float = 0.2, hi: float = 5.0):
    """``(lam, theta)`` with ``lam <=m theta``: ``theta`` spreads two entries of ``lam``."""
    lam = _scales(rng, lo, hi, n)
    theta = lam.copy()
    i, j = rng.choice(n, size=2, replace=False)
    if theta[i] > theta[j]:
        i, j = j, i
    delta = 0.9 * theta[i] * rng.random()
    theta[i] -= delta
    theta[j] += delta
    return lam, theta


def random_weak_pair(rng: np.random.Generator, n: int, lo: float = 0.2, hi: float = 5.0):
    """``(lam, theta)`` with ``lam <=w theta``: a majorized pair, then one
    sorted coordinate of ``theta`` lowered by a random factor in ``[0.3, 1)``."""
    lam, theta = random_majorized_pair(rng, n, lo, hi)
    theta = np.sort(theta)
    theta[rng.integers(n)] *= rng.uniform(0.3, 1.0)
    return lam, theta


@dataclass
class FalsifyReport:
    theorem: str
    mode: str
    trials: int
    seed: int
    dropped: str | None = None
    outcomes: Counter = field(default_factory=Counter)
    counterexamples: list = field(default_factory=list)
    not_emitted: int = 0
    examples: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.counterexamples)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "dropped": self.dropped,
            "outcomes": dict(sorted(self.outcomes.items())),
            "counterexample_found": self.found,
            "counterexamples": self.counterexamples,
            "not_emitted": self.not_emitted,
            "examples": self.examples,
        }


def _instance_dict(x: ScaleModel, y: ScaleModel) -> dict:
    return {
        "x": [[b.spec(), v] for b, v in x.components],
        "y": [[b.spec(), v] for b, v in y.components],
    }


def _sample(theorem: str, drop: str | None, rng: np.random.Generator, ranges: dict):
    """Draw one ``(X, Y, assert_conclusion)`` instance."""
    b_lo, b_hi = ranges["beta"]
    a_lo, a_hi = ranges["alpha"]
    l_lo, l_hi = ranges["lambda"]

    if theorem == "gamma-wmaj":
        alpha = rng.uniform(*ranges["gamma_alpha"])
        n = int(rng.integers(ranges["n"][0], ranges["n"][1] + 1))
        lam, theta = random_weak_pair(rng, n, l_lo, l_hi)
        base = GeneralizedGamma(1.0, alpha)
        return ScaleModel.single(base, lam), ScaleModel.single(base, theta), alpha <= 1.0

    if theorem in ("thm1", "thm2"):
        if drop == "region":
            beta = rng.uniform(1.0, 3.0)
        else:
            beta = rng.uniform(b_lo, b_hi)
        alpha = rng.uniform(a_lo, a_hi)
        n = int(rng.integers(ranges["n"][0], ranges["n"][1] + 1))
        if drop == "majorization":
            lam, theta = _scales(rng, l_lo, l_hi, n), _scales(rng, l_lo, l_hi, n)
        elif theorem == "thm1":
            lam, theta = random_majorized_pair(rng, n, l_lo, l_hi)
        else:
            lam, theta = random_weak_pair(rng, n, l_lo, l_hi)
        base = GeneralizedGamma(beta, alpha)
        return ScaleModel.single(base, lam), ScaleModel.single(base, theta), drop is None

    if theorem == "thm8":
        beta = rng.uniform(b_lo, b_hi)
        alpha_f = rng.uniform(a_lo, min(a_hi, beta))
        if drop == "ratio":
            alpha_g = rng.uniform(alpha_f, a_hi + alpha_f)
        else:
            alpha_g = rng.uniform(min(a_lo, alpha_f) / 2, alpha_f)
        f, g = GeneralizedGamma(beta, alpha_f), GeneralizedGamma(beta, alpha_g)
        p, q = (int(v) for v in rng.integers(ranges["pq"][0], ranges["pq"][1] + 1, size=2))
        lam1, lam = _scales(rng, l_lo, l_hi, 2)
        if drop == "min":
            lam1s = rng.uniform(1.05, 3.0) * min(lam1, lam)
        else:
            lam1s = rng.uniform(0.1, 1.0) * min(lam1, lam)
        x = TwoBaselineModel(f, g, p, lam1, q, lam).expand()
        y = TwoBaselineModel(f, g, p, lam1s, q, lam).expand()
        return x, y, drop is None

    # thm4, corollary, thm7: alpha <= beta <= 1
    if drop == "region":
        beta = rng.uniform(b_lo, b_hi)
        alpha = rng.uniform(beta, max(a_hi, beta) + 1.0)
    else:
        beta = rng.uniform(b_lo, b_hi)
        alpha = rng.uniform(min(a_lo, beta) / 2, min(a_hi, beta))
    base = GeneralizedGamma(beta, alpha)
    if theorem == "corollary":
        lam1, lam2 = _scales(rng, l_lo, l_hi, 2)
        if drop == "min":
            common = rng.uniform(1.05, 2.0) * min(lam1, lam2)
        else:
            common = rng.uniform(0.1, 1.0) * min(lam1, lam2)
        x = ScaleModel.single(base, (lam1, lam2))
        y = ScaleModel.single(base, (common, common))
        return x, y, drop is None
    if theorem == "thm4":
        p = q = 1
    else:
        p, q = (int(v) for v in rng.integers(ranges["pq"][0], ranges["pq"][1] + 1, size=2))
    lam1, lam = _scales(rng, l_lo, l_hi, 2)
    if drop == "min":
        lam1s = rng.uniform(1.05, 3.0) * min(lam1, lam)
    else:
        lam1s = rng.uniform(0.1, 1.0) * min(lam1, lam)
    x = ScaleModel.single(base, (lam1,) * p + (lam,) * q)
    y = ScaleModel.single(base, (lam1s,) * p + (lam,) * q)
    return x, y, drop is None


def falsify(
    theorem: str,
    trials: int = 1000,
    seed: int = 0,
    ranges: dict | None = None,
    drop: str | None = None,
    points: int = 2000,
    tol: float = DEFAULT_TOL,
    max_examples: int = 5,
) -> FalsifyReport:
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if drop is not None and drop not in DROPPABLE[theorem]:
        allowed = ", ".join(DROPPABLE[theorem]) or "none"
        raise ValueError(f"cannot drop {drop!r} for {theorem}; droppable: {allowed}")
    ranges = {**DEFAULT_RANGES, **(ranges or {})}
    rng = np.random.default_rng(seed)
    report = FalsifyReport(theorem, "explore" if drop else "validate", trials, seed, drop)
    # n = 2 outlier instances are reported under their two-component name
    expected = {"gamma-wmaj": {"thm2"}, "thm7": {"thm7", "thm4"}}.get(theorem, {theorem})
    check = check_rh if _CONCLUSION_ORDER[theorem] == "rh" else check_lr

    for _ in range(trials):
        x, y, asserted = _sample(theorem, drop, rng, ranges)
        grid = Grid.for_models(x, y, points=points)
        verdict = check(x, y, grid, tol)
        report.outcomes[verdict.outcome] += 1
        if not asserted:
            if verdict.fails and len(report.examples) < max_examples:
                report.examples.append({**_instance_dict(x, y), "verdict": verdict.to_dict()})
            continue
        try:
            emitted = {c.theorem for c in applicable_theorems(x, y, grid=grid, tol=tol)}
        except TheoremContradiction as exc:
            report.counterexamples.append(
                {**_instance_dict(x, y), "theorem": exc.conclusion.theorem,
                 "verdict": exc.conclusion.verdict.to_dict()}
            )
            continue
        if not expected & emitted:
            report.not_emitted += 1
        if verdict.fails:
            report.counterexamples.append({**_instance_dict(x, y), "verdict": verdict.to_dict()})
    return report
