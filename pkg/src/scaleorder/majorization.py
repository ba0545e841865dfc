"""Majorization and weak supermajorization of positive vectors.

Both preorders compare partial sums of the *increasing* arrangement.
``x <=m y`` (x is majorized by y) holds when every partial sum of the
smallest ``j`` entries of ``x`` is at least that of ``y`` for ``j < n`` and
the totals agree; dropping the equal-total requirement (so the inequality
must also hold at ``j = n``) gives weak supermajorization ``x <=w y``.
In both cases the "smaller" vector is the less spread-out one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "MajorizationRelation",
    "ProbeResult",
    "majorizes",
    "relation",
    "robin_hood",
    "schur_convexity_probe",
    "weakly_supermajorizes",
]


@dataclass(frozen=True)
class MajorizationRelation:
    majorized: bool
    weakly_supermajorized: bool
    prefix_sums_x: tuple[float, ...]
    prefix_sums_y: tuple[float, ...]
    total_x: float
    total_y: float

    def to_dict(self) -> dict:
        return {
            "majorized": self.majorized,
            "weakly_supermajorized": self.weakly_supermajorized,
            "prefix_sums_x": list(self.prefix_sums_x),
            "prefix_sums_y": list(self.prefix_sums_y),
            "total_x": self.total_x,
            "total_y": self.total_y,
            "direction": (
                "x <=m y: increasing-order partial sums of x dominate those of y "
                "with equal totals; x <=w y: the same without the equal-total "
                "constraint (x is the less dispersed vector)"
            ),
        }


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    xa = np.sort(np.asarray(x, dtype=float).ravel())
    ya = np.sort(np.asarray(y, dtype=float).ravel())
    if xa.size != ya.size:
        raise ValueError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size == 0:
        raise ValueError("vectors must be non-empty")
    return xa, ya


def relation(x: Sequence[float], y: Sequence[float]) -> MajorizationRelation:
    xa, ya = _pair(x, y)
    n = xa.size
    px, py = np.cumsum(xa), np.cumsum(ya)
    tx, ty = float(px[-1]), float(py[-1])
    prefix_tol = 1e-12 * n * float(max(np.max(np.abs(xa)), np.max(np.abs(ya))))
    total_tol = max(1e-12 * max(abs(tx), 1.0), prefix_tol)

    dominated = px[:-1] >= py[:-1] - prefix_tol
    head_ok = bool(np.all(dominated))
    majorized = head_ok and bool(abs(tx - ty) <= total_tol)
    weak = head_ok and bool(tx >= ty - total_tol)
    return MajorizationRelation(
        majorized=majorized,
        weakly_supermajorized=weak,
        prefix_sums_x=tuple(float(v) for v in px),
        prefix_sums_y=tuple(float(v) for v in py),
        total_x=tx,
        total_y=ty,
    )


def majorizes(x: Sequence[float], y: Sequence[float]) -> bool:
    """True iff ``x <=m y``, i.e. ``x`` is majorized by ``y``."""
    return relation(x, y).majorized


def weakly_supermajorizes(x: Sequence[float], y: Sequence[float]) -> bool:
    """True iff ``x <=w y`` (weak supermajorization of ``x`` by ``y``)."""
    return relation(x, y).weakly_supermajorized


def robin_hood(y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Move a random amount from a larger to a smaller coordinate of ``y``.

    The result is majorized by ``y``.  Returns a copy of ``y`` when all
    coordinates are equal.
    """
    x = np.array(y, dtype=float)
    i, j = rng.choice(x.size, size=2, replace=False)
    if x[i] > x[j]:
        i, j = j, i
    gap = x[j] - x[i]
    if gap <= 0:
        return x
    delta = gap / 2 * (1.0 - rng.random())  # uniform on (0, gap/2]
    x[i] += delta
    x[j] -= delta
    return x


@dataclass(frozen=True)
class ProbeResult:
    consistent: bool
    trials: int
    witness: tuple[tuple[float, ...], tuple[float, ...], float, float] | None = None

    def to_dict(self) -> dict:
        out = {"consistent": self.consistent, "trials": self.trials, "witness": None}
        if self.witness is not None:
            x, y, fx, fy = self.witness
            out["witness"] = {"x": list(x), "y": list(y), "phi_x": fx, "phi_y": fy}
        return out


def schur_convexity_probe(
    phi: Callable[[np.ndarray], float],
    n: int,
    trials: int = 1000,
    seed: int = 0,
    *,
    low: float = 0.1,
    high: float = 5.0,
    atol: float = 1e-10,
) -> ProbeResult:
    """Randomized search for a violation of Schur-convexity of ``phi``.

    Each trial draws ``y`` uniformly from ``[low, high]**n``, forms ``x`` by
    one Robin-Hood transfer (so ``x <=m y``), and requires
    ``phi(x) <= phi(y) + atol``.  The first violating pair is returned.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        y = rng.uniform(low, high, size=n)
        x = robin_hood(y, rng)
        fx, fy = float(phi(x)), float(phi(y))
        if not fx <= fy + atol:
            return ProbeResult(False, trials, (tuple(x), tuple(y), fx, fy))
    return ProbeResult(True, trials)
