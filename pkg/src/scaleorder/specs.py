"""Parsers for the textual baseline, vector, outlier and grid specifications.

Every parse error is a :class:`~scaleorder.errors.SpecError` carrying the
0-based character offset of the offending token.

Grammar::

    baseline := "exp" | "exponential"
              | "gg:beta=<x>,alpha=<x>"
              | "weibull:shape=<x>" | "gamma:shape=<x>"
    vector   := <x> ("," <x>)*
    outlier  := "p=<int>,lambda1=<x>,q=<int>,lambda=<x>"
    grid     := "<tmin>,<tmax>,<points>,log|lin"
"""

from __future__ import annotations

import math

from .baseline import GeneralizedGamma, make_special
from .errors import SpecError
from .orders import Grid

__all__ = [
    "format_vector",
    "parse_baseline",
    "parse_grid",
    "parse_outlier",
    "parse_vector",
]


def _fields(text: str, start: int = 0) -> list[tuple[str, int]]:
    """Split on commas, keeping each field's offset in ``text``."""
    out = []
    pos = start
    for piece in text[start:].split(","):
        out.append((piece, pos))
        pos += len(piece) + 1
    return out


def _number(token: str, text: str, pos: int, what: str) -> float:
    stripped = token.strip()
    offset = pos + (len(token) - len(token.lstrip()))
    if not stripped:
        raise SpecError(f"missing {what}", text, offset)
    try:
        value = float(stripped)
    except ValueError:
        raise SpecError(f"{what} is not a number: {stripped!r}", text, offset) from None
    if not math.isfinite(value):
        raise SpecError(f"{what} must be finite, got {stripped!r}", text, offset)
    return value


def _positive(token: str, text: str, pos: int, what: str) -> float:
    value = _number(token, text, pos, what)
    if value <= 0:
        raise SpecError(f"{what} must be positive, got {token.strip()!r}", text, pos)
    return value


def _integer(token: str, text: str, pos: int, what: str, minimum: int = 1) -> int:
    stripped = token.strip()
    try:
        value = int(stripped)
    except ValueError:
        raise SpecError(f"{what} must be an integer, got {stripped!r}", text, pos) from None
    if value < minimum:
        raise SpecError(f"{what} must be >= {minimum}, got {value}", text, pos)
    return value


def _keyvals(text: str, start: int, keys: tuple[str, ...]) -> dict[str, tuple[str, int]]:
    """Parse ``k=v,k=v`` from ``text[start:]``; every key in ``keys`` exactly once."""
    found: dict[str, tuple[str, int]] = {}
    for item, pos in _fields(text, start):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq:
            raise SpecError(f"expected key=value, got {item!r}", text, pos)
        if key not in keys:
            raise SpecError(
                f"unknown key {key!r}; expected {', '.join(keys)}", text, pos
            )
        if key in found:
            raise SpecError(f"duplicate key {key!r}", text, pos)
        found[key] = (value, pos + len(item.split("=", 1)[0]) + 1)
    missing = [k for k in keys if k not in found]
    if missing:
        raise SpecError(f"missing key {missing[0]!r}", text, len(text))
    return found


def parse_baseline(text: str) -> GeneralizedGamma:
    """Parse a baseline spec such as ``gg:beta=0.8,alpha=0.5``."""
    raw = text
    text = text.strip()
    lead = len(raw) - len(raw.lstrip())
    kind, colon, _ = text.partition(":")
    kind_l = kind.strip().lower()
    if kind_l in ("exp", "exponential"):
        if colon:
            raise SpecError("the exponential baseline takes no parameters", raw, lead + len(kind))
        return make_special("exp")
    if not colon:
        raise SpecError(
            f"unknown baseline {kind!r}; expected exp, gg:, weibull: or gamma:", raw, lead
        )
    start = len(kind) + 1
    if kind_l == "gg":
        kv = _keyvals(text, start, ("beta", "alpha"))
        beta = _positive(kv["beta"][0], text, kv["beta"][1], "beta")
        alpha = _positive(kv["alpha"][0], text, kv["alpha"][1], "alpha")
        return GeneralizedGamma(beta, alpha)
    if kind_l in ("weibull", "gamma"):
        kv = _keyvals(text, start, ("shape",))
        shape = _positive(kv["shape"][0], text, kv["shape"][1], "shape")
        return make_special(kind_l, shape)
    raise SpecError(
        f"unknown baseline {kind!r}; expected exp, gg:, weibull: or gamma:", raw, lead
    )


def parse_vector(text: str, what: str = "scale") -> tuple[float, ...]:
    """Comma-separated positive reals, e.g. ``1,3``."""
    if not text.strip():
        raise SpecError(f"empty {what} vector", text, 0)
    return tuple(_positive(tok, text, pos, what) for tok, pos in _fields(text))


def parse_outlier(text: str) -> tuple[int, float, int, float]:
    """``p=2,lambda1=0.5,q=3,lambda=2`` -> ``(p, lambda1, q, lambda)``."""
    kv = _keyvals(text, 0, ("p", "lambda1", "q", "lambda"))
    return (
        _integer(kv["p"][0], text, kv["p"][1], "p"),
        _positive(kv["lambda1"][0], text, kv["lambda1"][1], "lambda1"),
        _integer(kv["q"][0], text, kv["q"][1], "q"),
        _positive(kv["lambda"][0], text, kv["lambda"][1], "lambda"),
    )


def parse_grid(text: str) -> Grid:
    """``tmin,tmax,points,log|lin``; the spacing field may be omitted (log)."""
    fields = _fields(text)
    if len(fields) not in (3, 4):
        raise SpecError(
            f"grid needs tmin,tmax,points[,log|lin], got {len(fields)} fields", text, 0
        )
    t_min = _positive(fields[0][0], text, fields[0][1], "tmin")
    t_max = _positive(fields[1][0], text, fields[1][1], "tmax")
    if t_max <= t_min:
        raise SpecError("tmax must exceed tmin", text, fields[1][1])
    points = _integer(fields[2][0], text, fields[2][1], "points", minimum=2)
    spacing = "log"
    if len(fields) == 4:
        spacing = fields[3][0].strip().lower()
        if spacing not in ("log", "lin", "linear"):
            raise SpecError(f"spacing must be log or lin, got {spacing!r}", text, fields[3][1])
    try:
        return Grid(t_min, t_max, points, spacing)
    except ValueError as exc:  # pragma: no cover - guarded above
        raise SpecError(str(exc), text, 0) from None


def format_vector(values) -> str:
    return ",".join(repr(float(v)) for v in values)

