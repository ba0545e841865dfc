"""JSON Schemas (draft 2020-12) for the reports printed by the CLI.

Non-finite numbers never appear as JSON numbers; they are written as the
strings ``"inf"``, ``"-inf"`` or ``"nan"``.
"""

from __future__ import annotations

__all__ = ["SCHEMAS", "schema_for"]

_NUMBER = {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf", "nan"]}]}
_OUTCOME = {"enum": ["holds", "fails", "inconclusive"]}

_GRID = {
    "type": "object",
    "required": ["t_min", "t_max", "points", "spacing"],
    "properties": {
        "t_min": {"type": "number", "exclusiveMinimum": 0},
        "t_max": {"type": "number", "exclusiveMinimum": 0},
        "points": {"type": "integer", "minimum": 2},
        "spacing": {"enum": ["log", "linear"]},
    },
    "additionalProperties": False,
}

_WITNESS = {
    "type": "object",
    "required": ["t1", "t2", "v1", "v2"],
    "properties": {k: _NUMBER for k in ("t1", "t2", "v1", "v2")},
    "additionalProperties": False,
}

_VERDICT_CORE = {
    "outcome": _OUTCOME,
    "quantity": {"type": "string"},
    "tolerance": {"type": "number", "exclusiveMinimum": 0},
    "grid": _GRID,
    "witness": _WITNESS,
    "reason": {"type": "string"},
    "diagnostics": {"type": "object"},
}

MONOTONE_VERDICT = {
    "type": "object",
    "required": ["outcome", "direction", "quantity", "tolerance", "grid"],
    "properties": {**_VERDICT_CORE, "direction": {"enum": ["increasing", "decreasing"]}},
    "additionalProperties": False,
}

ORDER_VERDICT = {
    "type": "object",
    "required": ["order", "outcome", "quantity", "tolerance", "grid"],
    "properties": {
        **_VERDICT_CORE,
        "order": {"enum": ["st", "rh", "lr"]},
        "parts": {
            "type": "object",
            "additionalProperties": {"anyOf": [{"$ref": "#/$defs/order"}, {"$ref": "#/$defs/monotone"}]},
        },
    },
    "additionalProperties": False,
}

CONDITION_REPORT = {
    "type": "object",
    "required": [
        "baseline", "psi_decreasing", "chi_increasing", "eta_increasing",
        "applicable_theorems", "expected", "notes", "contradictions",
    ],
    "properties": {
        "baseline": {"type": "string"},
        "psi_decreasing": {"$ref": "#/$defs/monotone"},
        "chi_increasing": {"$ref": "#/$defs/monotone"},
        "eta_increasing": {"$ref": "#/$defs/monotone"},
        "applicable_theorems": {"type": "array", "items": {"type": "string"}},
        "expected": {"type": "object", "additionalProperties": {"type": ["boolean", "null"]}},
        "notes": {"type": "array", "items": {"type": "string"}},
        "contradictions": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

MAJORIZATION = {
    "majorized": {"type": "boolean"},
    "weakly_supermajorized": {"type": "boolean"},
    "prefix_sums_x": {"type": "array", "items": {"type": "number"}},
    "prefix_sums_y": {"type": "array", "items": {"type": "number"}},
    "total_x": {"type": "number"},
    "total_y": {"type": "number"},
    "direction": {"type": "string"},
}

_MODEL = {
    "type": "object",
    "required": ["components", "n"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["baseline", "lambda"],
                "properties": {
                    "baseline": {"type": "string"},
                    "lambda": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
    },
}

_DEFS = {"monotone": MONOTONE_VERDICT, "order": ORDER_VERDICT, "conditions": CONDITION_REPORT}


def _doc(command: str, required: list[str], properties: dict) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["command", *required],
        "properties": {"command": {"const": command}, **properties},
        "additionalProperties": False,
        "$defs": _DEFS,
    }


SCHEMAS = {
    "compare": _doc(
        "compare",
        ["x", "y", "grid", "tolerance", "majorization", "conditions", "orders", "theorems", "outcome"],
        {
            "x": _MODEL,
            "y": _MODEL,
            "grid": _GRID,
            "tolerance": {"type": "number"},
            "majorization": {
                "type": "object",
                "properties": MAJORIZATION,
                "required": ["majorized", "weakly_supermajorized"],
            },
            "conditions": {"type": "object", "additionalProperties": {"$ref": "#/$defs/conditions"}},
            "orders": {"type": "object", "additionalProperties": {"$ref": "#/$defs/order"}},
            "theorems": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["theorem", "order", "statement", "validated", "verdict"],
                    "properties": {
                        "theorem": {"type": "string"},
                        "order": {"enum": ["rh", "lr", "rh_ratio"]},
                        "statement": {"type": "string"},
                        "validated": _OUTCOME,
                        "verdict": {"anyOf": [{"$ref": "#/$defs/order"}, {"$ref": "#/$defs/monotone"}]},
                    },
                },
            },
            "outcome": {"enum": ["holds", "fails", "inconclusive", "contradiction"]},
            "error": {"type": "string"},
        },
    ),
    "verify-conditions": _doc(
        "verify-conditions",
        ["report", "outcome"],
        {"report": {"$ref": "#/$defs/conditions"}, "outcome": _OUTCOME},
    ),
    "majorize": _doc(
        "majorize",
        ["x", "y", "majorized", "weakly_supermajorized"],
        {
            "x": {"type": "array", "items": {"type": "number"}},
            "y": {"type": "array", "items": {"type": "number"}},
            **MAJORIZATION,
        },
    ),
    "simulate": _doc(
        "simulate",
        ["model", "seed", "streams", "summary", "sup_distance"],
        {
            "model": {"type": "string"},
            "seed": {"type": "integer", "minimum": 0},
            "streams": {"type": "integer", "minimum": 1},
            "summary": {
                "type": "object",
                "required": ["count", "mean", "min", "max", "quantiles"],
                "properties": {
                    "count": {"type": "integer", "minimum": 1},
                    "mean": {"type": "number"},
                    "min": {"type": "number", "exclusiveMinimum": 0},
                    "max": {"type": "number"},
                    "quantiles": {"type": "object", "additionalProperties": {"type": "number"}},
                },
            },
            "sup_distance": {"type": "number", "minimum": 0, "maximum": 1},
        },
    ),
    "falsify": _doc(
        "falsify",
        ["theorem", "mode", "trials", "seed", "outcomes", "counterexample_found", "counterexamples"],
        {
            "theorem": {"type": "string"},
            "mode": {"enum": ["validate", "explore"]},
            "trials": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0},
            "dropped": {"type": ["string", "null"]},
            "outcomes": {"type": "object", "additionalProperties": {"type": "integer"}},
            "counterexample_found": {"type": "boolean"},
            "counterexamples": {"type": "array"},
            "not_emitted": {"type": "integer", "minimum": 0},
            "examples": {"type": "array"},
        },
    ),
}


def schema_for(command: str) -> dict:
    return SCHEMAS[command]
