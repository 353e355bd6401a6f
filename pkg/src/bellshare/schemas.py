"""JSON schemas for scenario files and the reports the CLI writes."""

from __future__ import annotations

_NUMBER_OR_LIST = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 1},
    ]
}

_COEFFS = {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "mode": {"enum": ["verify", "sweep", "optimize"]},
        "d": {"type": "integer", "minimum": 2},
        "schmidt": {
            "oneOf": [
                _COEFFS,
                {"type": "array", "items": _COEFFS, "minItems": 1},
            ]
        },
        "squared": {"type": "boolean"},
        "theta": _NUMBER_OR_LIST,
        "gamma1": _NUMBER_OR_LIST,
        "restarts": {"type": "integer", "minimum": 1},
        "budget": {"type": "integer", "minimum": 50},
        "seed": {"type": "integer", "minimum": 0},
        "output": {"type": "string"},
    },
    "required": ["mode", "d", "schmidt"],
    "allOf": [
        {
            "if": {"properties": {"mode": {"enum": ["verify", "sweep"]}}},
            "then": {"required": ["theta", "gamma1"]},
        },
        {
            "if": {"properties": {"mode": {"const": "optimize"}}},
            "then": {"required": ["restarts", "budget"]},
        },
    ],
    "additionalProperties": False,
}

_PARAMS = {
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "schmidt": _COEFFS,
        "theta": {"type": "number"},
        "gamma1": {"type": "number"},
    },
    "required": ["d", "schmidt", "theta", "gamma1"],
    "additionalProperties": False,
}

_CHECK = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "value": {"type": "number"},
        "tolerance": {"type": "number"},
        "passed": {"type": "boolean"},
        "informational": {"type": "boolean"},
    },
    "required": ["name", "value", "tolerance", "passed", "informational"],
    "additionalProperties": False,
}

VERIFY_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "mode": {"const": "verify"},
        "d": {"type": "integer"},
        "passed": {"type": "boolean"},
        "summary": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {
                    "max_value": {"type": "number"},
                    "tolerance": {"type": "number"},
                    "passed": {"type": "boolean"},
                    "informational": {"type": "boolean"},
                    "count": {"type": "integer"},
                },
                "required": ["max_value", "tolerance", "passed", "informational", "count"],
            },
        },
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "params": _PARAMS,
                    "checks": {"type": "array", "items": _CHECK},
                },
                "required": ["params", "checks"],
            },
        },
        "notes": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["mode", "d", "passed", "summary", "points", "notes"],
    "additionalProperties": False,
}

OPTIMIZE_RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "mode": {"const": "optimize"},
        "best_params": _PARAMS,
        "best_value": {"type": "number"},
        "evaluations": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "restarts": {"type": "integer"},
        "budget": {"type": "integer"},
        "theta_min": {"type": "number"},
        "status": {"enum": ["converged", "budget"]},
        "bound": {"type": "number"},
        "bound_violated": {"type": "boolean"},
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "theta": {"type": "number"},
                    "gamma1": {"type": "number"},
                    "value": {"type": "number"},
                },
                "required": ["theta", "gamma1", "value"],
            },
        },
    },
    "required": [
        "mode", "best_params", "best_value", "evaluations", "seed", "restarts",
        "budget", "theta_min", "status", "bound", "bound_violated", "trace",
    ],
    "additionalProperties": False,
}
