"""Published JSON schemas for every CLI report.

Each command's machine-readable report validates against the schema under
its command name; error reports validate against "error".  The schemas
pin the load-bearing fields and leave room for additive detail.
"""

from __future__ import annotations

_ERROR_OBJ = {
    "type": "object",
    "required": ["type", "message"],
    "properties": {"type": {"type": "string"}, "message": {"type": "string"}},
}

_SCALAR = {
    "type": "array",
    "items": {"type": "string"},
    "minItems": 4,
    "maxItems": 4,
}

_MATRIX = {"type": "array", "items": {"type": "array", "items": _SCALAR}}

_ASSIGNMENT = {"type": "object", "additionalProperties": {"enum": [0, 1]}}

_CERTIFICATE = {
    "type": "object",
    "required": ["applicable"],
    "properties": {
        "applicable": {"type": "boolean"},
        "kind": {"type": "string"},
        "context_count": {"type": "integer"},
        "multiplicities": {"type": "object"},
        "reason": {"type": "string"},
    },
}

REPORT_SCHEMAS: dict[str, dict] = {
    "error": {
        "type": "object",
        "required": ["command", "error"],
        "properties": {"command": {"type": "string"}, "error": _ERROR_OBJ},
    },
    "validate": {
        "type": "object",
        "required": ["command", "valid"],
        "properties": {
            "command": {"const": "validate"},
            "path": {"type": "string"},
            "kind": {
                "enum": ["rayset", "decomposition", "framework-set", "partition"]
            },
            "valid": {"type": "boolean"},
            "summary": {"type": "object"},
            "error": _ERROR_OBJ,
        },
    },
    "algebra": {
        "type": "object",
        "required": ["command", "dim", "n_cells", "n_events"],
        "properties": {
            "command": {"const": "algebra"},
            "dim": {"type": "integer"},
            "n_cells": {"type": "integer"},
            "n_events": {"type": "integer"},
            "cell": {"type": "integer"},
            "event": {
                "type": "object",
                "required": ["literal", "cells", "rank"],
                "properties": {
                    "literal": {"type": "string"},
                    "cells": {"type": "array", "items": {"type": "integer"}},
                    "rank": {"type": "integer"},
                },
            },
            "truth": {"enum": [0, 1]},
        },
    },
    "compat": {
        "type": "object",
        "required": ["command", "label1", "label2", "compatible"],
        "properties": {
            "command": {"const": "compat"},
            "label1": {"type": "string"},
            "label2": {"type": "string"},
            "compatible": {"type": "boolean"},
        },
    },
    "refine": {
        "type": "object",
        "required": ["command", "fine", "coarse", "is_refinement"],
        "properties": {
            "command": {"const": "refine"},
            "fine": {"type": "string"},
            "coarse": {"type": "string"},
            "is_refinement": {"type": "boolean"},
        },
    },
    "truth": {
        "type": "object",
        "required": ["command", "label", "cell"],
        "properties": {
            "command": {"const": "truth"},
            "label": {"type": "string"},
            "cell": {"type": "integer"},
            "values": {"type": "object", "additionalProperties": {"enum": [0, 1]}},
            "query": {
                "type": "object",
                "required": ["literal", "value"],
                "properties": {
                    "literal": {"type": "string"},
                    "value": {"enum": [0, 1]},
                },
            },
        },
    },
    "efp": {
        "type": "object",
        "required": ["command", "consistent"],
        "properties": {
            "command": {"const": "efp"},
            "consistent": {"type": "boolean"},
            "violation": {
                "type": "object",
                "required": ["label1", "value1", "label2", "value2"],
                "properties": {
                    "label1": {"type": "string"},
                    "value1": {"enum": [0, 1]},
                    "label2": {"type": "string"},
                    "value2": {"enum": [0, 1]},
                    "projector_rank": {"type": "integer"},
                    "projector": _MATRIX,
                },
            },
            "candidate": {
                "type": "object",
                "required": ["defined_on", "conflicts"],
                "properties": {
                    "defined_on": {"type": "integer"},
                    "conflicts": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["kind"],
                            "properties": {
                                "kind": {
                                    "enum": [
                                        "identity",
                                        "complement",
                                        "product",
                                        "noncommuting_true",
                                    ]
                                },
                                "p": _MATRIX,
                                "q": _MATRIX,
                                "p_rank": {"type": "integer"},
                                "q_rank": {"type": "integer"},
                            },
                        },
                    },
                },
            },
        },
    },
    "ks": {
        "type": "object",
        "required": [
            "command",
            "dim",
            "n_rays",
            "n_contexts",
            "outcome",
            "nodes_explored",
        ],
        "properties": {
            "command": {"const": "ks"},
            "dataset": {"type": "string"},
            "path": {"type": "string"},
            "dim": {"type": "integer"},
            "n_rays": {"type": "integer"},
            "n_contexts": {"type": "integer"},
            "outcome": {"enum": ["exists", "nonexistent"]},
            "nodes_explored": {"type": "integer"},
            "assignment": {"anyOf": [_ASSIGNMENT, {"type": "null"}]},
            "witnesses": {"type": "array", "items": _ASSIGNMENT},
            "n_witnesses": {"type": "integer"},
            "certificate": _CERTIFICATE,
            "expect": {"enum": ["exists", "none"]},
            "expect_match": {"type": "boolean"},
        },
    },
    "demo": {
        "type": "object",
        "required": ["command", "name"],
        "properties": {
            "command": {"const": "demo"},
            "name": {
                "enum": [
                    "spin-half",
                    "s0s1s2",
                    "classical-oscillator",
                    "cabello18",
                    "peres24",
                ]
            },
        },
    },
}
