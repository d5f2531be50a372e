"""JSON schemas for every file the CLI reads or writes."""
import jsonschema

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_LABEL = {"type": "string", "pattern": "^[AB][1-9][0-9]*$"}
_PAULI = {"type": "string", "pattern": "^(\\+|-|\\+i|-i|i)?[IXYZ]+$"}
_N = {"type": "integer", "minimum": 1}

GRAPH = {
    "type": "object",
    "required": ["n", "edges"],
    "properties": {
        "n": _N,
        "edges": {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                             "minItems": 2, "maxItems": 2}},
    },
}

INEQUALITY = {
    "type": "object",
    "required": ["n", "alpha", "terms", "classical_bound", "quantum_bound"],
    "properties": {
        "n": {"type": "integer", "minimum": 3},
        "alpha": {"type": "integer"},
        "terms": {"type": "array", "items": {
            "type": "object", "required": ["coeff", "labels"],
            "properties": {"coeff": {"type": "integer"},
                           "labels": {"type": "array", "items": _LABEL}}}},
        "classical_bound": {"type": "integer"},
        "quantum_bound": {"type": "integer"},
    },
}

HYPERGRAPH = {
    "type": "object",
    "required": ["vertices", "hyperedges"],
    "properties": {
        "vertices": {"type": "array", "items": _LABEL},
        "hyperedges": {"type": "array", "items": {
            "type": "object", "required": ["labels", "sign", "coeff"],
            "properties": {"labels": {"type": "array", "items": _LABEL},
                           "sign": {"enum": ["+", "-"]},
                           "coeff": {"type": "integer"}}}},
    },
}

BOUNDS = {
    "type": "object",
    "required": ["classical", "quantum"],
    "properties": {"classical": {"type": "integer"}, "quantum": {"type": "integer"}},
}

REALIZATION = {
    "oneOf": [
        {
            "type": "object",
            "required": ["backend", "n", "observables", "stabilizers"],
            "properties": {
                "backend": {"const": "symbolic"},
                "n": {"type": "integer", "minimum": 3},
                "observables": {"type": "object", "additionalProperties": _PAULI},
                "stabilizers": {"type": "array", "items": _PAULI},
            },
        },
        {
            "type": "object",
            "required": ["backend", "n", "observables", "state"],
            "properties": {
                "backend": {"const": "dense"},
                "n": {"type": "integer", "minimum": 3},
                "dim": _N,
                "observables": {"type": "object", "additionalProperties": {
                    "type": "array", "items": {"type": "array", "items": _COMPLEX}}},
                "state": {"type": "array", "items": _COMPLEX},
            },
        },
    ]
}

STATISTICS = {
    "type": "object",
    "required": ["n", "values"],
    "properties": {
        "n": {"type": "integer", "minimum": 3},
        "values": {"type": "array", "items": {
            "type": "object", "required": ["labels", "value"],
            "properties": {"labels": {"type": "array", "items": _LABEL},
                           "value": {"type": "number", "minimum": -1, "maximum": 1}}}},
    },
}

JORDAN = {
    "type": "object",
    "required": ["blocks"],
    "properties": {
        "n": {"type": "integer", "minimum": 3},
        "blocks": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["weight", "angles", "amplitudes"],
            "properties": {"weight": {"type": "number", "minimum": 0},
                           "angles": {"type": "array", "items": {"type": "number"}},
                           "amplitudes": {"type": "array", "items": _COMPLEX}}}},
    },
}

_NUM_LIST = {"type": ["array", "null"], "items": {"type": "number"}}

REPORT = {
    "type": "object",
    "required": ["n", "epsilon", "eps0", "eps1", "eps2", "fid_state_bound", "fid_A_bound",
                 "fid_B_bound", "vacuous", "source", "violations"],
    "properties": {
        "n": {"type": "integer"},
        "epsilon": {"type": "number", "minimum": 0},
        "eps0": {"type": "number"}, "eps1": {"type": "number"}, "eps2": {"type": "number"},
        "fid_state_bound": {"type": "number", "maximum": 1},
        "fid_A_bound": {"type": "number", "maximum": 1},
        "fid_B_bound": {"type": "number", "maximum": 1},
        "vacuous": {"type": "boolean"},
        "source": {"type": "string"},
        "actual_fid_state": {"type": ["number", "null"]},
        "actual_fid_A": _NUM_LIST,
        "actual_fid_B": _NUM_LIST,
        "anticommutator_residuals": _NUM_LIST,
        "lemma_bound": {"type": ["number", "null"]},
        "violations": {"type": "array", "items": {"type": "string"}},
    },
}

VALIDATION = {
    "type": "object",
    "required": ["n", "trials", "seed", "max_angle", "violating_trials", "violation_counts"],
    "properties": {
        "n": {"type": "integer"}, "trials": {"type": "integer"}, "seed": {"type": "integer"},
        "max_angle": {"type": "number"}, "violating_trials": {"type": "integer", "minimum": 0},
        "violation_counts": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}

COMPATIBILITY = {
    "type": "object",
    "required": ["admissible", "commutators", "anticommutators_on_state"],
    "properties": {
        "admissible": {"type": "boolean"},
        "commutators": {"type": "object", "additionalProperties": {"type": "number"}},
        "anticommutators_on_state": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}

EVALUATION = {
    "type": "object",
    "required": ["n", "realization", "value", "quantum_bound", "classical_bound"],
    "properties": {"n": {"type": "integer"}, "realization": {"type": "string"},
                   "value": {"type": "number"}, "quantum_bound": {"type": "integer"},
                   "classical_bound": {"type": "integer"}},
}


class SchemaError(ValueError):
    pass


def validate(data, schema, what):
    """Raise ``SchemaError`` naming the offending field."""
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{what}: field {path}: {exc.message}") from None
