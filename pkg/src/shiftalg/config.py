"""Declarative subshift definitions and built-in fixtures."""
import json

import jsonschema
import yaml

from .errors import HypothesisViolated
from .intsets import IntSet
from .shifts import AutomatonShift, Family, RuleShift, VSet

_name = {"type": "string", "minLength": 1}
_vertex = {"type": ["string", "integer"]}

_vrange = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "vertices": {"type": "array", "items": _vertex},
        "from": {"type": "integer"},
        "shift": {"type": "integer"},
        "all": {"type": "boolean"},
    },
}

_source = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"vertex": _vertex, "shift": {"type": "integer"}},
    "minProperties": 1,
    "maxProperties": 1,
}

SUBSHIFT_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["forbidden_words", "labelled_graph", "graph", "ultragraph_rules"]},
        "name": _name,
        "alphabet": {"type": "array", "items": _name},
        "forbidden": {"type": "array", "items": {"type": "string"}},
        "vertices": {"type": "array", "items": _vertex},
        "edges": {"type": "array"},
        "named_vertices": {"type": "array", "items": {"type": "string"}},
        "numeric_from": {"type": ["integer", "null"]},
        "families": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "source", "range"],
                "additionalProperties": False,
                "properties": {
                    "name": _name,
                    "indices": {"oneOf": [{"type": "null"},
                                          {"type": "array", "items": {"type": "integer"}},
                                          {"type": "object", "additionalProperties": False,
                                           "required": ["from"], "properties": {"from": {"type": "integer"}}}]},
                    "source": _source,
                    "range": _vrange,
                    "overrides": {
                        "type": "object",
                        "additionalProperties": {
                            "type": "object",
                            "additionalProperties": False,
                            "properties": {"source": _source, "range": _vrange},
                        },
                    },
                },
            },
        },
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["subshift"],
    "properties": {
        "subshift": SUBSHIFT_SCHEMA,
        "target": SUBSHIFT_SCHEMA,
        "ring": {"type": "string", "pattern": "^(ZZ|QQ|GF\\([0-9]+\\))$"},
        "depth": {"type": "integer", "minimum": 0},
        "max_len": {"type": "integer", "minimum": 0},
        "window": {"type": "integer", "minimum": 1},
        "budget": {"type": "integer", "minimum": 1},
        "code": {
            "type": "object",
            "additionalProperties": False,
            "required": ["map"],
            "properties": {
                "memory": {"type": "integer", "minimum": 0},
                "map": {"type": "object", "additionalProperties": {"type": "string"}},
                "inverse": {"type": "object", "additionalProperties": {"type": "string"}},
                "head": {"type": "array", "items": {"type": "object", "additionalProperties": {"type": "string"}}},
                "inverse_head": {"type": "array",
                                 "items": {"type": "object", "additionalProperties": {"type": "string"}}},
            },
        },
    },
}


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        data = json.loads(text)
    else:
        data = yaml.safe_load(text)
    jsonschema.validate(data, CONFIG_SCHEMA)
    return data


def _src(d):
    if "vertex" in d:
        return ("vertex", d["vertex"])
    return ("shift", d["shift"])


def _rng(d, named, base):
    if "shift" in d:
        return ("shift", d["shift"])
    if d.get("all"):
        return ("set", VSet(named, IntSet.ray(base) if base is not None else IntSet()))
    vs = d.get("vertices", [])
    nums = IntSet([v for v in vs if isinstance(v, int)], d.get("from"))
    return ("set", VSet([v for v in vs if isinstance(v, str)], nums))


def build_shift(desc):
    jsonschema.validate(desc, SUBSHIFT_SCHEMA)
    kind = desc["kind"]
    name = desc.get("name", "X")
    if kind == "forbidden_words":
        return AutomatonShift.sft(desc["alphabet"], desc.get("forbidden", []), name=name)
    if kind == "labelled_graph":
        edges = [tuple(e) for e in desc["edges"]]
        return AutomatonShift.sofic(desc["vertices"], edges, name=name, alphabet=desc.get("alphabet"))
    if kind == "graph":
        from .bridges import Graph, Ultragraph, edge_shift
        edges = desc["edges"]
        if all(isinstance(e, list) for e in edges):
            g = Graph(desc["vertices"], {e[0]: (e[1], e[2]) for e in edges}, name=name)
        else:
            g = Ultragraph(desc["vertices"], {e["name"]: (e["source"], e["range"]) for e in edges}, name=name)
        return edge_shift(g)
    named = desc.get("named_vertices", [])
    base = desc.get("numeric_from")
    fams = []
    for f in desc["families"]:
        ind = f.get("indices")
        if isinstance(ind, dict):
            ind = ("from", ind["from"])
        ov = {}
        for k, o in f.get("overrides", {}).items():
            ov[int(k)] = (_src(o["source"]) if "source" in o else None,
                          _rng(o["range"], named, base) if "range" in o else None)
        fams.append(Family(f["name"], ind, _src(f["source"]), _rng(f["range"], named, base), ov))
    return RuleShift(named, base, fams, name=name, kind=kind)


FIXTURES = {
    "full2": {"kind": "forbidden_words", "name": "full2", "alphabet": ["0", "1"], "forbidden": []},
    "golden": {"kind": "forbidden_words", "name": "golden", "alphabet": ["0", "1"], "forbidden": ["11"]},
    "golden00": {"kind": "forbidden_words", "name": "golden00", "alphabet": ["0", "1"], "forbidden": ["00"]},
    "even": {"kind": "labelled_graph", "name": "even", "alphabet": ["0", "1"], "vertices": ["A", "B"],
             "edges": [["A", "1", "A"], ["A", "0", "B"], ["B", "0", "A"]]},
    "renewal": {"kind": "ultragraph_rules", "name": "renewal", "numeric_from": 1,
                "families": [{"name": "e", "indices": {"from": 1}, "source": {"shift": 0},
                              "range": {"shift": -1}, "overrides": {"1": {"range": {"all": True}}}}]},
    "theorPropfail": {"kind": "ultragraph_rules", "name": "theorPropfail", "named_vertices": ["v", "w"],
                      "families": [{"name": "e", "indices": {"from": 0}, "source": {"vertex": "v"},
                                    "range": {"vertices": ["w"]}},
                                   {"name": "f", "indices": None, "source": {"vertex": "w"},
                                    "range": {"vertices": ["w"]}}]},
    "rose2": {"kind": "graph", "name": "rose2", "vertices": ["v"], "edges": [["e", "v", "v"], ["f", "v", "v"]]},
    "cycle2": {"kind": "graph", "name": "cycle2", "vertices": ["v1", "v2"],
               "edges": [["a", "v1", "v2"], ["b", "v2", "v1"]]},
    "cycle3": {"kind": "graph", "name": "cycle3", "vertices": ["u", "v", "w"],
               "edges": [["a", "u", "v"], ["b", "v", "w"], ["c", "w", "u"]]},
}

_built = {}


def fixture(name):
    """Shared instance of a built-in fixture."""
    if name not in FIXTURES:
        raise HypothesisViolated(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    if name not in _built:
        _built[name] = build_shift(FIXTURES[name])
    return _built[name]
