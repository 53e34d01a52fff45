"""
JSON input parsing and deterministic report rendering.

Parsers accept a path or an already decoded document and raise `SpecError`
with a JSON pointer on malformed input; domain validation errors (group axioms,
measure weights, ...) propagate unchanged.
"""
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Union

import numpy as np

from ._almostinv import DualMeasure
from ._dyadic import QSqrt2
from ._exceptions import SpecError
from ._frames import VectorSystem
from ._groups import FiniteGroup, SubgroupEmbedding, subgroup
from ._representations import UnitaryRepresentation, _checked
from .constructions import build_group

logger = logging.getLogger(__name__)

Source = Union[str, Path, Mapping]


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0"
    return "%.17g" % x


def _plain(obj: Any) -> Any:
    """Maps report values onto JSON types; floats are kept for `format_float`."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (Fraction, QSqrt2)):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, Mapping):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    raise TypeError(f"Object of type {type(obj).__name__} is not serializable")


def _render(obj: Any, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_render(obj[k], level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if not obj:
        return "[]"
    items = [f"{inner}{_render(x, level + 1)}" for x in obj]
    return "[\n" + ",\n".join(items) + "\n" + pad + "]"


def render_json(obj: Any) -> str:
    """Byte-stable JSON: sorted keys, two-space indent, floats with 17 significant
    digits, non-finite floats as null, trailing newline."""
    return _render(_plain(obj), 0) + "\n"


def _require_object(doc: Any, name: str) -> Mapping:
    if not isinstance(doc, Mapping):
        raise SpecError(f"Expected a JSON object in {name}, got {type(doc).__name__}", "")
    return doc


def decode_document(data: bytes, name: str = "input") -> Mapping:
    """Decodes a JSON document whose top level has to be an object."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SpecError(f"Malformed JSON in {name}: {e}", "") from e
    return _require_object(doc, name)


def load_document(source: Source) -> Mapping:
    """Returns the top level JSON object of a path or an already decoded document."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        return decode_document(path.read_bytes(), str(path))
    return _require_object(source, "document")


def _require(doc: Mapping, key: str, types, pointer: str):
    if not isinstance(doc, Mapping):
        raise SpecError("Expected an object", pointer)
    if key not in doc:
        raise SpecError(f"Missing field '{key}'", pointer)
    value = doc[key]
    types = types if isinstance(types, tuple) else (types,)
    if not isinstance(value, types) or (isinstance(value, bool) and bool not in types):
        raise SpecError(f"Field '{key}' has the wrong type {type(value).__name__}", f"{pointer}/{key}")
    return value


def parse_group_spec(source: Source) -> FiniteGroup:
    return build_group(load_document(source))


def parse_subgroup_spec(source: Source, G: FiniteGroup) -> SubgroupEmbedding:
    """{"generators": [element indices]} -> the generated subgroup."""
    doc = load_document(source)
    generators = _require(doc, "generators", list, "")
    for i, g in enumerate(generators):
        if isinstance(g, bool) or not isinstance(g, int) or not 0 <= g < G.order:
            raise SpecError(f"Generator {g!r} is not an element index of {G.name}", f"/generators/{i}")
    return subgroup(G, generators)


def _angle(value, rank: int, pointer: str):
    parts = value if isinstance(value, list) else [value]
    if len(parts) != rank:
        raise SpecError(f"Angle needs {rank} coordinates", pointer)
    angle = []
    for i, part in enumerate(parts):
        location = f"{pointer}/{i}" if isinstance(value, list) else pointer
        if not isinstance(part, (str, int)) or isinstance(part, bool):
            raise SpecError("Angles are exact rational strings like \"1/8\"", location)
        try:
            angle.append(Fraction(part))
        except (ValueError, ZeroDivisionError) as e:
            raise SpecError(f"Cannot read angle {part!r}: {e}", location) from e
    return tuple(angle)


def parse_measure_spec(source: Source) -> DualMeasure:
    """{"rank": 1, "atoms": [{"angle": "1/8", "weight": 0.25}, ...], "generators": [[1]]}"""
    doc = load_document(source)
    rank = _require(doc, "rank", int, "")
    atoms = _require(doc, "atoms", list, "")
    parsed = []
    for j, atom in enumerate(atoms):
        pointer = f"/atoms/{j}"
        angle = _angle(_require(atom, "angle", (str, int, list), pointer), rank, f"{pointer}/angle")
        weight = _require(atom, "weight", (int, float), pointer)
        parsed.append((angle, float(weight)))
    generators = doc.get("generators")
    if generators is not None:
        if not isinstance(generators, list) or not all(
            isinstance(g, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in g)
            for g in generators
        ):
            raise SpecError("Generators are lists of integers", "/generators")
    return DualMeasure(rank, tuple(parsed), generators)


def _complex(entry, pointer: str) -> complex:
    if isinstance(entry, bool):
        raise SpecError("Expected a number or [re, im]", pointer)
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        return complex(entry[0], entry[1])
    raise SpecError("Expected a number or [re, im]", pointer)


def _matrix(rows, shape, pointer: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise SpecError(f"Expected {shape[0]} rows", pointer)
    result = np.zeros(shape, dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise SpecError(f"Expected {shape[1]} entries", f"{pointer}/{i}")
        for j, entry in enumerate(row):
            result[i, j] = _complex(entry, f"{pointer}/{i}/{j}")
    return result


def parse_system_spec(source: Source) -> VectorSystem:
    """{"dim": d, "vectors": [[entry, ...], ...]} with entries x or [re, im]."""
    doc = load_document(source)
    dim = _require(doc, "dim", int, "")
    vectors = _require(doc, "vectors", list, "")
    if dim < 1 or not vectors:
        raise SpecError("A system needs dim >= 1 and at least one vector", "/vectors")
    return VectorSystem(_matrix(vectors, (len(vectors), dim), "/vectors"))


def system_to_dict(sys: VectorSystem) -> dict:
    return {"dim": sys.dim, "vectors": sys.vectors}


def parse_representation(source: Source) -> UnitaryRepresentation:
    """{"group": spec, "dim": d, "matrices": {label: [[entry]]}}, one matrix per element."""
    doc = load_document(source)
    G = build_group(_require(doc, "group", dict, ""), "/group")
    dim = _require(doc, "dim", int, "")
    matrices = _require(doc, "matrices", dict, "")
    missing = [label for label in G.labels if label not in matrices]
    if missing or len(matrices) != G.order:
        raise SpecError(f"Expected one matrix per element label, missing {missing}", "/matrices")
    stacked = [_matrix(matrices[label], (dim, dim), f"/matrices/{label}") for label in G.labels]
    return _checked(UnitaryRepresentation(G, np.array(stacked)))


def representation_to_dict(rep: UnitaryRepresentation, group_spec: Mapping) -> dict:
    return {
        "group": dict(group_spec),
        "dim": rep.dim,
        "matrices": {label: rep.matrices[g] for g, label in enumerate(rep.group.labels)},
    }
