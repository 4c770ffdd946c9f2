"""
JSON codecs for field elements, tuples, cocycles and modules, and document files
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import Config
from exceptions import InputError
from fundclass import EncodingTuple, ExtensionSpec, LocalCocycle, Tower, tower_setup
from groups import AbelianPresentation, GroupElement
from padic_fields import FieldElement, PadicField, field_from_id
from zmod_cohomology import Cochain, FiniteGModule

logger = logging.getLogger(__name__)

SCHEMA = "fundclass/1"


def _int(value: Any, what: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise InputError(f"{what} must be a decimal integer, got {value!r}")


def element_to_dict(x: FieldElement) -> Dict[str, Any]:
    return {"field": x.field.id, "shift": str(x.shift), "prec": str(x.prec),
            "coeffs": [[str(c) for c in row] for row in x.grid]}


def element_from_dict(data: Dict[str, Any], field: Optional[PadicField] = None) -> FieldElement:
    try:
        F = field_from_id(data["field"])
        rows = [[_int(c, "coefficient") for c in row] for row in data["coeffs"]]
        shift = _int(data["shift"], "shift")
        prec = _int(data["prec"], "prec")
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed field element: {e}")
    if field is not None and F != field:
        raise InputError(f"element lives in {F.id}, expected {field.id}")
    if len(rows) != F.R or any(len(row) != F.D for row in rows):
        raise InputError(f"element grid must be {F.R}x{F.D} for {F.id}")
    return FieldElement.make(F, shift, rows, prec)


def _pair_key(g: GroupElement, h: GroupElement) -> str:
    return f"{g.encode()}|{h.encode()}"


def _parse_pair(G: AbelianPresentation, key: str) -> Tuple[GroupElement, GroupElement]:
    left, sep, right = key.partition("|")
    if not sep:
        raise InputError(f"table key {key!r} is not of the form 'a0,a1|b0,b1'")
    return G.parse_element(left), G.parse_element(right)


def _load_tower(data: Dict[str, Any]) -> Tower:
    try:
        spec = ExtensionSpec.from_dict(data["spec"])
        field = field_from_id(data["tower"]["field"])
    except (KeyError, TypeError) as e:
        raise InputError(f"document is missing {e}")
    return tower_setup(spec, field=field)


def tuple_to_dict(tower: Tower, T: EncodingTuple, route: str = "general") -> Dict[str, Any]:
    return {
        "spec": tower.spec.to_dict(),
        "tower": tower.describe(),
        "route": route,
        "precision": str(T.precision),
        "alpha": [element_to_dict(a) for a in T.alpha],
        "beta": [[element_to_dict(b) for b in row] for row in T.beta],
        "entries": {"tuple": str(T.size), "cocycle": str(tower.galois_L.order ** 2)},
    }


def tuple_from_dict(data: Dict[str, Any]) -> Tuple[Tower, EncodingTuple, str]:
    tower = _load_tower(data)
    F = tower.field
    r = len(tower.indices)
    try:
        alpha = tuple(element_from_dict(a, F) for a in data["alpha"])
        beta = tuple(tuple(element_from_dict(b, F) for b in row) for row in data["beta"])
        precision = _int(data["precision"], "precision")
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed tuple document: {e}")
    if len(alpha) != r or len(beta) != r or any(len(row) != r for row in beta):
        raise InputError(f"tuple needs {r} α entries and a {r}x{r} β table")
    T = EncodingTuple(F, tower.indices, tower.galois_L.orders, alpha, beta, precision)
    return tower, T, data.get("route", "general")


def cocycle_to_dict(tower: Tower, c: LocalCocycle) -> Dict[str, Any]:
    return {
        "spec": tower.spec.to_dict(),
        "tower": tower.describe(),
        "precision": str(c.precision),
        "table": {_pair_key(g, h): element_to_dict(v) for (g, h), v in c.values.items()},
    }


def cocycle_from_dict(data: Dict[str, Any]) -> Tuple[Tower, LocalCocycle]:
    tower = _load_tower(data)
    G = tower.galois_L
    try:
        table = data["table"]
        precision = _int(data["precision"], "precision")
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed cocycle document: {e}")
    values = {_parse_pair(G, key): element_from_dict(v, tower.field) for key, v in table.items()}
    if len(values) != G.order ** 2:
        raise InputError(f"cocycle table has {len(values)} entries, expected {G.order ** 2}")
    return tower, LocalCocycle(G, tower.field, tower.indices, values, precision)


def module_to_dict(A: FiniteGModule) -> Dict[str, Any]:
    return {"factors": [str(d) for d in A.factors],
            "actions": [[[str(v) for v in row] for row in M] for M in A.actions]}


def module_from_dict(data: Dict[str, Any], group: AbelianPresentation) -> FiniteGModule:
    """{"factors": [...], "actions": [matrix per generator]}; omitted actions are trivial"""
    try:
        factors = [_int(d, "module factor") for d in data["factors"]]
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed module description: {e}")
    actions = data.get("actions")
    if actions is not None:
        actions = [[[_int(v, "action entry") for v in row] for row in M] for M in actions]
    return FiniteGModule(group, factors, actions)


def cochain_to_dict(c: Cochain) -> Dict[str, Any]:
    values = {}
    for gs, v in c.values.items():
        key = "|".join(g.encode() for g in gs)
        values[key] = [str(a) for a in v]
    return {"degree": str(c.degree), "values": values}


def vector_to_list(v: Sequence[int]) -> List[str]:
    return [str(a) for a in v]


class PersistenceManager:
    """Reads and writes JSON documents"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()

    def load_document(self, path: str) -> Dict[str, Any]:
        """Load a document and check its schema"""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error loading document {path}: {e}")
            raise InputError(f"cannot read document {path}: {e}")
        if isinstance(document, dict) and "schema" in document:
            if document["schema"] != SCHEMA:
                raise InputError(f"unsupported schema {document['schema']!r}, expected {SCHEMA}")
            return document
        if isinstance(document, dict):
            # bare payloads (module descriptions, hand-written tuples)
            return document
        raise InputError(f"document {path} is not a JSON object")

    def load_payload(self, path: str) -> Dict[str, Any]:
        """The `result` of a document, or the document itself when it is a bare payload"""
        document = self.load_document(path)
        return document.get("result", document) if "schema" in document else document

    def write_text(self, text: str, path: Optional[str] = None, name: Optional[str] = None) -> str:
        """Write emitted text to `path`, or to `name` inside the output directory"""
        if path is None:
            if name is None:
                raise InputError("an output path or name is required")
            path = self.config.get_output_path(name)
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Error saving document {path}: {e}")
            raise InputError(f"cannot write {path}: {e}")
        logger.info(f"Saved document to {path}")
        return path
