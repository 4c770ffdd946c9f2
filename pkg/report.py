"""
Output documents and their JSON / text renderings
"""

import json
import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from exceptions import InputError
from fundclass import CocycleReport
from persistence import SCHEMA

logger = logging.getLogger(__name__)

FORMATS = ("json", "text")


def verification_summary(report: Optional[CocycleReport], what: str = "cocycle identity") -> Dict[str, Any]:
    if report is None:
        return {"check": what, "ok": True, "checked": "0", "witness": None}
    return {"check": what, "ok": report.ok, "checked": str(report.checked), "witness": report.witness_text()}


def build_document(command: Dict[str, Any], result: Dict[str, Any], verification: Dict[str, Any],
                   elapsed: Optional[float] = None) -> Dict[str, Any]:
    document = {
        "schema": SCHEMA,
        "command": command,
        "result": result,
        "verification": verification,
    }
    if elapsed is not None:
        document["timing"] = {"seconds": f"{elapsed:.3f}"}
    return document


def element_summary(data: Dict[str, Any]) -> str:
    """p^shift·[leading coefficients] (mod p^prec) for one encoded element"""
    p = data["field"].split(";")[0].split("=")[1]
    flat = [c for row in data["coeffs"] for c in row]
    nonzero = [(i, c) for i, c in enumerate(flat) if c != "0"]
    if not nonzero:
        return f"0 (mod {p}^{int(data['shift']) + int(data['prec'])})"
    shown = ", ".join(f"{c}@{i}" for i, c in nonzero[:2])
    more = f", +{len(nonzero) - 2}" if len(nonzero) > 2 else ""
    return f"{p}^{data['shift']}·[{shown}{more}] (prec {data['prec']})"


def _frame_to_text(title: str, frame: pd.DataFrame) -> str:
    if frame.empty:
        return f"{title}: (empty)"
    return f"{title}:\n{frame.to_string()}"


def _tuple_tables(result: Dict[str, Any]) -> List[str]:
    indices = result.get("tower", {}).get("indices", [])
    labels = [f"σ{i}" for i in indices]
    blocks = []
    alpha = pd.DataFrame({"α": [element_summary(a) for a in result["alpha"]]}, index=labels)
    blocks.append(_frame_to_text("alpha", alpha))
    beta = pd.DataFrame([[element_summary(b) for b in row] for row in result["beta"]],
                        index=labels, columns=labels)
    blocks.append(_frame_to_text("beta", beta))
    entries = result.get("entries")
    if entries:
        blocks.append(f"entries: {entries['tuple']} tuple vs {entries['cocycle']} cocycle")
    return blocks


def _scalar_table(title: str, data: Dict[str, Any]) -> str:
    rows = {k: json.dumps(v, sort_keys=True, ensure_ascii=False) if isinstance(v, (dict, list)) else v
            for k, v in data.items()}
    frame = pd.DataFrame({"value": list(rows.values())}, index=list(rows.keys()))
    return _frame_to_text(title, frame)


def _to_text(document: Dict[str, Any]) -> str:
    result = document.get("result", {})
    blocks = [f"schema: {document.get('schema')}",
              _scalar_table("command", document.get("command", {}))]
    rest = dict(result)
    if "alpha" in result and "beta" in result:
        blocks.extend(_tuple_tables(result))
        for key in ("alpha", "beta", "entries"):
            rest.pop(key, None)
    if "artin" in result:
        rows = result["artin"]
        frame = pd.DataFrame({"N(α_i)": [element_summary(r["element"]) for r in rows],
                              "image": [r["image"] for r in rows]},
                             index=[f"σ{r['index']}" for r in rows])
        blocks.append(_frame_to_text("artin", frame))
        rest.pop("artin")
    if "table" in result:
        table = result["table"]
        frame = pd.DataFrame({"c(g,h)": [element_summary(v) for v in table.values()]},
                             index=list(table.keys()))
        blocks.append(_frame_to_text("cocycle", frame))
        rest.pop("table")
    if rest:
        blocks.append(_scalar_table("result", rest))
    blocks.append(_scalar_table("verification", document.get("verification", {})))
    if "timing" in document:
        blocks.append(f"timing: {document['timing']['seconds']} s")
    return "\n\n".join(blocks) + "\n"


def emit(document: Dict[str, Any], fmt: str = "json") -> str:
    """Serialize a document; JSON keys are sorted so identical documents give identical bytes"""
    logger.debug(f"Emitting {fmt} document for {document.get('command', {}).get('subcommand')}")
    if fmt == "json":
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        return _to_text(document)
    raise InputError(f"unknown output format {fmt!r}, expected one of {', '.join(FORMATS)}")
