"""
Rendering of command results as JSON, CSV or plain-text tables.
"""
import json
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel

FORMATS = ("json", "csv", "text")


def to_payload(result: Any) -> Any:
    """pydantic models and containers of them as plain JSON-compatible data."""
    if isinstance(result, BaseModel):
        return result.model_dump(mode="json", by_alias=True)
    if isinstance(result, (list, tuple)):
        return [to_payload(r) for r in result]
    if isinstance(result, dict):
        return {k: to_payload(v) for k, v in result.items()}
    return result


def _cell(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return value


def to_frame(payload: Any, rows_key: Optional[str] = None) -> pd.DataFrame:
    """
    Tabular view of a payload.

    Args:
        payload: A dict, or a list of dicts
        rows_key: Key of the dict holding the list of rows; without it a dict becomes
            a two-column key/value table
    """
    if isinstance(payload, list):
        rows: List[Dict[str, Any]] = [p if isinstance(p, dict) else {"value": p} for p in payload]
    elif rows_key is not None and isinstance(payload.get(rows_key), list):
        rows = [r if isinstance(r, dict) else {rows_key: r} for r in payload[rows_key]]
        # classifications carry per-polynomial case labels alongside
        labels = payload.get("cases")
        if rows_key == "polynomials" and labels:
            for row, label in zip(rows, labels):
                row["case"] = label
    else:
        rows = [{"key": k, "value": v} for k, v in payload.items()]
    frame = pd.DataFrame(rows)
    for column in frame.columns:
        frame[column] = frame[column].map(_cell)
    return frame


def render(result: Any, fmt: str = "json", rows_key: Optional[str] = None) -> str:
    payload = to_payload(result)
    if fmt == "json":
        return json.dumps(payload, indent=2)
    frame = to_frame(payload, rows_key)
    if fmt == "csv":
        return frame.to_csv(index=False).rstrip("\n")
    if frame.empty:
        return "(no rows)"
    return frame.to_string(index=False)
