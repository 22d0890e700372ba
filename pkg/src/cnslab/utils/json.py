import dataclasses
import json
import math
from datetime import date, datetime
from typing import Any

import numpy as np
from pydantic import BaseModel

from ..ring import QuadInt, format_quadint


def make_json_serializable(obj: Any) -> Any:
    """Recursively convert ring elements, models and numpy scalars to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(key): make_json_serializable(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [make_json_serializable(item) for item in obj]
    elif isinstance(obj, QuadInt):
        return format_quadint(obj)
    elif isinstance(obj, BaseModel):
        return make_json_serializable(obj.model_dump())
    elif hasattr(obj, "to_json"):
        return make_json_serializable(obj.to_json())
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return make_json_serializable({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)})
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return make_json_serializable(float(obj))
    elif isinstance(obj, float) and not math.isfinite(obj):
        return None
    elif isinstance(obj, datetime):
        return obj.isoformat()
    elif isinstance(obj, date):
        return obj.strftime("%Y-%m-%d")
    return obj


def dumps(obj: Any) -> str:
    """Compact, key-ordered JSON so identical inputs print identical bytes."""
    return json.dumps(make_json_serializable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
