import hashlib
import json
from typing import Any

from pydantic import BaseModel


def hash_model(data: BaseModel | dict[str, Any] | list[Any]) -> str:
    """
    Calculate a deterministic hash of a model or of plain JSON data.

    The hash is calculated by:
    1. If input is a BaseModel, converting it to a dictionary
    2. Converting the data to a JSON string with sorted keys
    3. Computing a SHA-256 hash of the JSON string

    Args:
        data: A BaseModel, dictionary or list to hash

    Returns:
        A hexadecimal string representation of the hash
    """
    payload = data.model_dump(mode="json") if isinstance(data, BaseModel) else data
    json_str = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(json_str.encode("utf-8")).hexdigest()


def split_pipe_fields(line: str) -> list[str]:
    """Split a `|`-delimited line, trimming every field."""
    return [field.strip() for field in line.split("|")]
