from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Any, List, Type, TypeVar

import yaml
from pydantic import BaseModel

from core.utils.paths import CONFIG_DIR

log = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

_RUN_LENGTH = re.compile(r"^(\d+)[xX](\d+)$")


def load_yaml(file, key=None):
    """Loads and parses a YAML file from the CONFIG_DIR.

    Args:
        file (str): The base filename (without extension) of the YAML file to load.
        key (str, optional): Returns only this top-level key from the YAML data.

    Returns:
        dict | Any: Parsed YAML contents, or the sub-dictionary at `key` if specified.
            An empty dict when the file is missing or malformed.
    """
    path = CONFIG_DIR / f"{file}.yaml"
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        log.error(f"Error loading {path}: {e}")
        return {}
    return data.get(key, {}) if key else data


def parse_lengths(text: str | None) -> List[int]:
    """Parses a length list from the command line.

    Accepts comma lists (`3,3,4`) and run-length items (`38x221` = 221 copies of 38),
    freely mixed (`38x3,5`). Empty or None gives an empty list.

    Args:
        text (str | None): The raw flag value.

    Returns:
        list[int]: The lengths in the order given.

    Raises:
        ValueError: If an item is neither an integer nor `<length>x<count>`.
    """
    if not text:
        return []
    values: List[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        match = _RUN_LENGTH.match(item)
        if match:
            values.extend([int(match.group(1))] * int(match.group(2)))
        elif item.lstrip("-").isdigit():
            values.append(int(item))
        else:
            raise ValueError(f"not a length or run-length item: '{item}'")
    return values


def dump_json(payload: Any) -> str:
    """Serializes a payload to canonical JSON (sorted keys, fixed separators).

    Pydantic models are dumped through `model_dump(mode="json", by_alias=True)` first, so identical
    objects always give byte-identical text.

    Args:
        payload (Any): A pydantic model or any JSON-compatible value.

    Returns:
        str: The canonical JSON text, newline-terminated.
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=None, separators=(",", ":")) + "\n"


def save_json(payload: Any, path: Path | str) -> Path:
    """Writes a payload as canonical UTF-8 JSON.

    Args:
        payload (Any): A pydantic model or any JSON-compatible value.
        path (Path | str): Destination file; parent directories are created.

    Returns:
        Path: The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_json(payload))
    log.info(f"Saved JSON output to {path}")
    return path


def parse_json(json_string: str):
    """Attempts to parse a string as JSON, tolerating fenced blocks.

    Args:
        json_string (str): A raw string potentially containing JSON content.

    Returns:
        dict | list | None: Parsed JSON object (dict or list), or None on failure.
    """
    try:
        text = json_string.strip().strip("`")
        if text.startswith("json"):
            text = text[4:].strip()
        return json.loads(text)
    except (json.JSONDecodeError, TypeError, AttributeError):
        return None


def validate_output(content: Any, schema: Type[ModelT]) -> ModelT:
    """Validates a JSON document against a pydantic schema.

    Args:
        content (str | dict | BaseModel): The document. Strings are parsed as JSON first.
        schema (type[BaseModel]): The expected pydantic model class.

    Returns:
        BaseModel: A validated instance of the provided schema.

    Raises:
        pydantic.ValidationError: If the document does not match the schema.
        ValueError: If a string is not valid JSON.
    """
    if isinstance(content, schema):
        return content
    if isinstance(content, str):
        parsed = parse_json(content)
        if parsed is None:
            raise ValueError("document is not valid JSON")
        content = parsed
    if isinstance(content, BaseModel):
        content = content.model_dump(mode="json", by_alias=True)
    return schema.model_validate(content)


def load_json(path: Path | str) -> Any:
    """Reads a UTF-8 JSON file.

    Args:
        path (Path | str): File to read.

    Returns:
        Any: The decoded JSON value.
    """
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
