"""
Experiment config files: flat `key = value` lines, `#` comments, dotted keys
for nested sections (`solver.dt_min = 1e-18`). emit() writes every key in a
fixed order with 17-significant-digit floats, so emit(parse(text)) is the
normalized form of text.
"""
import hashlib
import os
from typing import Any, Dict

from pydantic import BaseModel, ValidationError

from app.config.constants import FLOAT_FORMAT
from app.domain.errors import ConfigError
from app.domain.schemas import ExperimentConfig


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return value[1:-1]
    return value


def parse_pairs(text: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = _unquote(value)
    return pairs


def nest(pairs: Dict[str, Any]) -> Dict[str, Any]:
    """{'solver.dt_min': v} -> {'solver': {'dt_min': v}}."""
    nested: Dict[str, Any] = {}
    for key, value in pairs.items():
        parts = key.split(".")
        node = nested
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"Key {key!r} clashes with a scalar setting")
        node[parts[-1]] = value
    return nested


def build_config(pairs: Dict[str, Any]) -> ExperimentConfig:
    known = set(ExperimentConfig.config_keys())
    unknown = sorted(k for k in pairs if k not in known)
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
    try:
        return ExperimentConfig.model_validate(nest(pairs))
    except ValidationError as e:
        raise ConfigError(f"Invalid config: {e}") from e


def parse_config(text: str) -> ExperimentConfig:
    return build_config(parse_pairs(text))


def load_config(path: str) -> ExperimentConfig:
    if not os.path.exists(path):
        raise ConfigError(f"Config file not found: {path}")
    with open(path) as fh:
        return parse_config(fh.read())


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    if isinstance(value, (list, tuple)):
        return ",".join(_format(v) for v in value)
    return f'"{value}"'


def _flatten(model: BaseModel, prefix: str = ""):
    for name in type(model).model_fields:
        value = getattr(model, name)
        if isinstance(value, BaseModel):
            yield from _flatten(value, f"{prefix}{name}.")
        elif value is not None:
            yield f"{prefix}{name}", value


def emit_config(config: ExperimentConfig) -> str:
    return "".join(f"{key} = {_format(value)}\n" for key, value in _flatten(config))


def normalize_config_text(text: str) -> str:
    return emit_config(parse_config(text))


def config_hash(config: ExperimentConfig) -> str:
    """First 12 hex digits of sha256 over the normalized config (output directory excluded)."""
    body = emit_config(config.model_copy(update={"output": None}))
    return hashlib.sha256(body.encode("utf-8")).hexdigest()[:12]


def flat_pairs(config: ExperimentConfig) -> Dict[str, str]:
    """Dotted key -> value text, the form parse_pairs() produces."""
    return {key: _unquote(_format(value)) for key, value in _flatten(config)}
