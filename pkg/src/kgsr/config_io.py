"""``key = value`` configuration files.

Keys are the configuration field names (``M e omega Omega B0 alpha PhiB
lambda xi1 xi2 mode``); ``#`` starts a comment.  Missing keys default to
``M = e = alpha = 1``, ``mode = linear`` and zero for the rest.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

from .model import CONFIG_KEYS, Mode, PhysicalConfig

__all__ = ["ConfigError", "parse_config", "load_config", "format_config", "apply_overrides"]


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _convert(key: str, raw: str, line: int | None):
    if key == "mode":
        try:
            return Mode(raw.strip().lower())
        except ValueError:
            raise ConfigError(f"mode must be 'linear' or 'cornell', got {raw!r}", line) from None
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {raw!r}", line) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {raw!r}", line)
    if key == "alpha" and not 0.0 < value <= 1.0:
        raise ConfigError(f"alpha = {value!r} is out of range (0, 1]", line)
    if key == "omega" and value < 0.0:
        raise ConfigError(f"omega = {value!r} must be nonnegative", line)
    return value


def _assign(values: dict, key: str, raw: str, line: int | None) -> None:
    key = key.strip()
    if key not in CONFIG_KEYS:
        raise ConfigError(f"unknown key {key!r}", line)
    values[CONFIG_KEYS[key]] = _convert(key, raw.strip(), line)


def parse_config(text: str) -> PhysicalConfig:
    values: dict = {}
    seen: set[str] = set()
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", number)
        key, value = line.split("=", 1)
        if key.strip() in seen:
            raise ConfigError(f"duplicate key {key.strip()!r}", number)
        seen.add(key.strip())
        _assign(values, key, value, number)
    return PhysicalConfig(**values)


def load_config(path: str | Path) -> PhysicalConfig:
    # newline="" keeps CR characters out of the way of splitlines() handling
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_config(fh.read())


def apply_overrides(cfg: PhysicalConfig, assignments: Iterable[str]) -> PhysicalConfig:
    """Apply ``key=value`` strings (as given to ``--set``) on top of ``cfg``."""
    values: dict = {}
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        _assign(values, key, value, None)
    return cfg.with_values(**values) if values else cfg


def format_config(cfg: PhysicalConfig) -> str:
    lines = []
    for key, attr in CONFIG_KEYS.items():
        value = getattr(cfg, attr)
        lines.append(f"{key} = {value.value if key == 'mode' else repr(value)}")
    return "\n".join(lines) + "\n"
