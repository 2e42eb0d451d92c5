"""Encoder configuration and its flat ``key = value`` file format.

File grammar, one setting per line::

    # comments and blank lines are ignored
    mode = binary                 # nary (default) | binary
    tie_break = reject            # alphabetical (default) | reject
    preserve_symbols = pi, g
    preserve_numbers = 3.14, 9.8
    preserve_exponents = 2, 3

Keys may appear at most once. List values are comma separated; surrounding
whitespace and empty items are dropped. Values match source text exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

from .errors import ConfigError

MODES = ("nary", "binary")
TIE_BREAKS = ("alphabetical", "reject")
_LIST_KEYS = ("preserve_symbols", "preserve_numbers", "preserve_exponents")
_KEYS = ("mode", "tie_break") + _LIST_KEYS

CONFIG_ENV = "MEXCODE_CONFIG"


@dataclass(frozen=True)
class EncoderConfig:
    mode: str = "nary"
    tie_break: str = "alphabetical"
    preserve_symbols: frozenset[str] = field(default_factory=frozenset)
    preserve_numbers: frozenset[str] = field(default_factory=frozenset)
    preserve_exponents: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.tie_break not in TIE_BREAKS:
            raise ConfigError(f"tie_break must be one of {TIE_BREAKS}, got {self.tie_break!r}")
        for key in _LIST_KEYS:
            object.__setattr__(self, key, frozenset(getattr(self, key)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "tie_break": self.tie_break,
            **{key: sorted(getattr(self, key)) for key in _LIST_KEYS},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EncoderConfig":
        unknown = set(data) - set(_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def parse_config(text: str) -> EncoderConfig:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key in _LIST_KEYS:
            values[key] = frozenset(v.strip() for v in value.split(",") if v.strip())
        else:
            values[key] = value
    return EncoderConfig(**values)


def load_config(path: str | os.PathLike | None = None) -> EncoderConfig:
    """Read a config file; with no path, fall back to ``$MEXCODE_CONFIG`` or defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return EncoderConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
