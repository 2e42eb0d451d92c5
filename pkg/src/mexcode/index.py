"""Code-keyed corpus index with exact and edit-distance lookup.

Corpus files are UTF-8 JSON Lines, one record per line::

    {"id": "alg-12", "expression": "(x+y)^2", "metadata": {"grade": "9"}}

``metadata`` is optional and maps strings to strings. Blank lines are skipped.

Index files are a single JSON document::

    {
      "format": "mexcode-index/1",
      "config": {"mode": ..., "tie_break": ..., "preserve_symbols": [...], ...},
      "entries": [{"id": ..., "expression": ..., "metadata": {...}}, ...],
      "by_code": {"<code>": ["<id>", ...], ...}
    }

Entries are sorted by id, id lists are sorted, keys are sorted, and the file
is written with two-space indentation, so equal indexes are equal bytes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .config import EncoderConfig
from .encode import code_distance, encode
from .errors import (
    ConfigMismatch,
    DuplicateId,
    EntryParseError,
    IndexBuildError,
    IndexFormatError,
    MexcodeError,
)

FORMAT_VERSION = "mexcode-index/1"


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    expression: str
    metadata: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"id": self.id, "expression": self.expression, "metadata": dict(self.metadata)}

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusEntry":
        if not isinstance(data, dict):
            raise IndexFormatError("record must be an object")
        entry_id, expression = data.get("id"), data.get("expression")
        metadata = data.get("metadata") or {}
        if not isinstance(entry_id, str) or not entry_id:
            raise IndexFormatError("record needs a non-empty string 'id'")
        if not isinstance(expression, str):
            raise IndexFormatError(f"record {entry_id!r} needs a string 'expression'")
        if not isinstance(metadata, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in metadata.items()
        ):
            raise IndexFormatError(f"record {entry_id!r}: metadata must map strings to strings")
        return cls(entry_id, expression, metadata)


@dataclass(frozen=True)
class CorpusIndex:
    config: EncoderConfig
    entries: dict[str, CorpusEntry]
    by_code: dict[str, tuple[str, ...]]

    def __len__(self) -> int:
        return len(self.entries)


def read_corpus(path: str | os.PathLike) -> list[CorpusEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                entries.append(CorpusEntry.from_dict(json.loads(line)))
            except json.JSONDecodeError as exc:
                raise IndexFormatError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            except IndexFormatError as exc:
                raise IndexFormatError(f"{path}:{lineno}: {exc}") from exc
    return entries


def index_build(corpus: Iterable[CorpusEntry], config: EncoderConfig | None = None) -> CorpusIndex:
    """Encode every entry and group ids by code.

    All problems are collected before failing, and raised together as
    IndexBuildError whose ``errors`` holds DuplicateId and EntryParseError
    instances.
    """
    config = config or EncoderConfig()
    entries: dict[str, CorpusEntry] = {}
    grouped: dict[str, list[str]] = {}
    errors: list[MexcodeError] = []
    for entry in corpus:
        if entry.id in entries:
            errors.append(DuplicateId(entry.id))
            continue
        entries[entry.id] = entry
        try:
            code = encode(entry.expression, config).code
        except MexcodeError as exc:
            errors.append(EntryParseError(entry.id, exc))
            continue
        grouped.setdefault(code, []).append(entry.id)
    if errors:
        raise IndexBuildError(errors)
    by_code = {code: tuple(sorted(ids)) for code, ids in sorted(grouped.items())}
    return CorpusIndex(config, dict(sorted(entries.items())), by_code)


def index_query(
    index: CorpusIndex,
    expression: str,
    k: int = 10,
    config: EncoderConfig | None = None,
) -> list[tuple[str, Fraction]]:
    """Rank entries against ``expression``: exact code matches, then nearest codes.

    Results are ``(id, distance)`` pairs ordered by distance, then id.
    Passing a ``config`` that differs from the index's raises ConfigMismatch.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if config is not None and config != index.config:
        raise ConfigMismatch("query config differs from the config the index was built with")
    code = encode(expression, index.config).code
    ranked = [(entry_id, Fraction(0)) for entry_id in index.by_code.get(code, ())]
    if len(ranked) >= k:
        return ranked[:k]
    rest = [
        (entry_id, code_distance(code, other))
        for other, ids in index.by_code.items()
        if other != code
        for entry_id in ids
    ]
    rest.sort(key=lambda pair: (pair[1], pair[0]))
    return (ranked + rest)[:k]


def index_to_dict(index: CorpusIndex) -> dict:
    return {
        "format": FORMAT_VERSION,
        "config": index.config.to_dict(),
        "entries": [e.to_dict() for e in index.entries.values()],
        "by_code": {code: list(ids) for code, ids in index.by_code.items()},
    }


def save_index(index: CorpusIndex, path: str | os.PathLike) -> None:
    text = json.dumps(index_to_dict(index), ensure_ascii=False, indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def load_index(path: str | os.PathLike) -> CorpusIndex:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"{path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict) or data.get("format") != FORMAT_VERSION:
        raise IndexFormatError(f"{path}: not a {FORMAT_VERSION} document")
    try:
        config = EncoderConfig.from_dict(data["config"])
        entries = {e.id: e for e in map(CorpusEntry.from_dict, data["entries"])}
        by_code = {code: tuple(ids) for code, ids in data["by_code"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise IndexFormatError(f"{path}: missing or malformed field ({exc})") from exc
    listed = [i for ids in by_code.values() for i in ids]
    if sorted(listed) != sorted(entries) or len(set(listed)) != len(listed):
        raise IndexFormatError(f"{path}: by_code does not list every entry exactly once")
    return CorpusIndex(config, dict(sorted(entries.items())), dict(sorted(by_code.items())))
