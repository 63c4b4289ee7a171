"""Premise/hypothesis construction from joined node texts.

id1's cleaned text becomes the premise, id2's the hypothesis. Each side
is whitespace-tokenized and head-truncated to max_tokens independently.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .dataset import PairRecord
from .errors import ParseError, ValidationError
from .textclean import WHITESPACE_CHARS

_WS_SPLIT = re.compile("[" + re.escape(WHITESPACE_CHARS) + "]+")


@dataclass(frozen=True)
class PairConfig:
    max_tokens: int = 128

    def __post_init__(self):
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


@dataclass(frozen=True)
class SentencePair:
    pair_id: str
    premise_tokens: tuple[str, ...]
    hypothesis_tokens: tuple[str, ...]
    label: int | None = None


def tokenize(text: str) -> list[str]:
    """Split on maximal whitespace runs; never yields empty tokens."""
    return [t for t in _WS_SPLIT.split(text) if t]


def build_pair(
    pair: PairRecord,
    premise_text: str,
    hypothesis_text: str,
    config: PairConfig | None = None,
) -> SentencePair:
    if config is None:
        config = PairConfig()
    k = config.max_tokens
    return SentencePair(
        pair_id=pair.pair_id,
        premise_tokens=tuple(tokenize(premise_text)[:k]),
        hypothesis_tokens=tuple(tokenize(hypothesis_text)[:k]),
        label=pair.label,
    )


def write_prepared(pairs: Iterable[SentencePair], stream: IO) -> int:
    """One record per line: pair_id, label or `-`, premise, hypothesis (tabs)."""
    n = 0
    for sp in pairs:
        label = "-" if sp.label is None else str(sp.label)
        stream.write(
            f"{sp.pair_id}\t{label}\t{' '.join(sp.premise_tokens)}"
            f"\t{' '.join(sp.hypothesis_tokens)}\n"
        )
        n += 1
    return n


def read_prepared(stream: IO) -> Iterator[SentencePair]:
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if line == "":
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}", line_no)
        pair_id, label_str, premise, hypothesis = fields
        if label_str == "-":
            label: int | None = None
        elif label_str in ("0", "1"):
            label = int(label_str)
        else:
            raise ValidationError(f"line {line_no}: label must be 0, 1 or -, got {label_str!r}")
        yield SentencePair(
            pair_id,
            tuple(tokenize(premise)),
            tuple(tokenize(hypothesis)),
            label,
        )
