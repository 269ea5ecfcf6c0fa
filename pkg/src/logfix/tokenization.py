"""Code-aware text segmentation shared by the detector and retrieval.

Splits on whitespace and punctuation, then splits identifiers into
camelCase / snake_case / letter-digit sub-words, lowercased. A sentinel
token is inserted before fully-uppercase words so casing abuse survives the
lowercasing (mean pooling only sees the bag of tokens).
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass
from typing import Iterable

CAPS_MARKER = "<caps>"

_WORD_RE = re.compile(r"[A-Za-z0-9_]+")
_SUBWORD_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+|[0-9]+")


def split_subwords(word: str) -> list[str]:
    """camelCase / snake_case / digit-boundary split, lowercased."""
    out: list[str] = []
    for chunk in word.split("_"):
        for m in _SUBWORD_RE.finditer(chunk):
            out.append(m.group().lower())
    return out


def split_tokens(text: str) -> list[str]:
    """Segment arbitrary source text into sub-word and punctuation tokens."""
    tokens: list[str] = []
    pos = 0
    for m in _WORD_RE.finditer(text):
        for ch in text[pos:m.start()]:
            if not ch.isspace():
                tokens.append(ch)
        word = m.group()
        if len(word) >= 2 and word.isupper():
            tokens.append(CAPS_MARKER)
        tokens.extend(split_subwords(word))
        pos = m.end()
    for ch in text[pos:]:
        if not ch.isspace():
            tokens.append(ch)
    return tokens


def _bucket_hash(token: str) -> int:
    # crc32 rather than hash(): stable across processes and runs.
    return zlib.crc32(token.encode("utf-8"))


@dataclass(frozen=True)
class Vocabulary:
    """Token-to-id map plus a set of overflow buckets for unseen tokens."""

    token_to_id: dict[str, int]
    oov_buckets: int
    max_tokens: int = 1024

    @property
    def size(self) -> int:
        """Total id space: known tokens followed by the OOV buckets."""
        return len(self.token_to_id) + self.oov_buckets

    def id_of(self, token: str) -> int:
        known = self.token_to_id.get(token)
        if known is not None:
            return known
        return len(self.token_to_id) + _bucket_hash(token) % self.oov_buckets


@dataclass(frozen=True)
class TokenSequence:
    ids: tuple[int, ...]
    truncated: bool


def build_vocabulary(texts: Iterable[str], max_size: int = 4096,
                     oov_buckets: int = 32, max_tokens: int = 1024) -> Vocabulary:
    """Frequency-ranked vocabulary over the segmentation of `texts`.

    Ties break alphabetically so the same corpus always yields the same map.
    """
    counts: dict[str, int] = {}
    for text in texts:
        for tok in split_tokens(text):
            counts[tok] = counts.get(tok, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:max_size]
    return Vocabulary(
        token_to_id={tok: i for i, (tok, _) in enumerate(ranked)},
        oov_buckets=oov_buckets,
        max_tokens=max_tokens,
    )


def tokenize(text: str, vocab: Vocabulary, max_tokens: int | None = None) -> TokenSequence:
    """Segment, map through the vocabulary, and truncate to max_tokens."""
    limit = vocab.max_tokens if max_tokens is None else max_tokens
    toks = split_tokens(text)
    truncated = len(toks) > limit
    return TokenSequence(
        ids=tuple(vocab.id_of(t) for t in toks[:limit]),
        truncated=truncated,
    )
