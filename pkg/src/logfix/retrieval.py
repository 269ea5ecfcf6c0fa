"""BM25 retrieval of historical logging changes to use as repair exemplars."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .model import DefectLabel, LogCentricChange, LoggingStatement
from .tokenization import split_tokens

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75

# Defect types whose fixes tend to follow project-local conventions are
# retrieved from the target's own project only; the semantic types may
# borrow patterns from any project.
SAME_PROJECT_LABELS = frozenset(
    {DefectLabel.TEMPORAL, DefectLabel.READABILITY})


class UnknownDocument(KeyError):
    """The document id is not in the index."""


class EmptyPool(LookupError):
    """No candidate changes remain after scoping; callers fall back to
    zero-exemplar prompting."""


@dataclass
class Bm25Index:
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    doc_ids: list[str] = field(default_factory=list)
    doc_tokens: list[Counter] = field(default_factory=list)
    doc_lengths: list[int] = field(default_factory=list)
    doc_freq: dict[str, int] = field(default_factory=dict)
    avg_length: float = 0.0
    _position: dict[str, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.doc_ids)

    def idf(self, token: str) -> float:
        df = self.doc_freq.get(token, 0)
        return math.log((self.size - df + 0.5) / (df + 0.5) + 1.0)


def query_tokens(text: str) -> list[str]:
    """Tokenization used on both the indexed documents and queries."""
    return split_tokens(text)


def build_index(lccs: list[LogCentricChange], k1: float = DEFAULT_K1,
                b: float = DEFAULT_B) -> Bm25Index:
    """Index every change by its before-statement text (the query side is a
    defective statement, so symmetry puts like with like)."""
    index = Bm25Index(k1=k1, b=b)
    total = 0
    for change in lccs:
        tokens = query_tokens(change.before.raw_text)
        counts = Counter(tokens)
        doc_id = change.change_id
        index._position[doc_id] = len(index.doc_ids)
        index.doc_ids.append(doc_id)
        index.doc_tokens.append(counts)
        index.doc_lengths.append(len(tokens))
        total += len(tokens)
        for token in counts:
            index.doc_freq[token] = index.doc_freq.get(token, 0) + 1
    index.avg_length = total / len(index.doc_ids) if index.doc_ids else 0.0
    return index


def bm25_score(query: str | list[str], doc_id: str, index: Bm25Index) -> float:
    """Okapi BM25 score of one document for the query; every query-token
    occurrence contributes its term's weight."""
    if doc_id not in index._position:
        raise UnknownDocument(doc_id)
    position = index._position[doc_id]
    tokens = query_tokens(query) if isinstance(query, str) else query
    counts = index.doc_tokens[position]
    length = index.doc_lengths[position]
    avg = index.avg_length or 1.0
    norm = index.k1 * (1.0 - index.b + index.b * length / avg)
    score = 0.0
    for token in tokens:
        tf = counts.get(token, 0)
        if tf == 0:
            continue
        score += index.idf(token) * tf * (index.k1 + 1.0) / (tf + norm)
    return score


def select_exemplars(
    target: LoggingStatement,
    label: DefectLabel,
    lccs: list[LogCentricChange],
    k: int = 3,
    *,
    project_id: str | None = None,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> list[LogCentricChange]:
    """Top-k changes most similar to the target statement.

    TEMPORAL and READABILITY targets only see changes from `project_id`
    (their fixes are project-convention-bound); the other defect types rank
    the whole corpus. Ties break by commit id, then change id.
    """
    if label is DefectLabel.NON_DEFECT:
        raise ValueError("exemplar selection needs a defect label")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if label in SAME_PROJECT_LABELS:
        if project_id is None:
            raise ValueError(
                f"{label.value} scoping needs the target's project_id")
        pool = [c for c in lccs if c.project_id == project_id]
    else:
        pool = list(lccs)
    if not pool:
        raise EmptyPool(
            f"no candidate changes in scope for {label.value}")
    index = build_index(pool, k1=k1, b=b)
    tokens = query_tokens(target.raw_text)
    scored = [
        (bm25_score(tokens, change.change_id, index), change)
        for change in pool
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1].commit_id,
                                  pair[1].change_id))
    return [change for _, change in scored[:k]]
