"""Evaluation metrics: detection P/R/F1-macro, BLEU-K, ROUGE-K/L,
variable-set P/R/F1, and the improvement coefficient."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .model import (
    LABELS,
    DefectLabel,
    EvaluationRecord,
    LoggingStatement,
)
from .tokenization import split_tokens


class LengthMismatch(ValueError):
    """Prediction and gold sequences differ in length (or are empty)."""


class EmptyReference(ValueError):
    """A text-similarity metric was given an empty reference."""


class DegenerateOrigin(ArithmeticError):
    """IC is undefined: the original already scored 1 and the update fell."""


# ---------------------------------------------------------------------------
# Detection metrics
# ---------------------------------------------------------------------------
@dataclass
class ConfusionTally:
    tp: dict[DefectLabel, int] = field(default_factory=dict)
    fp: dict[DefectLabel, int] = field(default_factory=dict)
    fn: dict[DefectLabel, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label in LABELS:
            self.tp.setdefault(label, 0)
            self.fp.setdefault(label, 0)
            self.fn.setdefault(label, 0)

    @classmethod
    def from_pairs(cls, preds: list[DefectLabel],
                   golds: list[DefectLabel]) -> "ConfusionTally":
        tally = cls()
        for pred, gold in zip(preds, golds):
            if pred is gold:
                tally.tp[gold] += 1
            else:
                tally.fp[pred] += 1
                tally.fn[gold] += 1
        return tally


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class DetectionReport:
    per_class: dict[DefectLabel, ClassMetrics]
    f1_macro: float
    tally: ConfusionTally


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def detection_metrics(preds: list[DefectLabel],
                      golds: list[DefectLabel]) -> DetectionReport:
    """Per-class precision/recall/F1 plus the unweighted macro over all
    five classes (absent classes score zero rather than being skipped)."""
    if len(preds) != len(golds) or not golds:
        raise LengthMismatch(
            f"{len(preds)} predictions vs {len(golds)} gold labels")
    tally = ConfusionTally.from_pairs(preds, golds)
    per_class: dict[DefectLabel, ClassMetrics] = {}
    for label in LABELS:
        tp, fp, fn = tally.tp[label], tally.fp[label], tally.fn[label]
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[label] = ClassMetrics(precision, recall, f1)
    macro = sum(m.f1 for m in per_class.values()) / len(LABELS)
    return DetectionReport(per_class=per_class, f1_macro=macro, tally=tally)


def f1_macro(preds: list[DefectLabel], golds: list[DefectLabel]) -> float:
    return detection_metrics(preds, golds).f1_macro


# ---------------------------------------------------------------------------
# Text-similarity metrics
# ---------------------------------------------------------------------------
def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_k(candidate: list[str], reference: list[str], k: int) -> float:
    """Sentence-level BLEU with brevity penalty; zero n-gram matches for
    n > 1 get add-one smoothing so short identical texts still score 1."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not reference:
        raise EmptyReference("reference token sequence is empty")
    if not candidate:
        return 0.0
    log_sum = 0.0
    for n in range(1, k + 1):
        cand_counts = _ngrams(candidate, n)
        ref_counts = _ngrams(reference, n)
        total = sum(cand_counts.values())
        clipped = sum(min(count, ref_counts[gram])
                      for gram, count in cand_counts.items())
        if n == 1:
            precision = _safe_div(clipped, total)
        elif clipped == 0:
            precision = 1.0 / (total + 1)
        else:
            precision = clipped / total
        if precision == 0.0:
            return 0.0
        log_sum += math.log(precision)
    c, r = len(candidate), len(reference)
    brevity = 1.0 if c >= r else math.exp(1.0 - r / c)
    return brevity * math.exp(log_sum / k)


def rouge_k(candidate: list[str], reference: list[str], k: int) -> float:
    """F1 over shared k-grams. When neither side has any k-gram (texts
    shorter than k) the score is 1 so identity is preserved."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not reference:
        raise EmptyReference("reference token sequence is empty")
    cand_counts = _ngrams(candidate, k)
    ref_counts = _ngrams(reference, k)
    cand_total = sum(cand_counts.values())
    ref_total = sum(ref_counts.values())
    if cand_total == 0 and ref_total == 0:
        return 1.0
    overlap = sum(min(count, ref_counts[gram])
                  for gram, count in cand_counts.items())
    precision = _safe_div(overlap, cand_total)
    recall = _safe_div(overlap, ref_total)
    return _safe_div(2 * precision * recall, precision + recall)


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def rouge_l(candidate: list[str], reference: list[str]) -> float:
    """F1 built from the longest-common-subsequence length."""
    if not reference:
        raise EmptyReference("reference token sequence is empty")
    if not candidate:
        return 0.0
    lcs = _lcs_length(candidate, reference)
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return _safe_div(2 * precision * recall, precision + recall)


# ---------------------------------------------------------------------------
# Variable-set metrics
# ---------------------------------------------------------------------------
_WS_RE = re.compile(r"\s+")


def _normalize_var(text: str) -> str:
    return _WS_RE.sub(" ", text.strip())


@dataclass(frozen=True)
class VariableSets:
    updated: frozenset[str]
    truth: frozenset[str]

    @classmethod
    def of(cls, updated: list[str] | tuple[str, ...],
           truth: list[str] | tuple[str, ...]) -> "VariableSets":
        return cls(
            updated=frozenset(_normalize_var(v) for v in updated),
            truth=frozenset(_normalize_var(v) for v in truth),
        )


def variable_prf(sets: VariableSets) -> tuple[float, float, float]:
    """Exact-string precision/recall/F1 over variable sets.

    Both sets empty counts as a perfect (1,1,1); an empty side against a
    non-empty one scores 0 for the undefined ratio.
    """
    if not sets.updated and not sets.truth:
        return (1.0, 1.0, 1.0)
    overlap = len(sets.updated & sets.truth)
    precision = _safe_div(overlap, len(sets.updated))
    recall = _safe_div(overlap, len(sets.truth))
    f1 = _safe_div(2 * precision * recall, precision + recall)
    return (precision, recall, f1)


# ---------------------------------------------------------------------------
# Improvement coefficient
# ---------------------------------------------------------------------------
def improvement_coefficient(m_origin: float, m_updated: float) -> float:
    """Fraction of the maximum possible improvement that was achieved:
    (m_updated - m_origin) / (1 - m_origin). Negative for regressions."""
    if m_origin > 1.0:
        raise ValueError(f"m_origin must be <= 1, got {m_origin}")
    if m_origin == 1.0:
        if m_updated == 1.0:
            return 0.0
        raise DegenerateOrigin(
            f"origin already scored 1.0 but update scored {m_updated}")
    return (m_updated - m_origin) / (1.0 - m_origin)


def origin_for(m_updated: float, ic: float) -> float:
    """Inverse of improvement_coefficient in its first argument: the origin
    score that yields `ic` given the updated score."""
    if ic == 1.0:
        raise ValueError("ic = 1 does not determine a unique origin")
    return (m_updated - ic) / (1.0 - ic)


# ---------------------------------------------------------------------------
# Update evaluation battery
# ---------------------------------------------------------------------------
UPDATE_METRIC_NAMES: tuple[str, ...] = (
    "bleu-1", "bleu-2", "bleu-4",
    "rouge-1", "rouge-2", "rouge-l",
    "var-precision", "var-recall", "var-f1",
)


def static_text_tokens(stmt: LoggingStatement) -> list[str]:
    """Static text with placeholder markers cut out, segmented into
    lowercase sub-word tokens."""
    text = stmt.static_text
    pieces: list[str] = []
    pos = 0
    for ph in sorted(stmt.placeholders, key=lambda p: p.offset):
        end = ph.offset + len(ph.text)
        if ph.offset > pos:
            pieces.append(text[pos:ph.offset])
        pos = max(pos, end)
    pieces.append(text[pos:])
    return split_tokens(" ".join(piece for piece in pieces if piece))


def _ic_or_none(m_origin: float, m_updated: float) -> float | None:
    try:
        return improvement_coefficient(m_origin, m_updated)
    except DegenerateOrigin:
        return None


def evaluate_update(
    original: LoggingStatement,
    updated: LoggingStatement | None,
    truth: LoggingStatement,
) -> list[EvaluationRecord]:
    """Score an update against ground truth: six static-text metrics plus
    three variable-set metrics, each with before/after values and IC.

    `updated=None` (no rewrite produced) scores the update as the unchanged
    original.
    """
    if updated is None:
        updated = original
    ref = static_text_tokens(truth)
    orig_tokens = static_text_tokens(original)
    upd_tokens = static_text_tokens(updated)
    records: list[EvaluationRecord] = []

    def text_metric(name: str, fn) -> None:
        m_origin = fn(orig_tokens, ref)
        m_updated = fn(upd_tokens, ref)
        records.append(EvaluationRecord(
            metric_name=name, m_origin=m_origin, m_updated=m_updated,
            ic=_ic_or_none(m_origin, m_updated)))

    text_metric("bleu-1", lambda c, r: bleu_k(c, r, 1))
    text_metric("bleu-2", lambda c, r: bleu_k(c, r, 2))
    text_metric("bleu-4", lambda c, r: bleu_k(c, r, 4))
    text_metric("rouge-1", lambda c, r: rouge_k(c, r, 1))
    text_metric("rouge-2", lambda c, r: rouge_k(c, r, 2))
    text_metric("rouge-l", rouge_l)

    origin_prf = variable_prf(VariableSets.of(original.variables,
                                              truth.variables))
    updated_prf = variable_prf(VariableSets.of(updated.variables,
                                               truth.variables))
    for name, m_origin, m_updated in zip(
            ("var-precision", "var-recall", "var-f1"),
            origin_prf, updated_prf):
        records.append(EvaluationRecord(
            metric_name=name, m_origin=m_origin, m_updated=m_updated,
            ic=_ic_or_none(m_origin, m_updated)))
    return records


def aggregate_update_records(
    per_sample: list[list[EvaluationRecord]],
) -> dict[str, dict[str, float | None]]:
    """Mean before/after per metric, plus both IC variants: the mean of
    per-sample ICs and the IC of the mean scores (headline)."""
    out: dict[str, dict[str, float | None]] = {}
    for name in UPDATE_METRIC_NAMES:
        rows = [rec for records in per_sample for rec in records
                if rec.metric_name == name]
        if not rows:
            continue
        mean_origin = sum(r.m_origin for r in rows) / len(rows)
        mean_updated = sum(r.m_updated for r in rows) / len(rows)
        ics = [r.ic for r in rows if r.ic is not None]
        out[name] = {
            "mean_origin": mean_origin,
            "mean_updated": mean_updated,
            "mean_ic": sum(ics) / len(ics) if ics else None,
            "ic_of_means": _ic_or_none(mean_origin, mean_updated),
            "samples": float(len(rows)),
        }
    return out
