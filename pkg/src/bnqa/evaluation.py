"""Evaluation: rank-distribution buckets, confusion counts, derived metrics.

Outcome taxonomy per question: expected answer at rank 1 is a true positive;
at rank 2..k it is counted separately as ``unclassified`` (neither a clean hit
nor a miss); present in the corpus but absent from the top-k is a false
negative; expected NONE with zero candidates is a true negative; expected NONE
with candidates is a false positive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .engine import AnswerRanker
from .text import SenseClass, _read_text

# fixed reporting resolution: rank 1, three coarser bands, then overflow
_BUCKETS = (("1", 1, 1), ("2-5", 2, 5), ("6-10", 6, 10), ("11-15", 11, 15))
OVERFLOW_BUCKET = ">15"
BUCKET_LABELS = tuple(label for label, _, _ in _BUCKETS) + (OVERFLOW_BUCKET,)


class QaFormatError(ValueError):
    """Malformed QA-pairs file; message names the line."""


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int
    unclassified: int = 0


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    degenerate: bool


def _floor_pct(value: float) -> float:
    """Truncate a percentage to 2 decimals. Reported figures truncate rather
    than round; the epsilon guards values stored as x.xx999..."""
    return math.floor(value * 100 + 1e-9) / 100


def metrics(counts: ConfusionCounts) -> Metrics:
    """Accuracy, precision, recall, F1 as 2-decimal percentages. F1 is computed
    from the truncated precision/recall. Zero denominators yield 0 and set the
    degenerate flag instead of raising."""
    tp, tn, fp, fn = counts.tp, counts.tn, counts.fp, counts.fn
    acc_den = tp + tn + fp + fn
    prec_den = tp + fp
    rec_den = tp + fn
    accuracy = _floor_pct(100 * (tp + tn) / acc_den) if acc_den else 0.0
    precision = _floor_pct(100 * tp / prec_den) if prec_den else 0.0
    recall = _floor_pct(100 * tp / rec_den) if rec_den else 0.0
    f1_den = precision + recall
    f1 = _floor_pct(2 * precision * recall / f1_den) if f1_den else 0.0
    degenerate = not (acc_den and prec_den and rec_den and f1_den)
    return Metrics(accuracy, precision, recall, f1, degenerate)


def rank_buckets(ranks: Iterable[Optional[int]]) -> dict[str, int]:
    """Histogram ranks into 1 / 2-5 / 6-10 / 11-15 / >15; None (absent) lands
    in the overflow bucket."""
    out = {label: 0 for label in BUCKET_LABELS}
    for rank in ranks:
        if rank is None or rank > _BUCKETS[-1][2]:
            out[OVERFLOW_BUCKET] += 1
            continue
        for label, lo, hi in _BUCKETS:
            if lo <= rank <= hi:
                out[label] += 1
                break
    return out


def cumulative_percentages(buckets: dict[str, int], total: int) -> list[float]:
    """Cumulative share of questions answered within each bucket ceiling, as
     2-decimal percentages; one value per finite bucket."""
    out = []
    running = 0
    for label, _, _ in _BUCKETS:
        running += buckets[label]
        out.append(_floor_pct(100 * running / total) if total else 0.0)
    return out


@dataclass(frozen=True)
class EvalReport:
    buckets: dict[str, int]
    cumulative: list[float]
    counts: ConfusionCounts
    metrics: Metrics
    sense_distribution: dict[str, int]
    total_questions: int

    def to_json(self) -> str:
        payload = {
            "buckets": self.buckets,
            "cumulative": self.cumulative,
            "counts": {
                "tp": self.counts.tp,
                "tn": self.counts.tn,
                "fp": self.counts.fp,
                "fn": self.counts.fn,
                "unclassified": self.counts.unclassified,
            },
            "metrics": {
                "accuracy": self.metrics.accuracy,
                "precision": self.metrics.precision,
                "recall": self.metrics.recall,
                "f1": self.metrics.f1,
                "degenerate": self.metrics.degenerate,
            },
            "sense_distribution": self.sense_distribution,
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)

    def render_table(self) -> str:
        lines = [
            f"questions evaluated: {self.total_questions}",
            "",
            "rank bucket    count  cumulative%",
        ]
        for i, (label, _, _) in enumerate(_BUCKETS):
            lines.append(
                f"  {label:<11}  {self.buckets[label]:>5}  {self.cumulative[i]:>10.2f}"
            )
        lines.append(f"  {OVERFLOW_BUCKET:<11}  {self.buckets[OVERFLOW_BUCKET]:>5}")
        c = self.counts
        lines += [
            "",
            f"tp {c.tp}  tn {c.tn}  fp {c.fp}  fn {c.fn}  "
            f"unclassified {c.unclassified}",
            f"accuracy {self.metrics.accuracy:.2f}  "
            f"precision {self.metrics.precision:.2f}  "
            f"recall {self.metrics.recall:.2f}  f1 {self.metrics.f1:.2f}"
            + ("  (degenerate)" if self.metrics.degenerate else ""),
            "",
            "sense distribution of top answers:",
        ]
        for cls in SenseClass:
            lines.append(f"  {cls.value:<12} {self.sense_distribution[cls.value]}")
        return "\n".join(lines)


def load_qa_pairs(path) -> list[tuple[str, Optional[int]]]:
    """Parse ``question<TAB>expected_id`` lines; ``-`` marks an expected NONE."""
    pairs = []
    text = _read_text(path)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise QaFormatError(
                f"line {lineno}: expected 2 tab-separated fields, got {len(cols)}"
            )
        question, expected = cols[0], cols[1].strip()
        if expected == "-":
            pairs.append((question, None))
        else:
            try:
                pairs.append((question, int(expected)))
            except ValueError:
                raise QaFormatError(
                    f"line {lineno}: unparsable expected id {expected!r}"
                ) from None
    return pairs


def evaluate(
    ranker: AnswerRanker, qa_pairs: Sequence[tuple[str, Optional[int]]]
) -> EvalReport:
    """Run every question through the fitted ranker and aggregate the report.
    A pair whose expected id is missing from the corpus is an input error."""
    ranker._check_fitted()
    known_ids = set(ranker.index_.sentences)
    for question, expected in qa_pairs:
        if expected is not None and expected not in known_ids:
            raise ValueError(
                f"expected id {expected} for question {question!r} is not in "
                "the corpus"
            )

    tp = tn = fp = fn = unclassified = 0
    ranks: list[Optional[int]] = []
    distribution = {cls.value: 0 for cls in SenseClass}
    for question, expected in qa_pairs:
        answers = ranker.answer(question)
        if answers:
            top_sentence = ranker.index_.sentences[answers[0].sentence_id]
            distribution[ranker.sentence_sense(top_sentence).value] += 1
        if expected is None:
            ranks.append(None)  # no correct answer to bucket
            if answers:
                fp += 1
            else:
                tn += 1
            continue
        rank = next(
            (a.rank for a in answers if a.sentence_id == expected), None
        )
        ranks.append(rank)
        if rank == 1:
            tp += 1
        elif rank is not None:
            unclassified += 1
        else:
            fn += 1

    counts = ConfusionCounts(tp, tn, fp, fn, unclassified)
    buckets = rank_buckets(ranks)
    return EvalReport(
        buckets=buckets,
        cumulative=cumulative_percentages(buckets, len(qa_pairs)),
        counts=counts,
        metrics=metrics(counts),
        sense_distribution=distribution,
        total_questions=len(qa_pairs),
    )
