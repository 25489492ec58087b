"""The answer ranking engine: retrieval, scoring, ordering, ablation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .corpus import CorpusIndex, EmptyCorpusError, Sentence, build_index
from .question import AnalyzedQuestion, analyze
from .scoring import (
    KeywordMatch,
    ModuleScores,
    match_keywords,
    score_cosine,
    score_entropy_diff,
    score_frequency,
    score_order,
    score_pos,
)
from .sense import (
    RuleModel,
    SenseModel,
    classify,
    default_rules,
    score_sense,
    train_nb,
)
from .text import PosTag, SenseClass, WhTable, default_lexicon, default_wh_table

SENSE_MODES = ("gold", "rules", "nb")
ENTROPY_SIGNS = ("add", "subtract")
MODULE_NUMBERS = frozenset({1, 2, 3, 4, 5, 6})


def validate_min_prefix(value) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"min_prefix must be an integer >= 1, got {value!r}")
    return value


def validate_prefix_coverage(value) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"prefix_coverage must be a number, got {value!r}")
    if not 0.0 < float(value) <= 1.0:
        raise ValueError(f"prefix_coverage must be in (0, 1], got {value!r}")
    return float(value)


def validate_top_k(value) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"top_k must be an integer >= 1, got {value!r}")
    return value


def validate_disabled_modules(value) -> frozenset[int]:
    try:
        modules = frozenset(int(m) for m in value)
    except (TypeError, ValueError):
        raise ValueError(
            f"disabled_modules must be an iterable of integers, got {value!r}"
        ) from None
    bad = modules - MODULE_NUMBERS
    if bad:
        raise ValueError(f"unknown module numbers {sorted(bad)}; valid are 1..6")
    return modules


def validate_sense_mode(value) -> str:
    if value not in SENSE_MODES:
        raise ValueError(f"sense_mode must be one of {SENSE_MODES}, got {value!r}")
    return value


def validate_entropy_sign(value) -> str:
    if value not in ENTROPY_SIGNS:
        raise ValueError(
            f"entropy_sign must be one of {ENTROPY_SIGNS}, got {value!r}"
        )
    return value


@dataclass(frozen=True)
class RankedAnswer:
    """One ranked candidate: rank is 1-based with no gaps; the matches that
    produced the keyword scores ride along for explanation output."""

    sentence_id: int
    scores: ModuleScores
    rank: int
    matches: tuple[KeywordMatch, ...]


class AnswerRanker(BaseEstimator):
    """Corpus-backed question answering as a scikit-learn style estimator.

    Fit on a sequence of Sentences (or a prebuilt CorpusIndex), then call
    ``answer(question)`` for ranked candidates or ``predict(questions)`` for
    best sentence ids. The defaults are the intended configuration; the knobs
    exist for ablation and tuning.

    Parameters
    ----------
    min_prefix : minimum common-prefix codepoints for an inexact keyword match.
    prefix_coverage : fraction of the shorter surface the prefix must cover.
    top_k : answers returned per question.
    disabled_modules : score signals (1..6) forced to zero, for ablation.
    sense_mode : "gold" (labels, Object fallback), "rules", or "nb".
    entropy_sign : "add" (default) or "subtract" the entropy-difference signal.
    lexicon, wh_table, sense_rules : overrides for the bundled resources.
    """

    def __init__(
        self,
        min_prefix: int = 3,
        prefix_coverage: float = 0.6,
        top_k: int = 15,
        disabled_modules: Iterable[int] = (),
        sense_mode: str = "gold",
        entropy_sign: str = "add",
        lexicon: Optional[Mapping[str, PosTag]] = None,
        wh_table: Optional[WhTable] = None,
        sense_rules: Optional[Sequence[tuple[str, SenseClass]]] = None,
    ):
        self.min_prefix = min_prefix
        self.prefix_coverage = prefix_coverage
        self.top_k = top_k
        self.disabled_modules = disabled_modules
        self.sense_mode = sense_mode
        self.entropy_sign = entropy_sign
        self.lexicon = lexicon
        self.wh_table = wh_table
        self.sense_rules = sense_rules

    # ------------------------------------------------------------------ fit

    def fit(self, X: Union[CorpusIndex, Sequence[Sentence]], y=None):
        """Validate parameters, build (or adopt) the index, and prepare the
        sense model. ``y`` is ignored; sense labels live on the sentences."""
        self._min_prefix = validate_min_prefix(self.min_prefix)
        self._prefix_coverage = validate_prefix_coverage(self.prefix_coverage)
        self._top_k = validate_top_k(self.top_k)
        self._disabled = validate_disabled_modules(self.disabled_modules)
        self._sense_mode = validate_sense_mode(self.sense_mode)
        self._entropy_sign = validate_entropy_sign(self.entropy_sign)

        self.lexicon_ = self.lexicon if self.lexicon is not None else default_lexicon()
        self.wh_table_ = (
            self.wh_table if self.wh_table is not None else default_wh_table()
        )
        self.index_ = X if isinstance(X, CorpusIndex) else build_index(list(X))

        self.sense_model_: Optional[SenseModel] = None
        if self._sense_mode == "rules":
            rules = (
                tuple(self.sense_rules)
                if self.sense_rules is not None
                else default_rules()
            )
            self.sense_model_ = RuleModel(rules)
        elif self._sense_mode == "nb":
            labeled = [
                (s.tokens, s.gold_sense)
                for s in self.index_.sentences.values()
                if s.gold_sense is not None
            ]
            self.sense_model_ = train_nb(labeled)  # raises on empty training set
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "index_"):
            raise NotFittedError("AnswerRanker is not fitted; call fit first")

    # -------------------------------------------------------------- scoring

    def sentence_sense(self, s: Sentence) -> SenseClass:
        """The sense class scoring will use for this sentence under the current
        mode: gold label when present, else the mode's model (gold mode falls
        back to the generic Object)."""
        self._check_fitted()
        if self.sense_model_ is not None:
            return classify(s, self.sense_model_)
        return s.gold_sense if s.gold_sense is not None else SenseClass.OBJECT

    def _score(
        self, q: AnalyzedQuestion, s: Sentence
    ) -> tuple[ModuleScores, tuple[KeywordMatch, ...]]:
        live = lambda n: n not in self._disabled
        matches = match_keywords(q, s, self._min_prefix, self._prefix_coverage)
        m1 = score_frequency(matches) if live(1) else 0
        m2 = score_order(matches) if live(2) else 0
        m3 = score_pos(matches) if live(3) else 0
        m4 = (
            score_entropy_diff(self.index_, q.tokens, s.tokens) if live(4) else 0.0
        )
        m5 = score_cosine(q, s) if live(5) else 0
        m6 = (
            score_sense(q.wh_class, self.sentence_sense(s)) if live(6) else 0
        )
        m4_signed = m4 if self._entropy_sign == "add" else -m4
        total = m1 + m2 + m3 + m4_signed + m5 + m6
        return ModuleScores(m1, m2, m3, m4, m5, m6, total), matches

    # ------------------------------------------------------------ answering

    def answer(self, question: str) -> list[RankedAnswer]:
        """Ranked top-k candidates; empty list when no sentence shares a
        keyword (a legal "no answer"). Raises EmptyQuestionError on empty or
        punctuation-only input and EmptyCorpusError on an empty index."""
        self._check_fitted()
        q = analyze(question, self.lexicon_, self.wh_table_)
        if not self.index_.sentences:
            raise EmptyCorpusError("cannot answer against an empty corpus")
        ids = self.index_.candidates(
            list(q.content_surfaces), self._min_prefix, self._prefix_coverage
        )
        scored = []
        for sid in ids:
            scores, matches = self._score(q, self.index_.sentences[sid])
            scored.append((scores, matches, sid))
        # total descending, then matched-keyword count descending, then id
        scored.sort(key=lambda item: (-item[0].total, -item[0].m1, item[2]))
        return [
            RankedAnswer(sentence_id=sid, scores=scores, rank=rank, matches=matches)
            for rank, (scores, matches, sid) in enumerate(
                scored[: self._top_k], start=1
            )
        ]

    def predict(self, X: Iterable[str]) -> list[Optional[int]]:
        """Best sentence id per question, None where no candidate exists."""
        self._check_fitted()
        out = []
        for question in X:
            answers = self.answer(question)
            out.append(answers[0].sentence_id if answers else None)
        return out
