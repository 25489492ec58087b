"""Sense classification of sentences into the eight answer classes.

Two interchangeable models: an ordered cue-rule table and a multinomial Naive
Bayes with add-one smoothing. A sentence's gold label, when present, always
wins over either model. Trained models and rule tables are immutable and safe
for concurrent classification.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .corpus import Sentence
from .text import (
    SenseClass,
    TableFormatError,
    Token,
    _data_path,
    _read_tsv_lines,
    normalize,
    parse_tag,
)

Rule = tuple[str, SenseClass]  # cue is a surface word or "@MNEMONIC"


@dataclass(frozen=True)
class RuleModel:
    rules: tuple[Rule, ...]


@dataclass(frozen=True)
class NaiveBayesModel:
    """Multinomial NB with add-one smoothing. Log-likelihood tables cover the
    full training vocabulary for every class; priors exponentiate to 1."""

    class_log_prior: dict[SenseClass, float]
    token_log_likelihood: dict[SenseClass, dict[str, float]]
    vocabulary: frozenset[str]


SenseModel = Union[RuleModel, NaiveBayesModel]


def load_rules(path) -> tuple[Rule, ...]:
    rules = []
    for lineno, line in _read_tsv_lines(path):
        cols = line.split("\t")
        if len(cols) != 2:
            raise TableFormatError(
                f"line {lineno}: expected 2 tab-separated fields, got {len(cols)}"
            )
        cue = cols[0].strip()
        if not cue.startswith("@"):
            cue = normalize(cue)
        try:
            cls = SenseClass(cols[1].strip().lower())
        except ValueError:
            raise TableFormatError(
                f"line {lineno}: unknown sense class {cols[1].strip()!r}"
            ) from None
        rules.append((cue, cls))
    return tuple(rules)


def default_rules() -> tuple[Rule, ...]:
    return load_rules(_data_path("sense_rules.tsv"))


def rule_classify(s: Sentence, rules: Sequence[Rule]) -> SenseClass:
    """First rule (in table order) whose cue appears in the sentence wins; a
    ``@TAG`` cue fires on any token with that tag. Gold label short-circuits;
    no rule firing falls back to the most generic class, Object."""
    if s.gold_sense is not None:
        return s.gold_sense
    for cue, cls in rules:
        if cue.startswith("@"):
            wanted = parse_tag(cue[1:])
            if any(t.tag == wanted for t in s.tokens):
                return cls
        elif any(t.surface == cue for t in s.tokens):
            return cls
    return SenseClass.OBJECT


def _surfaces(tokens: Iterable[Union[Token, str]]) -> list[str]:
    return [t.surface if isinstance(t, Token) else t for t in tokens]


def train_nb(
    labeled: Sequence[tuple[Sequence[Union[Token, str]], SenseClass]]
) -> NaiveBayesModel:
    """Fit the multinomial model from (tokens, class) pairs. Deterministic and
    order-insensitive: only counts matter."""
    if not labeled:
        raise ValueError("empty training set")
    class_counts: Counter = Counter()
    token_counts: dict[SenseClass, Counter] = {}
    vocabulary: set[str] = set()
    for tokens, cls in labeled:
        class_counts[cls] += 1
        bag = token_counts.setdefault(cls, Counter())
        for surface in _surfaces(tokens):
            bag[surface] += 1
            vocabulary.add(surface)

    n_docs = sum(class_counts.values())
    vocab_size = len(vocabulary)
    priors = {}
    likelihoods = {}
    for cls in SenseClass:  # enum order keeps the tables deterministic
        if cls not in class_counts:
            continue
        priors[cls] = math.log(class_counts[cls] / n_docs)
        bag = token_counts[cls]
        denom = sum(bag.values()) + vocab_size  # add-one smoothing
        likelihoods[cls] = {
            w: math.log((bag[w] + 1) / denom) for w in sorted(vocabulary)
        }
    return NaiveBayesModel(priors, likelihoods, frozenset(vocabulary))


def nb_classify(
    tokens: Iterable[Union[Token, str]], model: NaiveBayesModel
) -> SenseClass:
    """Argmax posterior over trained classes; out-of-vocabulary tokens are
    skipped; ties go to the lowest class in declaration order."""
    surfaces = [s for s in _surfaces(tokens) if s in model.vocabulary]
    best_cls = None
    best_score = -math.inf
    for cls in SenseClass:
        if cls not in model.class_log_prior:
            continue
        score = model.class_log_prior[cls]
        table = model.token_log_likelihood[cls]
        for surface in surfaces:
            score += table[surface]
        if score > best_score:
            best_cls, best_score = cls, score
    if best_cls is None:
        raise ValueError("model has no trained classes")
    return best_cls


def classify(s: Sentence, model: SenseModel) -> SenseClass:
    """Gold label if present, else the model's prediction."""
    if s.gold_sense is not None:
        return s.gold_sense
    if isinstance(model, RuleModel):
        return rule_classify(s, model.rules)
    return nb_classify(s.tokens, model)


def score_sense(q_class: Optional[SenseClass], s_class: SenseClass) -> int:
    """1 iff the question has a sense class and the sentence agrees."""
    return 1 if q_class is not None and q_class == s_class else 0


class RuleSenseClassifier(BaseEstimator):
    """Estimator wrapper around the ordered cue-rule table.

    Parameters
    ----------
    rules : sequence of (cue, SenseClass) pairs, or None for the bundled table.
    """

    def __init__(self, rules=None):
        self.rules = rules

    def fit(self, X=None, y=None):
        self.rules_ = tuple(self.rules) if self.rules is not None else default_rules()
        return self

    def predict(self, X: Sequence[Sentence]) -> list[SenseClass]:
        if not hasattr(self, "rules_"):
            raise NotFittedError("RuleSenseClassifier is not fitted; call fit first")
        return [rule_classify(s, self.rules_) for s in X]


class NaiveBayesSenseClassifier(BaseEstimator):
    """Estimator wrapper around the multinomial Naive Bayes sense model."""

    def fit(self, X: Sequence[Sequence[Union[Token, str]]], y: Sequence[SenseClass]):
        if len(X) != len(y):
            raise ValueError(f"{len(X)} samples but {len(y)} labels")
        self.model_ = train_nb(list(zip(X, y)))
        return self

    def predict(
        self, X: Sequence[Sequence[Union[Token, str]]]
    ) -> list[SenseClass]:
        if not hasattr(self, "model_"):
            raise NotFittedError(
                "NaiveBayesSenseClassifier is not fitted; call fit first"
            )
        return [nb_classify(tokens, self.model_) for tokens in X]
