"""Corpus-backed Bengali question answering.

Retrieval over an inverted index plus a six-signal similarity score: keyword
frequency, keyword order, POS agreement, entropy difference, term-frequency
cosine, and answer-sense agreement. Ships a CLI (``bnqa``) and an sklearn-style
estimator API.
"""

from .text import (
    PosTag,
    SenseClass,
    Token,
    WhTable,
    default_lexicon,
    default_wh_table,
    is_content,
    load_lexicon,
    load_wh_table,
    normalize,
    parse_tag,
    save_wh_table,
    surfaces_match,
    tag,
    tokenize,
    wh_lookup,
)
from .corpus import (
    CorpusFormatError,
    CorpusIndex,
    EmptyCorpusError,
    IndexFormatError,
    Sentence,
    build_index,
    ingest,
    load_index,
    save_index,
)
from .question import AnalyzedQuestion, EmptyQuestionError, analyze
from .scoring import (
    KeywordMatch,
    ModuleScores,
    cosine_similarity,
    match_keywords,
    score_cosine,
    score_entropy_diff,
    score_frequency,
    score_order,
    score_pos,
    sentence_entropy,
)
from .sense import (
    NaiveBayesModel,
    NaiveBayesSenseClassifier,
    RuleModel,
    RuleSenseClassifier,
    classify,
    default_rules,
    load_rules,
    rule_classify,
    score_sense,
    train_nb,
)
from .engine import AnswerRanker, RankedAnswer
from .evaluation import (
    ConfusionCounts,
    EvalReport,
    Metrics,
    QaFormatError,
    cumulative_percentages,
    evaluate,
    load_qa_pairs,
    metrics,
    rank_buckets,
)

__version__ = "0.1.0"

__all__ = [
    "PosTag",
    "SenseClass",
    "Token",
    "WhTable",
    "default_lexicon",
    "default_wh_table",
    "is_content",
    "load_lexicon",
    "load_wh_table",
    "normalize",
    "parse_tag",
    "save_wh_table",
    "surfaces_match",
    "tag",
    "tokenize",
    "wh_lookup",
    "CorpusFormatError",
    "CorpusIndex",
    "EmptyCorpusError",
    "IndexFormatError",
    "Sentence",
    "build_index",
    "ingest",
    "load_index",
    "save_index",
    "AnalyzedQuestion",
    "EmptyQuestionError",
    "analyze",
    "KeywordMatch",
    "ModuleScores",
    "cosine_similarity",
    "match_keywords",
    "score_cosine",
    "score_entropy_diff",
    "score_frequency",
    "score_order",
    "score_pos",
    "sentence_entropy",
    "NaiveBayesModel",
    "NaiveBayesSenseClassifier",
    "RuleModel",
    "RuleSenseClassifier",
    "classify",
    "default_rules",
    "load_rules",
    "rule_classify",
    "score_sense",
    "train_nb",
    "AnswerRanker",
    "RankedAnswer",
    "ConfusionCounts",
    "EvalReport",
    "Metrics",
    "QaFormatError",
    "cumulative_percentages",
    "evaluate",
    "load_qa_pairs",
    "metrics",
    "rank_buckets",
]
