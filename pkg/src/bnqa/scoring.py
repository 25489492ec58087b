"""The five statistical similarity signals for one (question, sentence) pair.

All functions are pure; scoring candidates in parallel cannot change results.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .corpus import CorpusIndex, Sentence
from .question import AnalyzedQuestion
from .text import PosTag, Token, common_prefix_len, surfaces_match


@dataclass(frozen=True)
class KeywordMatch:
    """One matched keyword: positions are indexes into the full token sequences
    of the question and the sentence. One-to-one: no q_pos or s_pos repeats
    within a match set."""

    q_pos: int
    s_pos: int
    q_surface: str
    s_surface: str
    exact: bool
    q_tag: PosTag
    s_tag: PosTag


@dataclass(frozen=True)
class ModuleScores:
    """Per-signal scores and their total for one (question, sentence) pair.

    m1 matched keywords, m2 order-concordant keywords, m3 POS-agreeing matches,
    m4 absolute entropy difference in bits, m5 ceiling of content-word cosine,
    m6 sense agreement. Disabled signals are stored as 0 and the total reflects
    whatever signals were live when the engine built the record.
    """

    m1: int
    m2: int
    m3: int
    m4: float
    m5: int
    m6: int
    total: float


def match_keywords(
    q: AnalyzedQuestion,
    s: Sentence,
    min_prefix: int = 3,
    prefix_coverage: float = 0.6,
) -> tuple[KeywordMatch, ...]:
    """Greedy left-to-right matching of question content words against the
    sentence's tokens. For each question word the best unmatched sentence token
    wins: exact equality beats prefix, longer common prefix beats shorter,
    leftmost breaks ties. Result is ordered by q_pos."""
    used: set[int] = set()
    matches: list[KeywordMatch] = []
    for q_pos, q_tok in enumerate(q.tokens):
        if not q_tok.is_content:
            continue
        best = None  # (not exact, -common_prefix, s_pos)
        for s_pos, s_tok in enumerate(s.tokens):
            if s_pos in used:
                continue
            if not surfaces_match(
                q_tok.surface, s_tok.surface, min_prefix, prefix_coverage
            ):
                continue
            exact = q_tok.surface == s_tok.surface
            key = (not exact, -common_prefix_len(q_tok.surface, s_tok.surface), s_pos)
            if best is None or key < best[0]:
                best = (key, s_pos, s_tok, exact)
        if best is not None:
            _, s_pos, s_tok, exact = best
            used.add(s_pos)
            matches.append(
                KeywordMatch(
                    q_pos=q_pos,
                    s_pos=s_pos,
                    q_surface=q_tok.surface,
                    s_surface=s_tok.surface,
                    exact=exact,
                    q_tag=q_tok.tag,
                    s_tag=s_tok.tag,
                )
            )
    return tuple(matches)


def score_frequency(matches: Sequence[KeywordMatch]) -> int:
    return len(matches)


def score_order(matches: Sequence[KeywordMatch]) -> int:
    """Longest common subsequence between the matches in question order and the
    same matches in sentence order; with one-to-one matches this is the longest
    increasing run of s_pos once sorted by q_pos."""
    s_positions = [m.s_pos for m in sorted(matches, key=lambda m: m.q_pos)]
    best = [0] * len(s_positions)
    for i, pos in enumerate(s_positions):
        best[i] = 1 + max(
            (best[j] for j in range(i) if s_positions[j] < pos), default=0
        )
    return max(best, default=0)


def score_pos(matches: Sequence[KeywordMatch]) -> int:
    return sum(1 for m in matches if m.q_tag == m.s_tag)


def _surface(token: Union[Token, str]) -> str:
    return token.surface if isinstance(token, Token) else token


def sentence_entropy(
    index: CorpusIndex, tokens: Iterable[Union[Token, str]]
) -> float:
    """Sum of per-word Shannon terms -p*log2(p) over the token sequence; words
    the corpus has never seen contribute 0 (the p->0 limit)."""
    total = 0.0
    for token in tokens:
        p = index.word_probability(_surface(token))
        if p > 0.0:
            total += -p * math.log2(p)
    return total


def score_entropy_diff(
    index: CorpusIndex,
    q_tokens: Iterable[Union[Token, str]],
    s_tokens: Iterable[Union[Token, str]],
) -> float:
    return abs(sentence_entropy(index, q_tokens) - sentence_entropy(index, s_tokens))


def _content_counts(tokens: Iterable[Token]) -> Counter:
    return Counter(t.surface for t in tokens if t.is_content)


def cosine_similarity(q: AnalyzedQuestion, s: Sentence) -> float:
    """Term-frequency cosine over the two sides' content-word surfaces (exact
    surfaces, no prefix folding); 0.0 when either side has no content words."""
    qv = _content_counts(q.tokens)
    sv = _content_counts(s.tokens)
    if not qv or not sv:
        return 0.0
    dot = sum(qv[w] * sv[w] for w in qv)
    if dot == 0:
        return 0.0
    nq = math.sqrt(sum(c * c for c in qv.values()))
    ns = math.sqrt(sum(c * c for c in sv.values()))
    return dot / (nq * ns)


def score_cosine(q: AnalyzedQuestion, s: Sentence) -> int:
    """Ceiling of the cosine, computed exactly: 1 iff the integer dot product is
    positive (a float ceil could round 1.0000000000000002 up to 2)."""
    qv = _content_counts(q.tokens)
    sv = _content_counts(s.tokens)
    dot = sum(qv[w] * sv[w] for w in qv)
    return 1 if dot > 0 else 0
