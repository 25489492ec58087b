"""Question analysis: normalize, tokenize, tag, split content/function, find wh."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .text import (
    PosTag,
    SenseClass,
    Token,
    WhTable,
    default_lexicon,
    default_wh_table,
    normalize,
    tag,
    tokenize,
    wh_lookup,
)


class EmptyQuestionError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyzedQuestion:
    text: str
    tokens: tuple[Token, ...]
    wh: Optional[tuple[str, SenseClass]]

    @property
    def content_words(self) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.is_content)

    @property
    def function_words(self) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if not t.is_content)

    @property
    def content_surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.content_words)

    @property
    def wh_class(self) -> Optional[SenseClass]:
        return self.wh[1] if self.wh is not None else None


def analyze(
    question: str,
    lexicon: Optional[Mapping[str, PosTag]] = None,
    wh_table: Optional[WhTable] = None,
) -> AnalyzedQuestion:
    """Run the full question pipeline; raises EmptyQuestionError when nothing
    tokenizable remains (empty or punctuation-only input)."""
    lexicon = default_lexicon() if lexicon is None else lexicon
    wh_table = default_wh_table() if wh_table is None else wh_table
    surfaces = tokenize(question)
    if not surfaces:
        raise EmptyQuestionError("empty question")
    tokens = tuple(tag(surfaces, lexicon, wh_table))
    return AnalyzedQuestion(
        text=normalize(question),
        tokens=tokens,
        wh=wh_lookup(tokens, wh_table),
    )
