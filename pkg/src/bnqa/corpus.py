"""Corpus ingestion, the immutable searchable index, and index persistence.

A built :class:`CorpusIndex` is never mutated; reads (candidates,
word_probability) are safe for unrestricted concurrent use.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import BinaryIO, Mapping, Optional, Sequence

from .text import (
    PosTag,
    SenseClass,
    Token,
    WhTable,
    _read_text,
    default_lexicon,
    default_wh_table,
    normalize,
    parse_tag,
    surfaces_match,
    tag,
    tokenize,
)

MAGIC = b"BQAX"
FORMAT_VERSION = 1


class CorpusFormatError(ValueError):
    """Malformed corpus file; message names the line."""


class IndexFormatError(ValueError):
    """Unreadable index file: bad magic, bad version, or truncation."""


class EmptyCorpusError(ValueError):
    """Operation undefined on a corpus with no tokens."""


@dataclass(frozen=True)
class Sentence:
    id: int
    text: str
    tokens: tuple[Token, ...]
    category: str = "default"
    gold_sense: Optional[SenseClass] = None

    @property
    def content_surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens if t.is_content)


def _auto_sentence(
    sid: int,
    raw_text: str,
    category: str,
    gold: Optional[SenseClass],
    lexicon: Mapping[str, PosTag],
    wh_table: WhTable,
) -> Sentence:
    tokens = tuple(tag(tokenize(raw_text), lexicon, wh_table))
    return Sentence(sid, normalize(raw_text), tokens, category, gold)


def ingest(
    path,
    format: str = "tsv",
    lexicon: Optional[Mapping[str, PosTag]] = None,
    wh_table: Optional[WhTable] = None,
) -> list[Sentence]:
    """Parse a corpus file into sentences.

    ``plain``: one sentence per non-empty line, ``#`` lines ignored, ids 0..n-1.
    ``tsv``: ``id<TAB>category<TAB>sense<TAB>text<TAB>tags`` where sense is one of
    the eight lowercase class names or ``-`` and tags is ``-`` (auto-tag) or
    space-separated mnemonics aligned with the tokens of text.
    """
    if format not in ("plain", "tsv"):
        raise ValueError(f"unknown corpus format {format!r}")
    lexicon = default_lexicon() if lexicon is None else lexicon
    wh_table = default_wh_table() if wh_table is None else wh_table
    text = _read_text(path)

    sentences: list[Sentence] = []
    seen_ids: dict[int, int] = {}

    if format == "plain":
        next_id = 0
        for line in text.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            sentences.append(
                _auto_sentence(next_id, line, "default", None, lexicon, wh_table)
            )
            next_id += 1
        return sentences

    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            raise CorpusFormatError(
                f"line {lineno}: expected 5 tab-separated fields, got {len(cols)}"
            )
        id_str, category, sense_str, raw_text, tags_str = cols
        try:
            sid = int(id_str)
        except ValueError:
            raise CorpusFormatError(
                f"line {lineno}: unparsable id {id_str!r}"
            ) from None
        if sid < 0:
            raise CorpusFormatError(f"line {lineno}: negative id {sid}")
        if sid in seen_ids:
            raise CorpusFormatError(
                f"line {lineno}: duplicate id {sid} (first on line {seen_ids[sid]})"
            )
        seen_ids[sid] = lineno

        if sense_str == "-":
            gold = None
        else:
            try:
                gold = SenseClass(sense_str.strip().lower())
            except ValueError:
                raise CorpusFormatError(
                    f"line {lineno}: unknown sense {sense_str!r}"
                ) from None

        if tags_str == "-":
            sentences.append(
                _auto_sentence(sid, raw_text, category, gold, lexicon, wh_table)
            )
        else:
            surfaces = tokenize(raw_text)
            mnemonics = tags_str.split()
            if len(mnemonics) != len(surfaces):
                raise CorpusFormatError(
                    f"line {lineno}: {len(mnemonics)} tags for "
                    f"{len(surfaces)} tokens"
                )
            tokens = tuple(
                Token(s, parse_tag(m)) for s, m in zip(surfaces, mnemonics)
            )
            sentences.append(
                Sentence(sid, " ".join(surfaces), tokens, category, gold)
            )
    return sentences


@dataclass(frozen=True)
class CorpusIndex:
    """Immutable inverted index plus token-frequency table.

    ``inverted`` maps every token surface (content and function alike) to its
    sorted posting of sentence ids; the query side decides which words to look
    up. ``freq`` counts every token, content and function, because entropy is
    over every word.
    """

    sentences: dict[int, Sentence] = field(default_factory=dict)
    inverted: dict[str, tuple[int, ...]] = field(default_factory=dict)
    freq: dict[str, int] = field(default_factory=dict)
    total_tokens: int = 0

    def candidates(
        self,
        content_words: Sequence[str],
        min_prefix: int = 3,
        prefix_coverage: float = 0.6,
    ) -> list[int]:
        """Sorted ids of sentences with at least one token matching some query
        word under the shared match-or-prefix predicate. Empty query: empty
        result (a keyword-less question has no candidates, not an error)."""
        hits: set[int] = set()
        vocab = list(self.inverted)
        for word in content_words:
            exact = self.inverted.get(word)
            if exact:
                hits.update(exact)
            for surface in vocab:
                if surface != word and surfaces_match(
                    word, surface, min_prefix, prefix_coverage
                ):
                    hits.update(self.inverted[surface])
        return sorted(hits)

    def word_probability(self, surface: str) -> float:
        """Maximum-likelihood token probability; 0 for unseen words."""
        if self.total_tokens == 0:
            raise EmptyCorpusError("empty corpus: word probability undefined")
        return self.freq.get(surface, 0) / self.total_tokens


def build_index(sentences: Sequence[Sentence]) -> CorpusIndex:
    """Deterministic index construction: all maps in sorted key order."""
    by_id: dict[int, Sentence] = {}
    for s in sentences:
        if s.id in by_id:
            raise ValueError(f"duplicate sentence id {s.id}")
        by_id[s.id] = s

    ordered = {sid: by_id[sid] for sid in sorted(by_id)}
    postings: dict[str, set[int]] = {}
    freq: dict[str, int] = {}
    total = 0
    for sid, s in ordered.items():
        for token in s.tokens:
            postings.setdefault(token.surface, set()).add(sid)
            freq[token.surface] = freq.get(token.surface, 0) + 1
            total += 1
    inverted = {w: tuple(sorted(postings[w])) for w in sorted(postings)}
    return CorpusIndex(
        sentences=ordered,
        inverted=inverted,
        freq={w: freq[w] for w in sorted(freq)},
        total_tokens=total,
    )


# ---------------------------------------------------------------------------
# Binary persistence: magic BQAX, version byte, then a canonical length-prefixed
# serialization of the sentences in ascending id order. Postings and frequencies
# are rebuilt on load (build_index is deterministic), so equality is field-wise.
# The tag/sense ordinal encoding freezes the enum declaration orders.
# ---------------------------------------------------------------------------

_POS_TAGS = list(PosTag)
_SENSES = list(SenseClass)


def _write_str(f: BinaryIO, s: str) -> None:
    data = s.encode("utf-8")
    f.write(struct.pack(">I", len(data)))
    f.write(data)


def _read_exact(f: BinaryIO, n: int) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise IndexFormatError("truncated index file")
    return data


def _read_str(f: BinaryIO) -> str:
    (n,) = struct.unpack(">I", _read_exact(f, 4))
    return _read_exact(f, n).decode("utf-8")


def save_index(index: CorpusIndex, path) -> None:
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(bytes([FORMAT_VERSION]))
        f.write(struct.pack(">I", len(index.sentences)))
        for sid in sorted(index.sentences):
            s = index.sentences[sid]
            f.write(struct.pack(">I", sid))
            _write_str(f, s.category)
            if s.gold_sense is None:
                f.write(bytes([0, 0]))
            else:
                f.write(bytes([1, _SENSES.index(s.gold_sense)]))
            _write_str(f, s.text)
            f.write(struct.pack(">I", len(s.tokens)))
            for token in s.tokens:
                _write_str(f, token.surface)
                f.write(bytes([_POS_TAGS.index(token.tag)]))


def load_index(path) -> CorpusIndex:
    with open(path, "rb") as f:
        magic = _read_exact(f, 4)
        if magic != MAGIC:
            raise IndexFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        version = _read_exact(f, 1)[0]
        if version != FORMAT_VERSION:
            raise IndexFormatError(
                f"unsupported index version {version}, expected {FORMAT_VERSION}"
            )
        (n_sentences,) = struct.unpack(">I", _read_exact(f, 4))
        sentences = []
        for _ in range(n_sentences):
            (sid,) = struct.unpack(">I", _read_exact(f, 4))
            category = _read_str(f)
            has_gold, gold_ord = _read_exact(f, 2)
            if has_gold and gold_ord >= len(_SENSES):
                raise IndexFormatError(f"bad sense ordinal {gold_ord}")
            gold = _SENSES[gold_ord] if has_gold else None
            text = _read_str(f)
            (n_tokens,) = struct.unpack(">I", _read_exact(f, 4))
            tokens = []
            for _ in range(n_tokens):
                surface = _read_str(f)
                tag_ord = _read_exact(f, 1)[0]
                if tag_ord >= len(_POS_TAGS):
                    raise IndexFormatError(f"bad tag ordinal {tag_ord}")
                tokens.append(Token(surface, _POS_TAGS[tag_ord]))
            sentences.append(Sentence(sid, text, tuple(tokens), category, gold))
        trailing = f.read(1)
        if trailing:
            raise IndexFormatError("trailing bytes after index payload")
    return build_index(sentences)
