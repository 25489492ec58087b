"""Bengali text primitives: normalization, tokenization, POS tagging, wh-word lookup.

Everything here is a pure function over immutable data, so the whole module is
safe for concurrent use.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Iterable, Mapping, Optional, Sequence

DANDA = "।"
DOUBLE_DANDA = "॥"


class PosTag(Enum):
    """12-tag part-of-speech set; enum values are the canonical file mnemonics.

    Declaration order is frozen: the binary index format stores ordinals.
    """

    NOUN = "NN"
    PROPER_NOUN = "NNP"
    PRONOUN = "PR"
    VERB = "VM"
    ADJECTIVE = "JJ"
    ADVERB = "RB"
    WH_QUESTION = "WQ"
    POSTPOSITION = "PSP"
    CONJUNCTION = "CC"
    QUANTIFIER = "QF"
    PUNCTUATION = "PUNC"
    OTHER = "OTH"


class SenseClass(Enum):
    """The eight answer-sense classes shared by questions and sentences.

    Declaration order is frozen: it is the classifier tie-break order and the
    binary index format stores ordinals.
    """

    OBJECT = "object"
    PERSON = "person"
    TIME = "time"
    CAUSE = "cause"
    PLACE = "place"
    QUANTITY = "quantity"
    NUMBER = "number"
    DESCRIPTION = "description"


CONTENT_TAGS = frozenset(
    {PosTag.NOUN, PosTag.PROPER_NOUN, PosTag.VERB, PosTag.ADJECTIVE, PosTag.ADVERB}
)

# accepted spellings for each tag on input; canonical mnemonic is the enum value
_TAG_ALIASES = {
    "PRP": PosTag.PRONOUN,
    "VB": PosTag.VERB,
    "V": PosTag.VERB,
    "VAUX": PosTag.VERB,
    "ADJ": PosTag.ADJECTIVE,
    "ADV": PosTag.ADVERB,
    "CONJ": PosTag.CONJUNCTION,
    "SYM": PosTag.PUNCTUATION,
    "UNK": PosTag.OTHER,
}


def is_content(tag: PosTag) -> bool:
    """True for the five lexical-meaning tags used in retrieval and matching."""
    return tag in CONTENT_TAGS


def parse_tag(raw: str) -> PosTag:
    """Map a tag string to a PosTag; unknown strings degrade to OTHER."""
    s = raw.strip()
    for t in PosTag:
        if s.upper() == t.value:
            return t
    if s.upper() in _TAG_ALIASES:
        return _TAG_ALIASES[s.upper()]
    for t in PosTag:
        if s.upper() == t.name.replace("_", ""):
            return t
    return PosTag.OTHER


@dataclass(frozen=True)
class Token:
    surface: str
    tag: PosTag

    @property
    def is_content(self) -> bool:
        return is_content(self.tag)


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P") or ch in (DANDA, DOUBLE_DANDA)


def normalize(text: str) -> str:
    """NFC-normalize, split punctuation off adjoining words, collapse whitespace."""
    s = unicodedata.normalize("NFC", text)
    parts = []
    for ch in s:
        if _is_punct_char(ch):
            parts.append(f" {ch} ")
        else:
            parts.append(ch)
    return " ".join("".join(parts).split())


def tokenize(text: str) -> list[str]:
    """Whitespace tokens of the normalized text, punctuation-only tokens dropped."""
    tokens = normalize(text).split(" ") if text else []
    return [t for t in tokens if t and not all(_is_punct_char(c) for c in t)]


# Case suffixes tried longest-first; the stripped stem must be a lexicon
# Noun/ProperNoun, whose tag the inflected form inherits.
_CASE_SUFFIXES = ("দের", "ের", "তে",
                  "কে", "ে", "র")  # দের, ের, তে, কে, ে, র
_VERB_SUFFIXES = (
    "ছিলেন",  # ছিলেন
    "েছেন",        # েছেন
    "ছেন",              # ছেন
    "েছে",              # েছে
    "ছিল",              # ছিল
    "লেন",              # লেন
    "বেন",              # বেন
)


def _suffix_tag(surface: str, lexicon: Mapping[str, PosTag]) -> Optional[PosTag]:
    for suf in _CASE_SUFFIXES:
        if len(surface) > len(suf) + 1 and surface.endswith(suf):
            stem_tag = lexicon.get(surface[: -len(suf)])
            if stem_tag in (PosTag.NOUN, PosTag.PROPER_NOUN):
                return stem_tag
    for suf in _VERB_SUFFIXES:
        if len(surface) > len(suf) and surface.endswith(suf):
            return PosTag.VERB
    return None


@dataclass(frozen=True)
class WhTable:
    """Ordered wh-phrase table; phrases are one or two normalized words."""

    entries: tuple[tuple[tuple[str, ...], SenseClass], ...]

    @property
    def max_phrase_len(self) -> int:
        return max((len(p) for p, _ in self.entries), default=0)

    def wh_word_surfaces(self) -> frozenset[str]:
        """Surfaces taggable as WH_QUESTION: single-word phrases plus the first
        word of each multiword phrase (never the trailing words)."""
        out = set()
        for phrase, _ in self.entries:
            out.add(phrase[0])
        return frozenset(out)

    def lookup(self, surfaces: Sequence[str]) -> Optional[tuple[str, SenseClass]]:
        """First match scanning left to right, longest phrase preferred at each
        position."""
        phrase_map = {p: c for p, c in self.entries}
        for i in range(len(surfaces)):
            for n in range(self.max_phrase_len, 0, -1):
                if i + n > len(surfaces):
                    continue
                candidate = tuple(surfaces[i : i + n])
                if candidate in phrase_map:
                    return " ".join(candidate), phrase_map[candidate]
        return None


def tag(
    tokens: Sequence[str],
    lexicon: Mapping[str, PosTag],
    wh_table: Optional[WhTable] = None,
) -> list[Token]:
    """Tag surfaces: lexicon hit, then wh-table hit, then suffix heuristics, then
    OTHER. Output length always equals input length."""
    wh_surfaces = wh_table.wh_word_surfaces() if wh_table is not None else frozenset()
    out = []
    for surface in tokens:
        if surface in lexicon:
            out.append(Token(surface, lexicon[surface]))
        elif surface in wh_surfaces:
            out.append(Token(surface, PosTag.WH_QUESTION))
        else:
            heuristic = _suffix_tag(surface, lexicon)
            out.append(Token(surface, heuristic if heuristic else PosTag.OTHER))
    return out


def wh_lookup(
    tokens: Sequence[Token], table: WhTable
) -> Optional[tuple[str, SenseClass]]:
    """Find the question's wh phrase and sense class, if any."""
    return table.lookup([t.surface for t in tokens])


def common_prefix_len(a: str, b: str) -> int:
    n = 0
    for ca, cb in zip(a, b):
        if ca != cb:
            break
        n += 1
    return n


def surfaces_match(
    a: str, b: str, min_prefix: int = 3, prefix_coverage: float = 0.6
) -> bool:
    """Match predicate shared by retrieval and keyword matching: exact equality,
    or a common prefix of at least min_prefix codepoints covering at least
    prefix_coverage of the shorter surface."""
    if a == b:
        return True
    cp = common_prefix_len(a, b)
    return cp >= min_prefix and cp >= prefix_coverage * min(len(a), len(b))


class TableFormatError(ValueError):
    """Malformed wh-table or lexicon file; message names the line."""


def _data_path(name: str):
    return resources.files("bnqa").joinpath("data").joinpath(name)


def _read_text(path) -> str:
    if hasattr(path, "read_text"):
        return path.read_text(encoding="utf-8")
    with open(path, encoding="utf-8") as f:
        return f.read()


def _read_tsv_lines(path) -> Iterable[tuple[int, str]]:
    text = _read_text(path)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def load_wh_table(path) -> WhTable:
    entries = []
    for lineno, line in _read_tsv_lines(path):
        cols = line.split("\t")
        if len(cols) != 2:
            raise TableFormatError(
                f"line {lineno}: expected 2 tab-separated fields, got {len(cols)}"
            )
        phrase = tuple(normalize(cols[0]).split(" "))
        try:
            cls = SenseClass(cols[1].strip().lower())
        except ValueError:
            raise TableFormatError(
                f"line {lineno}: unknown sense class {cols[1].strip()!r}"
            ) from None
        entries.append((phrase, cls))
    return WhTable(tuple(entries))


def save_wh_table(table: WhTable, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for phrase, cls in table.entries:
            f.write(f"{' '.join(phrase)}\t{cls.value}\n")


def load_lexicon(path) -> dict[str, PosTag]:
    lexicon = {}
    for lineno, line in _read_tsv_lines(path):
        cols = line.split("\t")
        if len(cols) != 2:
            raise TableFormatError(
                f"line {lineno}: expected 2 tab-separated fields, got {len(cols)}"
            )
        lexicon[normalize(cols[0])] = parse_tag(cols[1])
    return lexicon


def default_wh_table() -> WhTable:
    return load_wh_table(_data_path("wh_table.tsv"))


def default_lexicon() -> dict[str, PosTag]:
    return load_lexicon(_data_path("lexicon.tsv"))
