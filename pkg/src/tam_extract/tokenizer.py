"""Sentence splitting, tokenization and token classification for Turkish news text."""

from collections.abc import Iterable
from functools import lru_cache

import regex

from tam_extract.models.token import SentenceSpan, Token
from tam_extract.types import TokenClass

APOSTROPHES = frozenset({"'", "’"})
DEFAULT_ABBREVIATIONS = frozenset({"dr.", "prof.", "doç.", "yrd.", "vb.", "vs.", "bkz.", "av.", "sn.", "st."})
CLAUSE_OPENERS = frozenset({'"', "“", ":"})

_WORD_RE = regex.compile(r"\S+")
_EDGES_RE = regex.compile(r"(?P<lead>\p{P}*)(?P<core>.*?)(?P<trail>\p{P}*)", regex.DOTALL)
_BOUNDARY_RE = regex.compile(r"[.!?]+[\"”’»)]*(?=\s+[\"“«(]?\p{Lu})")
_INITIAL_RE = regex.compile(r"\p{Lu}\.")

_CLASS_PATTERNS: list[tuple[TokenClass, regex.Pattern[str]]] = [
    ("any_natural_number", regex.compile(r"\d+")),
    ("apostrophe", regex.compile(r"['’]")),
    ("punctuation", regex.compile(r"\p{P}+")),
    ("lowercase_word", regex.compile(r"\p{Ll}+")),
    ("first_capital_word", regex.compile(r"\p{Lu}\p{Ll}*")),
    ("word_with_hyphen_first_capital", regex.compile(r"\p{Lu}[\p{L}\p{N}]*(?:-[\p{L}\p{N}]+)+")),
    ("word_with_apostrophe_first_capital", regex.compile(r"\p{Lu}[\p{L}\p{N}]*['’][\p{L}\p{N}]+")),
    ("mixed_word_first_capital", regex.compile(r"\p{Lu}[\p{L}\p{N}]*")),
]


def turkish_lower(text: str) -> str:
    return text.replace("İ", "i").replace("I", "ı").lower()


def lower_first(text: str) -> str:
    return turkish_lower(text[:1]) + text[1:]


@lru_cache(maxsize=65536)
def classify_token(surface: str) -> TokenClass:
    for token_class, pattern in _CLASS_PATTERNS:
        if pattern.fullmatch(surface):
            return token_class
    return "other"


def split_apostrophe(token: Token) -> tuple[Token, ...]:
    """Split `Van'a` into stem, apostrophe and suffix tokens.

    The split happens at the first apostrophe. Words without an apostrophe, or
    whose stem or suffix would be empty, come back unchanged as a 1-tuple.
    """
    surface = token.surface
    index = next((i for i, char in enumerate(surface) if char in APOSTROPHES), -1)
    if index <= 0 or index == len(surface) - 1:
        return (token,)
    start = token.char_span[0]
    stem, mark, suffix = surface[:index], surface[index], surface[index + 1 :]
    return (
        Token(surface=stem, token_class=classify_token(stem), char_span=(start, start + index)),
        Token(surface=mark, token_class=classify_token(mark), char_span=(start + index, start + index + 1)),
        Token(surface=suffix, token_class=classify_token(suffix), char_span=(start + index + 1, token.char_span[1])),
    )


def _is_abbreviation(word: str, abbreviations: Iterable[str]) -> bool:
    return turkish_lower(word) in abbreviations


def _detach_punctuation(word: str, start: int, abbreviations: frozenset[str]) -> list[Token]:
    found = _EDGES_RE.fullmatch(word)
    assert found is not None
    lead, core, trail = found["lead"], found["core"], found["trail"]
    if trail.startswith(".") and _is_abbreviation(core + ".", abbreviations):
        core, trail = core + ".", trail[1:]
    pieces: list[tuple[str, int]] = [(char, start + i) for i, char in enumerate(lead)]
    if core:
        pieces.append((core, start + len(lead)))
    offset = start + len(lead) + len(core)
    pieces.extend((char, offset + i) for i, char in enumerate(trail))
    return [
        Token(surface=text, token_class=classify_token(text), char_span=(at, at + len(text))) for text, at in pieces
    ]


def tokenize(
    sentence_text: str, offset: int = 0, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[Token]:
    """Tokenize one sentence.

    Whitespace splitting comes first, then leading and trailing punctuation is
    detached character by character (abbreviations keep their dot), then words
    containing an apostrophe are split.

    Args:
        sentence_text: The sentence.
        offset: Character offset of the sentence in its source line.
        abbreviations: Lower-cased abbreviations that keep their final dot.

    Returns:
        Classified tokens with character spans into the source line.
    """
    tokens: list[Token] = []
    for word in _WORD_RE.finditer(sentence_text):
        for token in _detach_punctuation(word.group(), offset + word.start(), abbreviations):
            tokens.extend(split_apostrophe(token))
    return tokens


def _guards_boundary(line: str, end: int, abbreviations: frozenset[str]) -> bool:
    words = line[:end].split()
    if not words:
        return False
    last = words[-1].lstrip("\"“«(")
    return _is_abbreviation(last, abbreviations) or bool(_INITIAL_RE.fullmatch(last))


def split_sentences(
    line: str, line_index: int = 0, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[SentenceSpan]:
    """Split a source line into tokenized sentences.

    A boundary is a run of `.`, `!` or `?` (plus closing quotes) followed by
    whitespace and a capital letter, unless the dot closes an abbreviation or a
    single-letter initial.
    """
    cuts: list[int] = []
    for boundary in _BOUNDARY_RE.finditer(line):
        terminator_end = boundary.start() + len(boundary.group().rstrip("\"”’»)"))
        if line[terminator_end - 1] == "." and _guards_boundary(line, terminator_end, abbreviations):
            continue
        cuts.append(boundary.end())
    sentences: list[SentenceSpan] = []
    start = 0
    for cut in [*cuts, len(line)]:
        chunk = line[start:cut]
        stripped = chunk.strip()
        if stripped:
            begin = start + (len(chunk) - len(chunk.lstrip()))
            sentences.append(
                SentenceSpan(
                    text=stripped,
                    tokens=tuple(tokenize(stripped, begin, abbreviations)),
                    source_line_index=line_index,
                    char_span=(begin, begin + len(stripped)),
                )
            )
        start = cut
    return sentences


def clause_initial_positions(tokens: list[Token] | tuple[Token, ...]) -> set[int]:
    """Positions where a capitalised word may stand for a lower-case lexicon key."""
    positions = {0} if tokens else set()
    for index, token in enumerate(tokens[:-1]):
        if token.surface in CLAUSE_OPENERS:
            positions.add(index + 1)
    return positions
