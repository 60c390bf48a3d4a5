"""Lexicon parsing, compilation into a multi-word trie, and gazetteer annotation.

Lexicon lines look like::

    ihtiyaç var | GTYPE:request_verb | VOLITIONAL:asserted | TEMPORAL:simultaneous | SURFACE:ihtiyaç var

The key may span several words. Lines starting with `#` are comments, except
the `#@marker <pattern>` directive which tags the following entries with a
marker pattern (`#@marker none` clears the tag).
"""

import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Literal
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import marisa_trie
from pydantic import BaseModel, ValidationError

from tam_extract.errors import LexiconFormatError, LexiconSyntaxError
from tam_extract.models.feature_structure import GAZETTEER_DECLARATION, FlatFeatureStructure, TypeDeclaration
from tam_extract.models.lexicon_entry import LexiconEntry
from tam_extract.models.token import Token
from tam_extract.tokenizer import clause_initial_positions, lower_first
from tam_extract.utils import hash_model, split_pipe_fields

logger = logging.getLogger(__name__)

KEY_SEPARATOR = "\x1f"
SERIALIZATION_VERSION = 1
_MARKER_DIRECTIVE = "#@marker"


def parse_lexicon(text: str, declaration: TypeDeclaration = GAZETTEER_DECLARATION) -> list[LexiconEntry]:
    """Parse lexicon text into entries, in file order.

    Args:
        text: Lexicon file contents.
        declaration: The type every entry's assignments must fit.

    Returns:
        The parsed entries.

    Raises:
        LexiconSyntaxError: A line has no `|`, an assignment has no `:`, a
            feature is undeclared, or a key or value is empty.
    """
    entries: list[LexiconEntry] = []
    marker: str | None = None
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(_MARKER_DIRECTIVE):
            value = line[len(_MARKER_DIRECTIVE) :].strip()
            if not value:
                raise LexiconSyntaxError("marker directive without a pattern", line_number)
            marker = None if value == "none" else value
            continue
        if line.startswith("#"):
            continue
        if "|" not in line:
            raise LexiconSyntaxError(f"expected 'key | FEATURE:value ...', got '{line}'", line_number)
        key, *fields = split_pipe_fields(line)
        if not key:
            raise LexiconSyntaxError("empty key", line_number)
        assignments: dict[str, str] = {}
        for field in fields:
            if not field:
                continue
            feature, colon, value = field.partition(":")
            feature, value = feature.strip(), value.strip()
            if not colon:
                raise LexiconSyntaxError(f"assignment '{field}' has no ':'", line_number)
            if not declaration.declares(feature):
                raise LexiconSyntaxError(
                    f"feature '{feature}' is not declared for type '{declaration.type_name}'", line_number
                )
            if not value:
                raise LexiconSyntaxError(f"empty value for feature '{feature}'", line_number)
            assignments[feature] = value
        entries.append(LexiconEntry.from_words(key, assignments, line_number=line_number, marker=marker))
    return entries


class SerializedLexicon(BaseModel):
    format: Literal["tam-extract-lexicon"] = "tam-extract-lexicon"
    version: int = SERIALIZATION_VERSION
    checksum: str
    declaration: TypeDeclaration
    entries: list[LexiconEntry]


class CompiledLexicon:
    """Immutable longest-match index from word sequences to lexicon entries.

    Keys are stored in a marisa trie as words joined by an ASCII unit separator,
    so prefix search on a joined token window yields every key that starts at
    that window's first token.
    """

    def __init__(self, entries: Iterable[LexiconEntry], declaration: TypeDeclaration = GAZETTEER_DECLARATION) -> None:
        grouped: dict[str, list[LexiconEntry]] = {}
        for entry in entries:
            grouped.setdefault(KEY_SEPARATOR.join(entry.key), []).append(entry)
        self._entries: dict[str, tuple[LexiconEntry, ...]] = {key: tuple(group) for key, group in grouped.items()}
        self._trie = marisa_trie.Trie(list(self._entries))
        self._max_key_length = max((key.count(KEY_SEPARATOR) + 1 for key in self._entries), default=0)
        self.declaration = declaration

    def __len__(self) -> int:
        return sum(len(group) for group in self._entries.values())

    @property
    def entries(self) -> list[LexiconEntry]:
        return [entry for group in self._entries.values() for entry in group]

    @property
    def max_key_length(self) -> int:
        return self._max_key_length

    def lookup(self, words: Sequence[str] | str) -> list[LexiconEntry]:
        """Entries whose key equals the word sequence exactly, in file order."""
        key = words.split() if isinstance(words, str) else words
        return list(self._entries.get(KEY_SEPARATOR.join(key), ()))

    def _prefix_lengths(self, words: Sequence[str]) -> list[tuple[int, str]]:
        joined = KEY_SEPARATOR.join(words)
        found: list[tuple[int, str]] = []
        for prefix in self._trie.prefixes(joined):
            if len(prefix) == len(joined) or joined[len(prefix)] == KEY_SEPARATOR:
                found.append((prefix.count(KEY_SEPARATOR) + 1, prefix))
        return found

    def longest_match(
        self, surfaces: Sequence[str], position: int, fold_first: bool = False
    ) -> tuple[int, list[LexiconEntry]]:
        """Longest key starting at `position` and all of its entries.

        With `fold_first`, a capitalised first word also tries its lower-cased
        form; entries of both spellings are kept when they tie on length.
        """
        if not self._max_key_length or position >= len(surfaces):
            return 0, []
        window = list(surfaces[position : position + self._max_key_length])
        variants = [window]
        folded = lower_first(window[0])
        if fold_first and folded != window[0]:
            variants.append([folded, *window[1:]])
        best = 0
        keys: list[str] = []
        for variant in variants:
            for length, key in self._prefix_lengths(variant):
                if length > best:
                    best, keys = length, [key]
                elif length == best and key not in keys:
                    keys.append(key)
        return best, [entry for key in keys for entry in self._entries[key]]

    def annotate(self, tokens: Sequence[Token]) -> list[FlatFeatureStructure]:
        return annotate(tokens, self)

    def to_serialized(self) -> SerializedLexicon:
        entries = self.entries
        checksum = hash_model(
            {
                "declaration": self.declaration.model_dump(mode="json"),
                "entries": [entry.model_dump(mode="json") for entry in entries],
            }
        )
        return SerializedLexicon(checksum=checksum, declaration=self.declaration, entries=entries)

    def save(self, path: Path | str) -> None:
        Path(path).write_text(self.to_serialized().model_dump_json(indent=1), encoding="utf-8")
        logger.info("Wrote %d lexicon entries to %s", len(self), path)

    @classmethod
    def from_serialized(cls, payload: SerializedLexicon) -> Self:
        if payload.version != SERIALIZATION_VERSION:
            raise LexiconFormatError(f"Unsupported lexicon version {payload.version}")
        lexicon = cls(payload.entries, payload.declaration)
        if lexicon.to_serialized().checksum != payload.checksum:
            raise LexiconFormatError("Lexicon checksum mismatch")
        return lexicon

    @classmethod
    def load(cls, path: Path | str) -> Self:
        try:
            payload = SerializedLexicon.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except ValidationError as exc:
            raise LexiconFormatError(f"Not a compiled lexicon: {path}") from exc
        return cls.from_serialized(payload)

    @classmethod
    def from_path(cls, path: Path | str, declaration: TypeDeclaration = GAZETTEER_DECLARATION) -> Self:
        return cls(parse_lexicon(Path(path).read_text(encoding="utf-8"), declaration), declaration)


def compile_lexicon(
    entries: Iterable[LexiconEntry], declaration: TypeDeclaration = GAZETTEER_DECLARATION
) -> CompiledLexicon:
    return CompiledLexicon(entries, declaration)


def annotate(tokens: Sequence[Token], lexicon: CompiledLexicon) -> list[FlatFeatureStructure]:
    """Gazetteer structures for the longest key at every token position.

    The scan moves one token at a time, so keys starting inside a longer match
    are still found at their own positions. Annotations come out sorted by
    (start, -length).
    """
    surfaces = [token.surface for token in tokens]
    initial = clause_initial_positions(tokens)
    annotations: list[FlatFeatureStructure] = []
    for position in range(len(surfaces)):
        length, entries = lexicon.longest_match(surfaces, position, fold_first=position in initial)
        for entry in entries:
            annotations.append(lexicon.declaration.instantiate(entry.assignments, (position, position + length)))
    return annotations
