import random

import pytest

from tam_extract.errors import LexiconFormatError, LexiconSyntaxError
from tam_extract.lexicon import CompiledLexicon, annotate, compile_lexicon, parse_lexicon
from tam_extract.models.feature_structure import TypeDeclaration
from tam_extract.models.lexicon_entry import LexiconEntry
from tam_extract.pack import shipped_pack_root
from tam_extract.tokenizer import tokenize

LEXICON_TEXT = """
# needs
içme suyu | GTYPE:humanitarian_need | SURFACE:içme suyu
iş makinalarına | GTYPE:humanitarian_need | SURFACE:iş makinası

#@marker P-(y)DIr
ihtiyaç var | GTYPE:request_verb | VOLITIONAL:asserted | EPISTEMIC:certain | TEMPORAL:perfect | SURFACE:ihtiyaç var
ihtiyaç var | GTYPE:request_verb | VOLITIONAL:asserted | EPISTEMIC:certain | TEMPORAL:simultaneous | SURFACE:ihtiyaç var
#@marker none
var | GTYPE:verb | SURFACE:var
"""


@pytest.fixture
def lexicon() -> CompiledLexicon:
    return compile_lexicon(parse_lexicon(LEXICON_TEXT))


class TestParseLexicon:
    def test_entries_in_file_order(self):
        entries = parse_lexicon(LEXICON_TEXT)
        assert [entry.text for entry in entries] == ["içme suyu", "iş makinalarına", "ihtiyaç var", "ihtiyaç var", "var"]
        assert entries[0].key == ("içme", "suyu")
        assert entries[2].assignments["TEMPORAL"] == "perfect"

    def test_marker_directive(self):
        entries = parse_lexicon(LEXICON_TEXT)
        assert [entry.marker for entry in entries] == [None, None, "P-(y)DIr", "P-(y)DIr", None]

    def test_line_numbers(self):
        entries = parse_lexicon("\n\nvar | GTYPE:verb")
        assert entries[0].line_number == 3

    @pytest.mark.parametrize(
        "line, message",
        [
            ("ihtiyaç var", "expected"),
            ("var | GTYPE verb", "has no ':'"),
            ("var | COLOUR:red", "not declared"),
            ("var | GTYPE:", "empty value"),
            (" | GTYPE:verb", "empty key"),
            ("#@marker", "marker directive"),
        ],
    )
    def test_syntax_errors(self, line, message):
        with pytest.raises(LexiconSyntaxError, match=message) as caught:
            parse_lexicon("# header\n" + line)
        assert caught.value.line_number == 2

    def test_custom_declaration(self):
        declaration = TypeDeclaration(type_name="gazetteer", features=("GTYPE",))
        with pytest.raises(LexiconSyntaxError, match="SURFACE"):
            parse_lexicon("var | GTYPE:verb | SURFACE:var", declaration)


class TestCompiledLexicon:
    def test_lookup(self, lexicon):
        assert len(lexicon.lookup("ihtiyaç var")) == 2
        assert lexicon.lookup(["ihtiyaç"]) == []
        assert len(lexicon) == 5
        assert lexicon.max_key_length == 2

    def test_longest_match(self, lexicon):
        length, entries = lexicon.longest_match(["ihtiyaç", "var", "."], 0)
        assert length == 2
        assert {entry.assignments["TEMPORAL"] for entry in entries} == {"perfect", "simultaneous"}

    def test_no_match(self, lexicon):
        assert lexicon.longest_match(["deprem"], 0) == (0, [])
        assert lexicon.longest_match(["var"], 5) == (0, [])

    def test_save_and_load(self, lexicon, tmp_path):
        target = tmp_path / "lexicon.json"
        lexicon.save(target)
        loaded = CompiledLexicon.load(target)
        assert loaded.entries == lexicon.entries
        assert loaded.declaration == lexicon.declaration

    def test_checksum_mismatch(self, lexicon, tmp_path):
        target = tmp_path / "lexicon.json"
        lexicon.save(target)
        target.write_text(target.read_text(encoding="utf-8").replace("simultaneous", "anterior"), encoding="utf-8")
        with pytest.raises(LexiconFormatError, match="checksum"):
            CompiledLexicon.load(target)

    def test_not_a_lexicon(self, tmp_path):
        target = tmp_path / "broken.json"
        target.write_text('{"hello": 1}', encoding="utf-8")
        with pytest.raises(LexiconFormatError):
            CompiledLexicon.load(target)

    def test_wrong_version(self, lexicon):
        payload = lexicon.to_serialized().model_copy(update={"version": 99})
        with pytest.raises(LexiconFormatError, match="version"):
            CompiledLexicon.from_serialized(payload)


class TestAnnotate:
    def test_longest_key_at_each_position(self, lexicon):
        """The scan still finds `var` inside the longer `ihtiyaç var`."""
        annotations = annotate(tokenize("su ihtiyaç var"), lexicon)
        spans = [(item.span, item.get("GTYPE")) for item in annotations]
        assert spans == [((1, 3), "request_verb"), ((1, 3), "request_verb"), ((2, 3), "verb")]

    def test_clause_initial_fallback(self, lexicon):
        """A capitalised word at the sentence start also matches its lower-case key."""
        annotations = lexicon.annotate(tokenize("İçme suyu lazım"))
        assert annotations[0].get("SURFACE") == "içme suyu"
        assert annotations[0].span == (0, 2)

    def test_no_fallback_inside_clause(self, lexicon):
        assert annotate(tokenize("ve İçme suyu"), lexicon) == []

    def test_fallback_after_quote(self, lexicon):
        annotations = annotate(tokenize('Kızılay: "İçme suyu'), lexicon)
        assert [item.span for item in annotations] == [(3, 5)]


def test_seed_lexicon_round_trip():
    """Every shipped lexicon line is found again by exact lookup."""
    entries = parse_lexicon(shipped_pack_root().joinpath("lexicon.lex").read_text(encoding="utf-8"))
    lexicon = compile_lexicon(entries)
    for entry in entries:
        assert entry in lexicon.lookup(entry.key)


def test_longest_match_agrees_with_linear_scan():
    rng = random.Random(10_000)
    words = ["su", "yardım", "ihtiyaç", "var", "çadır", "ekmek", "kan", "deprem"]
    keys = {tuple(rng.choice(words) for _ in range(rng.randint(1, 4))) for _ in range(10_000)}
    lexicon = compile_lexicon(LexiconEntry(key=key, assignments={"GTYPE": "need"}) for key in keys)
    for _ in range(100):
        surfaces = [rng.choice(words) for _ in range(rng.randint(1, 8))]
        position = rng.randrange(len(surfaces))
        expected = max(
            (
                length
                for length in range(1, min(4, len(surfaces) - position) + 1)
                if tuple(surfaces[position : position + length]) in keys
            ),
            default=0,
        )
        length, entries = lexicon.longest_match(surfaces, position)
        assert length == expected
        assert all(entry.key == tuple(surfaces[position : position + length]) for entry in entries)
