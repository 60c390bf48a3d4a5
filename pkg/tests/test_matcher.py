import random

import pytest

from tam_extract.errors import PackError, UnknownFunctionError
from tam_extract.functionals import FunctionRegistry
from tam_extract.grammar_parser import parse_grammar
from tam_extract.matcher import apply_rhs, basic_token_items, match_at, preprocess, run_cascade, run_level, token_items
from tam_extract.models.feature_structure import FlatFeatureStructure, TypeRegistry
from tam_extract.models.grammar import Cascade
from tam_extract.stream import Stream
from tam_extract.tokenizer import tokenize

TYPES = """
sym := [V]
out := [V, RULE]
token := [TYPE, SURFACE]
basic-token := [TYPE, SURFACE]
"""

TOY_RULES = """
PATTERNS
r1 := (sym & [V: "a"] sym & [V: "b"] ?):m -> m: out & [V: "r1"].
r2 := (sym & [V: "a"] | sym & [V: "c"] sym & [V: "c"]):m -> m: out & [V: "r2"].
END_PATTERNS
"""


@pytest.fixture
def registry() -> TypeRegistry:
    return TypeRegistry.from_text(TYPES)


def _symbols(text: str, start: int = 0) -> list[FlatFeatureStructure]:
    return [
        FlatFeatureStructure(type_name="sym", assignments=(("V", symbol),), span=(start + index, start + index + 1))
        for index, symbol in enumerate(text)
    ]


def _level(registry: TypeRegistry, body: str, settings: str = ""):
    return parse_grammar(f"{settings}PATTERNS\n{body}\nEND_PATTERNS\n", registry)


def _produced(stream: Stream) -> set[tuple[str | None, tuple[int, int]]]:
    return {(item.get("V"), item.span) for item in stream if item.type_name == "out"}


class TestMatchAt:
    def test_gap_is_skipped(self, registry):
        """Positions nobody occupies are stepped over."""
        level = _level(registry, 'r := (sym & [V: "a"] sym & [V: "b"]):m -> m: out.')
        stream = Stream([*_symbols("a"), *_symbols("b", start=3)])
        [result] = match_at(level.rules[0].lhs, stream, 0)
        assert (result.start, result.end) == (0, 4)

    def test_label_span(self, registry):
        level = _level(registry, 'r := sym & [V: "a"] (sym & [V: "b"]):m -> m: out.')
        [result] = match_at(level.rules[0].lhs, Stream(_symbols("ab")), 0)
        assert result.label_span("m") == (1, 2)
        assert (result.start, result.end) == (0, 2)

    def test_optional_tried_present_first(self, registry):
        level = _level(registry, 'r := (sym & [V: "a"] sym & [V: "b"] ?):m -> m: out.')
        results = match_at(level.rules[0].lhs, Stream(_symbols("ab")), 0)
        assert [result.end for result in results] == [2, 1]

    def test_repeated_variable(self, registry):
        level = _level(registry, 'r := (sym & [V: #x] sym & [V: #x]):m -> m: out & [V: #x].')
        lhs = level.rules[0].lhs
        assert match_at(lhs, Stream(_symbols("aa")), 0)[0].binding_map == {"x": "a"}
        assert match_at(lhs, Stream(_symbols("ab")), 0) == []

    def test_ambiguous_items_are_branches(self, registry):
        level = _level(registry, 'r := (sym & [V: #x]):m -> m: out & [V: #x].')
        stream = Stream([*_symbols("a"), *_symbols("b")])
        assert [result.binding_map["x"] for result in match_at(level.rules[0].lhs, stream, 0)] == ["a", "b"]

    def test_no_item_at_end(self, registry):
        level = _level(registry, 'r := (sym & [V: "a"]):m -> m: out.')
        assert match_at(level.rules[0].lhs, Stream(_symbols("a")), 1) == []


class TestApplyRhs:
    def test_rule_feature_filled(self, registry):
        level = _level(registry, 'r := (sym & [V: #x]):m -> m: out & [V: Conc(#x, "!")].')
        stream = Stream(_symbols("a"))
        [result] = match_at(level.rules[0].lhs, stream, 0)
        ffs = apply_rhs(level.rules[0], result, stream, registry)
        assert ffs.features == {"V": "a!", "RULE": "r"}
        assert ffs.span == (0, 1)

    def test_unknown_function(self, registry):
        level = _level(registry, 'r := (sym & [V: #x]):m -> m: out & [V: Nope(#x)].')
        stream = Stream(_symbols("a"))
        [result] = match_at(level.rules[0].lhs, stream, 0)
        with pytest.raises(UnknownFunctionError):
            apply_rhs(level.rules[0], result, stream, registry)

    def test_custom_functional(self, registry):
        level = _level(registry, 'r := (sym & [V: #x]):m -> m: out & [V: Shout(#x)].')
        stream = Stream(_symbols("a"))
        [result] = match_at(level.rules[0].lhs, stream, 0)
        functions = FunctionRegistry().with_functions({"Shout": lambda context, value: value.upper()})
        assert apply_rhs(level.rules[0], result, stream, registry, functions).get("V") == "A"

    def test_unbound_optional_leaves_feature_absent(self, registry):
        level = _level(registry, 'r := (sym & [V: "a"] sym & [V: #x] ?):m -> m: out & [V: #x].')
        stream = Stream(_symbols("a"))
        [result] = match_at(level.rules[0].lhs, stream, 0)
        assert "V" not in apply_rhs(level.rules[0], result, stream, registry)


class TestRunLevel:
    @pytest.mark.parametrize(
        "mode, expected",
        [
            ("all_matches", {("r1", (0, 2)), ("r1", (0, 1)), ("r2", (0, 1)), ("r2", (2, 4))}),
            ("all_longest_matches", {("r1", (0, 2)), ("r2", (2, 4))}),
            ("longest_match", {("r1", (0, 2)), ("r2", (2, 4))}),
        ],
    )
    def test_search_modes(self, registry, mode, expected):
        """`abcc`: r1 and r2 both match `a`, r2 also matches `cc`."""
        stream = run_level(parse_grammar(TOY_RULES, registry), Stream(_symbols("abcc")), registry, search_mode=mode)
        assert _produced(stream) == expected

    def test_longest_match_resumes_after_selection(self, registry):
        level = _level(registry, 'r := (sym & [V: #x] sym & [V: #y] ?):m -> m: out & [V: Conc(#x, #y)].')
        stream = run_level(level, Stream(_symbols("abc")), registry, search_mode="longest_match")
        assert _produced(stream) == {("ab", (0, 2)), ("c", (2, 3))}

    def test_output_modes(self, registry):
        body = 'r := (sym & [V: "a"]):m -> m: out.'
        only = run_level(_level(registry, body), Stream(_symbols("ab")), registry)
        assert [item.type_name for item in only] == ["out"]
        forwarded = run_level(_level(registry, body, "SETTINGS:\n{\n OUTPUT: all\n}\n"), Stream(_symbols("ab")), registry)
        assert sorted(item.type_name for item in forwarded) == ["out", "sym", "sym"]

    def test_duplicates_collapse(self, registry):
        body = 'r := (sym & [V: "a"] | sym & [V: "a"] sym & [V: "b"] ?):m -> m: out & [V: "x"].'
        stream = run_level(_level(registry, body), Stream(_symbols("a")), registry, search_mode="all_matches")
        assert len(stream) == 1

    def test_outputs_differing_only_in_rule_collapse(self, registry):
        """The earlier rule names a reading both rules produce."""
        body = 'named := (sym & [V: "a"]):m -> m: out & [V: "x"].\ngeneric := (sym & [V: #v]):m -> m: out & [V: "x"].'
        stream = run_level(_level(registry, body), Stream(_symbols("a")), registry, search_mode="all_matches")
        [item] = [item for item in stream if item.type_name == "out"]
        assert item.get("RULE") == "named"


def _brute_force(symbols: str, mode: str) -> set[tuple[str, tuple[int, int]]]:
    found: set[tuple[str, tuple[int, int]]] = set()
    resume = 0
    for position, symbol in enumerate(symbols):
        following = symbols[position + 1] if position + 1 < len(symbols) else None
        candidates: list[tuple[str, int]] = []
        if symbol == "a":
            if following == "b":
                candidates.append(("r1", position + 2))
            candidates.append(("r1", position + 1))
            candidates.append(("r2", position + 1))
        if symbol == "c" and following == "c":
            candidates.append(("r2", position + 2))
        if not candidates or position < resume:
            continue
        longest = max(end for _, end in candidates)
        if mode == "all_longest_matches":
            candidates = [candidate for candidate in candidates if candidate[1] == longest]
        elif mode == "longest_match":
            candidates = [next(candidate for candidate in candidates if candidate[1] == longest)]
            resume = longest
        found.update((name, (position, end)) for name, end in candidates)
    return found


@pytest.mark.parametrize("mode", ["all_matches", "all_longest_matches", "longest_match"])
def test_run_level_agrees_with_brute_force(registry, mode):
    """Random symbol strings produce exactly the matches an exhaustive enumeration finds."""
    level = parse_grammar(TOY_RULES, registry)
    rng = random.Random(20111023)
    for _ in range(400):
        symbols = "".join(rng.choice("abc") for _ in range(rng.randint(0, 12)))
        stream = run_level(level, Stream(_symbols(symbols)), registry, search_mode=mode)
        assert _produced(stream) == _brute_force(symbols, mode), symbols


class TestPreprocess:
    def test_token_items_include_unsplit_apostrophe(self):
        items = token_items(tokenize("Erçiş'te hasar"))
        spans = {(item.get("SURFACE"), item.span) for item in items}
        assert ("Erçiş'te", (0, 3)) in spans
        assert ("Erçiş", (0, 1)) in spans
        assert len(items) == 5

    def test_basic_token_items(self):
        items = basic_token_items(tokenize("Van'da deprem."))
        assert [(item.get("SURFACE"), item.span) for item in items] == [("'", (1, 2)), (".", (4, 5))]

    def test_gazetteer_needs_lexicon(self, registry):
        with pytest.raises(PackError, match="lexicon"):
            preprocess(["Gazetteer"], tokenize("deprem"), None, registry)

    def test_run_cascade_with_tokenizer(self, registry):
        level = parse_grammar(
            'SETTINGS:\n{\n MODULES: <Tokenizer>\n}\nPATTERNS\n'
            'r := (token & [TYPE: "any_natural_number", SURFACE: #n]):m -> m: out & [V: #n].\nEND_PATTERNS',
            registry,
        )
        stream = run_cascade(Cascade(levels=(level,)), tokenize("3 noktada 25 apartman"), None, registry)
        assert _produced(stream) == {("3", (0, 1)), ("25", (2, 3))}


def test_search_mode_lattice(registry):
    """Longest-match output is a subset of all-longest output, itself a subset of all matches."""
    level = parse_grammar(TOY_RULES, registry)
    rng = random.Random(7)
    for _ in range(400):
        stream = Stream(_symbols("".join(rng.choice("abc") for _ in range(rng.randint(1, 10)))))
        everything, longest, single = (
            _produced(run_level(level, stream, registry, search_mode=mode))
            for mode in ("all_matches", "all_longest_matches", "longest_match")
        )
        assert single <= longest <= everything
