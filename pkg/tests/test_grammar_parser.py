import pytest

from tam_extract.errors import GrammarSyntaxError
from tam_extract.grammar_parser import parse_grammar, parse_manifest, tokenize_grammar
from tam_extract.models.feature_structure import TypeRegistry, Variable
from tam_extract.models.grammar import (
    AlternationElement,
    ConstraintElement,
    FunctionCall,
    LabeledElement,
    OptionalElement,
    SequenceElement,
)

TYPES = """
gazetteer := [GTYPE, VOLITIONAL, EPISTEMIC, TEMPORAL, SURFACE]
token := [TYPE, SURFACE]
verbal_analysis := [TYPE, SURFACE, VOLITIONAL, EPISTEMIC, TEMPORAL, TEMPSPEC, RULE]
"""

VERB_LEVEL = """
// verbs straight from the lexicon
SETTINGS:
{
  MODULES: <Tokenizer>, <Gazetteer>
  SEARCH_MODE: longest_match
  OUTPUT: all
}
PATTERNS

verb_detector := ((gazetteer & [GTYPE: "verb", VOLITIONAL: #vol, SURFACE: #base_form]
                   | gazetteer & [GTYPE: "aux\\"verb", SURFACE: #base_form])
                  token & [SURFACE: "."] ?):verb
> -> verb: verbal_analysis & [TYPE: "Verb", SURFACE: #surface, VOLITIONAL: #vol]
& #surface := ConcWithBlanks(#base_form, "!").

END_PATTERNS
"""


@pytest.fixture
def registry() -> TypeRegistry:
    return TypeRegistry.from_text(TYPES)


def _grammar(body: str) -> str:
    return f"PATTERNS\n{body}\nEND_PATTERNS\n"


class TestParseGrammar:
    def test_settings(self, registry):
        level = parse_grammar(VERB_LEVEL, registry, name="level1")
        assert level.name == "level1"
        assert level.settings.modules == ("Tokenizer", "Gazetteer")
        assert level.settings.search_mode == "longest_match"
        assert level.settings.output_mode == "all"

    def test_default_settings(self, registry):
        level = parse_grammar(_grammar('r := (token & [TYPE: "x"]):l -> l: verbal_analysis.'), registry)
        assert level.settings.search_mode == "all_longest_matches"
        assert level.settings.output_mode == "grammar"
        assert level.settings.modules == ()

    def test_rule_structure(self, registry):
        rule = parse_grammar(VERB_LEVEL, registry).rule("verb_detector")
        assert rule.label == "verb"
        assert rule.output_type == "verbal_analysis"
        assert isinstance(rule.lhs, LabeledElement)
        sequence = rule.lhs.element
        assert isinstance(sequence, SequenceElement)
        assert isinstance(sequence.elements[0], AlternationElement)
        assert isinstance(sequence.elements[1], OptionalElement)
        assert rule.consumed_types == {"gazetteer", "token"}

    def test_string_escape(self, registry):
        rule = parse_grammar(VERB_LEVEL, registry).rule("verb_detector")
        literals = [constraints.literals.get("GTYPE") for constraints in rule.constraints]
        assert 'aux"verb' in literals

    def test_template_and_aux(self, registry):
        rule = parse_grammar(VERB_LEVEL, registry).rule("verb_detector")
        assert rule.template[0] == ("TYPE", "Verb")
        assert rule.template[1] == ("SURFACE", Variable(name="surface"))
        assert rule.aux[0].variable == "surface"
        assert rule.aux[0].call == FunctionCall(name="ConcWithBlanks", args=(Variable(name="base_form"), "!"))
        assert [call.name for call in rule.calls] == ["ConcWithBlanks"]

    def test_function_call_in_template(self, registry):
        text = _grammar('r := (token & [SURFACE: #s]):l -> l: verbal_analysis & [SURFACE: ConcWithBlanks(#s, #s)].')
        rule = parse_grammar(text, registry).rules[0]
        assert isinstance(rule.template[0][1], FunctionCall)

    def test_rules_in_source_order(self, registry):
        text = _grammar(
            'b := (token & [TYPE: "x"]):l -> l: verbal_analysis.\n'
            'a := (token & [TYPE: "y"]):l -> l: verbal_analysis.'
        )
        assert [rule.name for rule in parse_grammar(text, registry).rules] == ["b", "a"]

    def test_constraint_element(self, registry):
        rule = parse_grammar(_grammar('r := (token & [TYPE: "x"]):l -> l: verbal_analysis.'), registry).rules[0]
        assert isinstance(rule.lhs, LabeledElement)
        assert isinstance(rule.lhs.element, ConstraintElement)


class TestGrammarErrors:
    def test_unknown_type_position(self, registry):
        text = 'PATTERNS\nr := (foo & [A: "x"]):l\n-> l: verbal_analysis.\nEND_PATTERNS'
        with pytest.raises(GrammarSyntaxError, match="Unknown type 'foo'") as caught:
            parse_grammar(text, registry)
        assert (caught.value.line, caught.value.column) == (2, 7)

    @pytest.mark.parametrize(
        "body, message",
        [
            ('r := (token & [COLOUR: "x"]):l -> l: verbal_analysis.', "not declared"),
            ('r := (token & [TYPE: "x"]) -> l: verbal_analysis.', "no labelled region"),
            ('r := (token & [TYPE: "x"]):l -> m: verbal_analysis.', "label 'm'"),
            ('r := (token & [TYPE: "x"]):l -> l: nothing.', "unknown output type"),
            ('r := (token & [TYPE: "x"]):l -> l: verbal_analysis & [COLOUR: "x"].', "not declared"),
            ('r := (token & [TYPE: "x"]):l -> l: verbal_analysis & [SURFACE: #s].', "unbound variable '#s'"),
            ('r := (token & [TYPE: #t]):l -> l: verbal_analysis & [TYPE: #t] & #s := Conc(#u).', "unbound variable '#u'"),
            ('r := (token & [TYPE: "x"]):l -> l: verbal_analysis', "expected ."),
            (
                'r := (token & [TYPE: "x"]):l -> l: verbal_analysis.\nr := (token & [TYPE: "y"]):l -> l: verbal_analysis.',
                "duplicate rule name",
            ),
        ],
    )
    def test_rule_errors(self, registry, body, message):
        with pytest.raises(GrammarSyntaxError, match=message):
            parse_grammar(_grammar(body), registry)

    @pytest.mark.parametrize(
        "settings, message",
        [
            ("MODULES: <Parser>", "unknown module 'Parser'"),
            ("SEARCH_MODE: fastest", "expected one of"),
            ("OUTPUT: everything", "expected one of"),
            ("COLOUR: red", "unknown setting"),
        ],
    )
    def test_settings_errors(self, registry, settings, message):
        text = "SETTINGS:\n{\n  " + settings + "\n}\n" + _grammar('r := (token & [TYPE: "x"]):l -> l: verbal_analysis.')
        with pytest.raises(GrammarSyntaxError, match=message):
            parse_grammar(text, registry)

    def test_missing_end(self, registry):
        with pytest.raises(GrammarSyntaxError, match="END_PATTERNS"):
            parse_grammar('PATTERNS\nr := (token & [TYPE: "x"]):l -> l: verbal_analysis.\n', registry)

    def test_unexpected_character(self):
        with pytest.raises(GrammarSyntaxError, match="unexpected character") as caught:
            tokenize_grammar("PATTERNS\n  r := $")
        assert (caught.value.line, caught.value.column) == (2, 8)


def test_tokenize_grammar_skips_comments():
    lexemes = tokenize_grammar('r := // note\n"a\\"b"')
    assert [(lexeme.kind, lexeme.text) for lexeme in lexemes] == [("ident", "r"), ("assign", ":="), ("string", 'a"b')]
    assert lexemes[2].line == 2


def test_parse_manifest():
    assert parse_manifest("# levels\nlevel1.grm\n\n level2.grm \n") == ["level1.grm", "level2.grm"]
