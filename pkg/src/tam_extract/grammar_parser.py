"""Parser for the grammar specification language.

A grammar file holds one cascade level::

    SETTINGS:
    {
      MODULES: <Tokenizer>, <BasicTokenizer>, <Gazetteer>
      SEARCH_MODE: all_longest_matches
      OUTPUT: all
    }
    PATTERNS
    verb_detector := (gazetteer & [GTYPE: "verb", SURFACE: #base_form]):verb
    -> verb: verbal_analysis & [TYPE: "Verb", SURFACE: #base_form].
    END_PATTERNS

`//` starts a comment. A lone `>` between pattern elements is layout and is
skipped.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, get_args

import regex

from tam_extract.errors import FeatureStructureError, GrammarSyntaxError
from tam_extract.models.feature_structure import ConstraintSet, TypeRegistry, Variable
from tam_extract.models.grammar import (
    AlternationElement,
    AuxDefinition,
    ConstraintElement,
    FunctionCall,
    GrammarLevel,
    GrammarRule,
    GrammarSettings,
    LabeledElement,
    OptionalElement,
    PatternElement,
    SequenceElement,
    TemplateValue,
    bound_variables,
    iter_labels,
)
from tam_extract.types import OutputMode, PreprocessorName, SearchMode

logger = logging.getLogger(__name__)

_TOKEN_RE = regex.compile(
    r"""
    (?P<comment>//[^\n]*)
  | (?P<space>\s+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<var>\#[\p{L}_][\p{L}\p{N}_]*)
  | (?P<assign>:=)
  | (?P<arrow>->)
  | (?P<ident>[\p{L}_][\p{L}\p{N}_]*(?:-[\p{L}\p{N}_]+)*)
  | (?P<punct>[()\[\]{}|?&:,.<>])
    """,
    regex.VERBOSE,
)
_ESCAPE_RE = regex.compile(r"\\(.)")

_SETTING_KEYS = ("MODULES", "SEARCH_MODE", "OUTPUT")


@dataclass(frozen=True, slots=True)
class Lexeme:
    kind: str
    text: str
    line: int
    column: int


def tokenize_grammar(text: str) -> list[Lexeme]:
    """Split grammar text into lexemes with 1-based line and column numbers.

    Raises:
        GrammarSyntaxError: A character starts no lexeme.
    """
    lexemes: list[Lexeme] = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        found = _TOKEN_RE.match(text, position)
        column = position - line_start + 1
        if found is None:
            raise GrammarSyntaxError(f"unexpected character {text[position]!r}", line, column)
        kind = found.lastgroup
        assert kind is not None
        value = found.group()
        if kind == "string":
            lexemes.append(Lexeme(kind, _ESCAPE_RE.sub(r"\1", value[1:-1]), line, column))
        elif kind not in ("space", "comment"):
            lexemes.append(Lexeme(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = position + value.rindex("\n") + 1
        position = found.end()
    return lexemes


class _Parser:
    def __init__(self, lexemes: list[Lexeme], registry: TypeRegistry) -> None:
        self.lexemes = lexemes
        self.registry = registry
        self.index = 0

    # cursor helpers

    def peek(self, offset: int = 0) -> Lexeme | None:
        at = self.index + offset
        return self.lexemes[at] if at < len(self.lexemes) else None

    def at(self, kind: str, text: str | None = None, offset: int = 0) -> bool:
        lexeme = self.peek(offset)
        return lexeme is not None and lexeme.kind == kind and (text is None or lexeme.text == text)

    def error(self, message: str, lexeme: Lexeme | None = None) -> GrammarSyntaxError:
        lexeme = lexeme or self.peek()
        if lexeme is None:
            last = self.lexemes[-1] if self.lexemes else Lexeme("eof", "", 1, 1)
            return GrammarSyntaxError(f"{message} at end of input", last.line, last.column + len(last.text))
        return GrammarSyntaxError(f"{message}, got {lexeme.text!r}", lexeme.line, lexeme.column)

    def expect(self, kind: str, text: str | None = None) -> Lexeme:
        if not self.at(kind, text):
            raise self.error(f"expected {text or kind}")
        lexeme = self.lexemes[self.index]
        self.index += 1
        return lexeme

    def accept(self, kind: str, text: str | None = None) -> Lexeme | None:
        if self.at(kind, text):
            return self.expect(kind, text)
        return None

    def skip_layout(self) -> None:
        while self.at("punct", ">"):
            self.index += 1

    # level

    def parse_level(self, name: str) -> GrammarLevel:
        settings = GrammarSettings()
        if self.at("ident", "SETTINGS"):
            settings = self.parse_settings()
        self.expect("ident", "PATTERNS")
        rules: list[GrammarRule] = []
        seen: set[str] = set()
        while not self.at("ident", "END_PATTERNS"):
            if self.peek() is None:
                raise self.error("expected END_PATTERNS")
            head = self.peek()
            rule = self.parse_rule()
            if rule.name in seen:
                raise self.error(f"duplicate rule name '{rule.name}'", head)
            seen.add(rule.name)
            rules.append(rule)
        self.expect("ident", "END_PATTERNS")
        if self.peek() is not None:
            raise self.error("unexpected text after END_PATTERNS")
        return GrammarLevel(name=name, settings=settings, rules=tuple(rules))

    def parse_settings(self) -> GrammarSettings:
        self.expect("ident", "SETTINGS")
        self.accept("punct", ":")
        self.expect("punct", "{")
        values: dict[str, list[Lexeme]] = {}
        while not self.at("punct", "}"):
            key = self.expect("ident")
            if key.text not in _SETTING_KEYS:
                raise self.error(f"unknown setting '{key.text}'", key)
            self.expect("punct", ":")
            collected: list[Lexeme] = []
            while not self.at("punct", "}") and not (self.at("ident") and self.at("punct", ":", 1)):
                lexeme = self.peek()
                if lexeme is None:
                    raise self.error("expected '}'")
                collected.append(lexeme)
                self.index += 1
            values[key.text] = collected
        self.expect("punct", "}")
        return GrammarSettings(
            modules=self._modules(values.get("MODULES", [])),
            search_mode=self._choice(values.get("SEARCH_MODE"), get_args(SearchMode), "all_longest_matches"),
            output_mode=self._choice(values.get("OUTPUT"), get_args(OutputMode), "grammar"),
        )

    def _modules(self, lexemes: list[Lexeme]) -> tuple[PreprocessorName, ...]:
        allowed = get_args(PreprocessorName)
        modules: list[PreprocessorName] = []
        for lexeme in lexemes:
            if lexeme.kind == "punct" and lexeme.text in "<>,":
                continue
            if lexeme.kind != "ident" or lexeme.text not in allowed:
                raise GrammarSyntaxError(f"unknown module '{lexeme.text}'", lexeme.line, lexeme.column)
            modules.append(lexeme.text)  # type: ignore[arg-type]
        return tuple(modules)

    def _choice(self, lexemes: list[Lexeme] | None, allowed: tuple[str, ...], default: str) -> Any:
        if lexemes is None:
            return default
        if len(lexemes) != 1 or lexemes[0].text not in allowed:
            first = lexemes[0] if lexemes else self.peek()
            text = " ".join(lexeme.text for lexeme in lexemes)
            raise GrammarSyntaxError(
                f"expected one of {', '.join(allowed)}, got '{text}'",
                first.line if first else 1,
                first.column if first else 1,
            )
        return lexemes[0].text

    # rules

    def parse_rule(self) -> GrammarRule:
        head = self.expect("ident")
        self.expect("assign")
        lhs = self.parse_alternation()
        self.skip_layout()
        self.expect("arrow")
        label_lexeme = self.expect("ident")
        self.expect("punct", ":")
        type_lexeme = self.expect("ident")
        template: list[tuple[str, TemplateValue]] = []
        if self.accept("punct", "&"):
            template = self.parse_template()
        aux: list[AuxDefinition] = []
        while self.accept("punct", "&"):
            variable = self.expect("var")
            self.expect("assign")
            aux.append(AuxDefinition(variable=variable.text[1:], call=self.parse_call(self.expect("ident"))))
        self.expect("punct", ".")
        rule = GrammarRule(
            name=head.text,
            lhs=lhs,
            label=label_lexeme.text,
            output_type=type_lexeme.text,
            template=tuple(template),
            aux=tuple(aux),
            line=head.line,
        )
        self.check_rule(rule, head, label_lexeme, type_lexeme)
        return rule

    def parse_alternation(self) -> PatternElement:
        branches = [self.parse_sequence()]
        while self.accept("punct", "|"):
            branches.append(self.parse_sequence())
        return branches[0] if len(branches) == 1 else AlternationElement(branches=tuple(branches))

    def parse_sequence(self) -> PatternElement:
        elements: list[PatternElement] = []
        while True:
            self.skip_layout()
            if not (self.at("punct", "(") or self.at("ident")):
                break
            elements.append(self.parse_postfix())
        if not elements:
            raise self.error("expected a pattern element")
        return elements[0] if len(elements) == 1 else SequenceElement(elements=tuple(elements))

    def parse_postfix(self) -> PatternElement:
        element = self.parse_primary()
        while True:
            if self.accept("punct", "?"):
                element = OptionalElement(element=element)
            elif self.at("punct", ":") and self.at("ident", offset=1) and not self.at("punct", ":", 2):
                self.index += 1
                element = LabeledElement(element=element, label=self.expect("ident").text)
            else:
                return element

    def parse_primary(self) -> PatternElement:
        if self.accept("punct", "("):
            inner = self.parse_alternation()
            self.skip_layout()
            self.expect("punct", ")")
            return inner
        type_lexeme = self.expect("ident")
        required: list[tuple[str, str | Variable]] = []
        if self.accept("punct", "&"):
            self.expect("punct", "[")
            while not self.at("punct", "]"):
                feature = self.expect("ident")
                self.expect("punct", ":")
                if value := self.accept("var"):
                    required.append((feature.text, Variable(name=value.text[1:])))
                else:
                    required.append((feature.text, self.expect("string").text))
                if not self.accept("punct", ","):
                    break
            self.expect("punct", "]")
        constraints = ConstraintSet(type_name=type_lexeme.text, required=tuple(required))
        try:
            self.registry.check_constraints(constraints)
        except FeatureStructureError as exc:
            raise GrammarSyntaxError(str(exc), type_lexeme.line, type_lexeme.column) from None
        return ConstraintElement(constraints=constraints)

    def parse_template(self) -> list[tuple[str, TemplateValue]]:
        self.expect("punct", "[")
        template: list[tuple[str, TemplateValue]] = []
        while not self.at("punct", "]"):
            feature = self.expect("ident")
            self.expect("punct", ":")
            value: TemplateValue
            if lexeme := self.accept("var"):
                value = Variable(name=lexeme.text[1:])
            elif lexeme := self.accept("string"):
                value = lexeme.text
            else:
                value = self.parse_call(self.expect("ident"))
            template.append((feature.text, value))
            if not self.accept("punct", ","):
                break
        self.expect("punct", "]")
        return template

    def parse_call(self, name: Lexeme) -> FunctionCall:
        self.expect("punct", "(")
        args: list[Variable | str] = []
        while not self.at("punct", ")"):
            if lexeme := self.accept("var"):
                args.append(Variable(name=lexeme.text[1:]))
            else:
                args.append(self.expect("string").text)
            if not self.accept("punct", ","):
                break
        self.expect("punct", ")")
        return FunctionCall(name=name.text, args=tuple(args))

    def check_rule(self, rule: GrammarRule, head: Lexeme, label: Lexeme, output: Lexeme) -> None:
        labels = iter_labels(rule.lhs)
        if not labels:
            raise GrammarSyntaxError(f"rule '{rule.name}' has no labelled region", head.line, head.column)
        if len(labels) > 1:
            raise GrammarSyntaxError(f"rule '{rule.name}' has more than one label", head.line, head.column)
        if rule.label != labels[0]:
            raise GrammarSyntaxError(
                f"label '{rule.label}' is not defined on the left hand side", label.line, label.column
            )
        if rule.output_type not in self.registry:
            raise GrammarSyntaxError(f"unknown output type '{rule.output_type}'", output.line, output.column)
        declaration = self.registry.get(rule.output_type)
        for feature, _ in rule.template:
            if not declaration.declares(feature):
                raise GrammarSyntaxError(
                    f"feature '{feature}' is not declared for type '{rule.output_type}'", output.line, output.column
                )
        bound = bound_variables(rule.lhs)
        for definition in rule.aux:
            self._check_bound(rule, definition.call.variables, bound, head)
            bound.add(definition.variable)
        for _, value in rule.template:
            if isinstance(value, Variable):
                names = [value.name]
            elif isinstance(value, FunctionCall):
                names = value.variables
            else:
                continue
            self._check_bound(rule, names, bound, head)

    @staticmethod
    def _check_bound(rule: GrammarRule, names: list[str], bound: set[str], head: Lexeme) -> None:
        for name in names:
            if name not in bound:
                raise GrammarSyntaxError(f"unbound variable '#{name}' in rule '{rule.name}'", head.line, head.column)


def parse_grammar(text: str, registry: TypeRegistry, name: str = "") -> GrammarLevel:
    """Parse one cascade level.

    Args:
        text: Grammar file contents.
        registry: Declared types; every constraint and output is checked against it.
        name: Level name recorded on the result.

    Returns:
        The parsed level with its rules in source order.

    Raises:
        GrammarSyntaxError: Malformed text, an unknown type or feature, a
            missing label or a right hand side variable nothing binds.
    """
    level = _Parser(tokenize_grammar(text), registry).parse_level(name)
    logger.debug("Parsed level %r with %d rule(s)", name, len(level.rules))
    return level


def parse_grammar_file(path: Path | str, registry: TypeRegistry) -> GrammarLevel:
    path = Path(path)
    return parse_grammar(path.read_text(encoding="utf-8"), registry, name=path.stem)


def parse_manifest(text: str) -> list[str]:
    """Level file names, in cascade order, one per non-comment line."""
    return [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]
