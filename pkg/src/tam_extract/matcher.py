"""Execution of grammar levels over item streams.

A rule's left hand side is matched like a regular expression whose symbols
are constraint sets and whose input is a stream of feature structures. A
constraint consumes one item starting at the first occupied position at or
after the cursor, so gaps left by levels that only forward their own output
are skipped. Ambiguous items at one position are separate branches.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from tam_extract.errors import PackError
from tam_extract.functionals import FunctionRegistry
from tam_extract.lexicon import CompiledLexicon, annotate
from tam_extract.models.feature_structure import (
    BASIC_TOKEN_DECLARATION,
    TOKEN_DECLARATION,
    FlatFeatureStructure,
    Span,
    TypeDeclaration,
    TypeRegistry,
    Variable,
)
from tam_extract.models.grammar import (
    AlternationElement,
    Cascade,
    ConstraintElement,
    FunctionCall,
    GrammarLevel,
    GrammarRule,
    LabeledElement,
    OptionalElement,
    PatternElement,
    SequenceElement,
    TemplateValue,
)
from tam_extract.models.token import Token
from tam_extract.stream import MatchContext, Stream
from tam_extract.tokenizer import classify_token
from tam_extract.types import PreprocessorName, SearchMode

logger = logging.getLogger(__name__)

_Bindings = dict[str, str]
_Labels = dict[str, Span]
_Path = tuple[int, _Bindings, tuple[FlatFeatureStructure, ...], _Labels]


@dataclass(frozen=True)
class MatchResult:
    start: int
    end: int
    bindings: tuple[tuple[str, str], ...]
    label_spans: tuple[tuple[str, Span], ...] = ()
    consumed: tuple[FlatFeatureStructure, ...] = field(default=(), compare=False)

    @property
    def binding_map(self) -> dict[str, str]:
        return dict(self.bindings)

    def label_span(self, label: str) -> Span:
        return dict(self.label_spans).get(label, (self.start, self.end))


def _walk(
    element: PatternElement,
    stream: Stream,
    cursor: int,
    bindings: _Bindings,
    consumed: tuple[FlatFeatureStructure, ...],
    labels: _Labels,
) -> Iterator[_Path]:
    if isinstance(element, ConstraintElement):
        position = stream.next_start(cursor)
        if position is None:
            return
        for item in stream.items_at(position):
            captured = element.constraints.match(item)
            if captured is None:
                continue
            if any(bindings.get(name, value) != value for name, value in captured.items()):
                continue
            yield item.end, {**bindings, **captured}, (*consumed, item), labels
    elif isinstance(element, SequenceElement):
        yield from _walk_sequence(element.elements, stream, cursor, bindings, consumed, labels)
    elif isinstance(element, AlternationElement):
        for branch in element.branches:
            yield from _walk(branch, stream, cursor, bindings, consumed, labels)
    elif isinstance(element, OptionalElement):
        yield from _walk(element.element, stream, cursor, bindings, consumed, labels)
        yield cursor, bindings, consumed, labels
    elif isinstance(element, LabeledElement):
        for end, found, path, inner in _walk(element.element, stream, cursor, bindings, consumed, labels):
            start = path[len(consumed)].start if len(path) > len(consumed) else end
            yield end, found, path, {**inner, element.label: (start, end)}


def _walk_sequence(
    elements: Sequence[PatternElement],
    stream: Stream,
    cursor: int,
    bindings: _Bindings,
    consumed: tuple[FlatFeatureStructure, ...],
    labels: _Labels,
) -> Iterator[_Path]:
    if not elements:
        yield cursor, bindings, consumed, labels
        return
    for end, found, path, inner in _walk(elements[0], stream, cursor, bindings, consumed, labels):
        yield from _walk_sequence(elements[1:], stream, end, found, path, inner)


def match_at(lhs: PatternElement, stream: Stream, position: int) -> list[MatchResult]:
    """All distinct matches of a pattern starting at `position`.

    Results come in exploration order: alternation branches in source order,
    optional parts present before absent, ambiguous items in stream order.
    Paths that consume nothing are dropped; paths agreeing on span, bindings
    and label spans collapse into the first.
    """
    results: list[MatchResult] = []
    seen: set[MatchResult] = set()
    for end, bindings, consumed, labels in _walk(lhs, stream, position, {}, (), {}):
        if not consumed:
            continue
        result = MatchResult(
            start=consumed[0].start,
            end=end,
            bindings=tuple(sorted(bindings.items())),
            label_spans=tuple(sorted(labels.items())),
            consumed=consumed,
        )
        if result.end <= result.start or result in seen:
            continue
        seen.add(result)
        results.append(result)
    return results


def _evaluate(
    value: TemplateValue,
    env: dict[str, str | None],
    context: MatchContext,
    functions: FunctionRegistry,
) -> str | None:
    if isinstance(value, Variable):
        return env.get(value.name)
    if isinstance(value, FunctionCall):
        args = [env.get(arg.name) if isinstance(arg, Variable) else arg for arg in value.args]
        return functions.call(value.name, args, context) or None
    return value


def apply_rhs(
    rule: GrammarRule,
    match: MatchResult,
    stream: Stream,
    registry: TypeRegistry,
    functions: FunctionRegistry | None = None,
) -> FlatFeatureStructure:
    """Build the rule's output structure for one match.

    Auxiliary definitions are evaluated in source order, then the template.
    Unbound variables and empty results leave features absent. `RULE`, when
    declared for the output type and not assigned by the template, receives
    the rule name.

    Raises:
        UnknownFunctionError: The rule calls an unregistered functional.
    """
    functions = functions or FunctionRegistry()
    context = MatchContext(
        stream=stream, start=match.start, end=match.end, consumed=match.consumed, rule_name=rule.name
    )
    env: dict[str, str | None] = dict(match.bindings)
    for definition in rule.aux:
        env[definition.variable] = _evaluate(definition.call, env, context, functions)
    assignments = {feature: _evaluate(value, env, context, functions) for feature, value in rule.template}
    declaration = registry.get(rule.output_type)
    if declaration.declares("RULE") and not rule.assigns("RULE"):
        assignments["RULE"] = rule.name
    return declaration.instantiate(assignments, match.label_span(rule.label))


_Candidate = tuple[GrammarRule, MatchResult]


def _select(candidates: list[_Candidate], mode: SearchMode) -> list[_Candidate]:
    if not candidates or mode == "all_matches":
        return candidates
    longest = max(result.end for _, result in candidates)
    if mode == "all_longest_matches":
        return [(rule, result) for rule, result in candidates if result.end == longest]
    return [next((rule, result) for rule, result in candidates if result.end == longest)]


def run_level(
    level: GrammarLevel,
    stream: Stream,
    registry: TypeRegistry,
    functions: FunctionRegistry | None = None,
    search_mode: SearchMode | None = None,
) -> Stream:
    """Apply one level's rules at every occupied position, left to right.

    Args:
        level: The parsed level.
        stream: Its input.
        registry: Declared types for output structures.
        functions: Functional operators; the built-ins by default.
        search_mode: Overrides the level's own search mode.

    Returns:
        The produced structures in (start, rule, variant) order, preceded by
        the input items when the level's output mode is `all`.
    """
    functions = functions or FunctionRegistry()
    mode = search_mode or level.settings.search_mode
    produced: list[FlatFeatureStructure] = []
    resume = 0
    for position in stream.starts:
        if position < resume:
            continue
        candidates = [(rule, result) for rule in level.rules for result in match_at(rule.lhs, stream, position)]
        selected = _select(candidates, mode)
        for rule, result in selected:
            produced.append(apply_rhs(rule, result, stream, registry, functions))
        if mode == "longest_match" and selected:
            resume = selected[0][1].end
    produced = _collapse(produced)
    logger.debug("Level %r produced %d item(s) from %d", level.name, len(produced), len(stream))
    if level.settings.output_mode == "all":
        return Stream(dict.fromkeys([*stream.items, *produced]), stream.tokens)
    return Stream(produced, stream.tokens)


def _collapse(produced: list[FlatFeatureStructure]) -> list[FlatFeatureStructure]:
    # Outputs differing only in RULE are one reading; the earliest rule in source order names it
    kept: dict[tuple, FlatFeatureStructure] = {}
    for item in produced:
        key = (item.type_name, item.span, tuple(pair for pair in item.assignments if pair[0] != "RULE"))
        kept.setdefault(key, item)
    return list(kept.values())


def _declaration(registry: TypeRegistry, fallback: TypeDeclaration) -> TypeDeclaration:
    return registry.get(fallback.type_name) if fallback.type_name in registry else fallback


def token_items(
    tokens: Sequence[Token], declaration: TypeDeclaration = TOKEN_DECLARATION
) -> list[FlatFeatureStructure]:
    """One `token` item per token, plus an unsplit item over each `stem ' suffix` triple."""
    items = [
        declaration.instantiate({"TYPE": token.token_class, "SURFACE": token.surface}, (index, index + 1))
        for index, token in enumerate(tokens)
    ]
    for index in range(len(tokens) - 2):
        stem, mark, suffix = tokens[index : index + 3]
        if mark.token_class != "apostrophe" or "punctuation" in (stem.token_class, suffix.token_class):
            continue
        if stem.char_span[1] != mark.char_span[0] or mark.char_span[1] != suffix.char_span[0]:
            continue
        surface = stem.surface + mark.surface + suffix.surface
        items.append(
            declaration.instantiate({"TYPE": classify_token(surface), "SURFACE": surface}, (index, index + 3))
        )
    return items


def basic_token_items(
    tokens: Sequence[Token], declaration: TypeDeclaration = BASIC_TOKEN_DECLARATION
) -> list[FlatFeatureStructure]:
    return [
        declaration.instantiate({"TYPE": token.token_class, "SURFACE": token.surface}, (index, index + 1))
        for index, token in enumerate(tokens)
        if token.token_class in ("punctuation", "apostrophe")
    ]


def preprocess(
    modules: Sequence[PreprocessorName],
    tokens: Sequence[Token],
    lexicon: CompiledLexicon | None,
    registry: TypeRegistry,
) -> list[FlatFeatureStructure]:
    items: list[FlatFeatureStructure] = []
    for module in modules:
        if module == "Tokenizer":
            items.extend(token_items(tokens, _declaration(registry, TOKEN_DECLARATION)))
        elif module == "BasicTokenizer":
            items.extend(basic_token_items(tokens, _declaration(registry, BASIC_TOKEN_DECLARATION)))
        elif lexicon is None:
            raise PackError("The Gazetteer module needs a compiled lexicon")
        else:
            items.extend(annotate(tokens, lexicon))
    return items


def run_cascade(
    cascade: Cascade,
    tokens: Sequence[Token],
    lexicon: CompiledLexicon | None,
    registry: TypeRegistry,
    functions: FunctionRegistry | None = None,
    search_mode: SearchMode | None = None,
) -> Stream:
    """Run every level in order over one tokenized sentence.

    A level naming preprocessor modules gets their items added to its input.
    """
    return cascade_streams(cascade, tokens, lexicon, registry, functions, search_mode)[-1]


def cascade_streams(
    cascade: Cascade,
    tokens: Sequence[Token],
    lexicon: CompiledLexicon | None,
    registry: TypeRegistry,
    functions: FunctionRegistry | None = None,
    search_mode: SearchMode | None = None,
) -> list[Stream]:
    """Like `run_cascade`, keeping every level's input stream before the final output."""
    streams: list[Stream] = []
    stream = Stream((), tokens)
    for level in cascade.levels:
        if level.settings.modules:
            extra = preprocess(level.settings.modules, tokens, lexicon, registry)
            stream = Stream([*stream.items, *extra], tokens)
        streams.append(stream)
        stream = run_level(level, stream, registry, functions, search_mode)
    streams.append(stream)
    return streams
