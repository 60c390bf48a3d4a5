from typing import Annotated, Literal

from pydantic import BaseModel, Field

from tam_extract.models.feature_structure import ConstraintSet, Variable
from tam_extract.types import OutputMode, PreprocessorName, SearchMode


class GrammarSettings(BaseModel, frozen=True):
    modules: tuple[PreprocessorName, ...] = ()
    search_mode: SearchMode = "all_longest_matches"
    output_mode: OutputMode = "grammar"


class ConstraintElement(BaseModel, frozen=True):
    """Consumes exactly one stream item satisfying `constraints`."""

    kind: Literal["constraint"] = "constraint"
    constraints: ConstraintSet


class SequenceElement(BaseModel, frozen=True):
    kind: Literal["sequence"] = "sequence"
    elements: tuple["PatternElement", ...]


class AlternationElement(BaseModel, frozen=True):
    """Branches are tried in source order."""

    kind: Literal["alternation"] = "alternation"
    branches: tuple["PatternElement", ...]


class OptionalElement(BaseModel, frozen=True):
    """Tries the element first, then its absence."""

    kind: Literal["optional"] = "optional"
    element: "PatternElement"


class LabeledElement(BaseModel, frozen=True):
    """Marks the span the rule's output structure is anchored to."""

    kind: Literal["labeled"] = "labeled"
    element: "PatternElement"
    label: str


PatternElement = Annotated[
    ConstraintElement | SequenceElement | AlternationElement | OptionalElement | LabeledElement,
    Field(discriminator="kind"),
]

SequenceElement.model_rebuild()
AlternationElement.model_rebuild()
OptionalElement.model_rebuild()
LabeledElement.model_rebuild()


def element_children(element: PatternElement) -> tuple[PatternElement, ...]:
    if isinstance(element, SequenceElement):
        return element.elements
    if isinstance(element, AlternationElement):
        return element.branches
    if isinstance(element, (OptionalElement, LabeledElement)):
        return (element.element,)
    return ()


def iter_constraints(element: PatternElement) -> list[ConstraintSet]:
    """Every constraint set of a pattern, in source order."""
    if isinstance(element, ConstraintElement):
        return [element.constraints]
    return [found for child in element_children(element) for found in iter_constraints(child)]


def iter_labels(element: PatternElement) -> list[str]:
    own = [element.label] if isinstance(element, LabeledElement) else []
    return own + [label for child in element_children(element) for label in iter_labels(child)]


def bound_variables(element: PatternElement) -> set[str]:
    """Variables the pattern can bind, including those under optional parts."""
    return {name for constraints in iter_constraints(element) for name in constraints.variables}


class FunctionCall(BaseModel, frozen=True):
    """Functional operator call; arguments are variables or string literals."""

    name: str
    args: tuple[Variable | str, ...] = ()

    @property
    def variables(self) -> list[str]:
        return [arg.name for arg in self.args if isinstance(arg, Variable)]

    def __str__(self) -> str:
        rendered = ", ".join(str(arg) if isinstance(arg, Variable) else f'"{arg}"' for arg in self.args)
        return f"{self.name}({rendered})"


TemplateValue = Variable | FunctionCall | str


class AuxDefinition(BaseModel, frozen=True):
    """An auxiliary definition `#name := Func(args)` on a rule's right hand side."""

    variable: str
    call: FunctionCall


class GrammarRule(BaseModel, frozen=True):
    name: str
    lhs: PatternElement
    label: str
    output_type: str
    template: tuple[tuple[str, TemplateValue], ...] = ()
    aux: tuple[AuxDefinition, ...] = ()
    line: int = 0

    @property
    def constraints(self) -> list[ConstraintSet]:
        return iter_constraints(self.lhs)

    @property
    def calls(self) -> list[FunctionCall]:
        template_calls = [value for _, value in self.template if isinstance(value, FunctionCall)]
        return [definition.call for definition in self.aux] + template_calls

    @property
    def consumed_types(self) -> set[str]:
        return {constraints.type_name for constraints in self.constraints}

    def assigns(self, feature: str) -> bool:
        return any(name == feature for name, _ in self.template)


class GrammarLevel(BaseModel, frozen=True):
    name: str = ""
    settings: GrammarSettings = GrammarSettings()
    rules: tuple[GrammarRule, ...] = ()

    @property
    def output_types(self) -> set[str]:
        return {rule.output_type for rule in self.rules}

    def rule(self, name: str) -> GrammarRule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise KeyError(name)


class Cascade(BaseModel, frozen=True):
    levels: tuple[GrammarLevel, ...] = ()

    @property
    def rules(self) -> list[tuple[int, GrammarRule]]:
        """Every rule with its 1-based level number, in cascade order."""
        return [(number, rule) for number, level in enumerate(self.levels, start=1) for rule in level.rules]
