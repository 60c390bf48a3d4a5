from collections.abc import Iterable, Mapping
from pathlib import Path
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import regex
from pydantic import BaseModel

from tam_extract.errors import FeatureStructureError

Span = tuple[int, int]

_DECLARATION_RE = regex.compile(r"\s*(?P<name>[\p{L}_][\p{L}\p{N}_-]*)\s*:=\s*\[(?P<features>[^\]]*)\]\s*")


class Variable(BaseModel, frozen=True):
    """Capture variable of a constraint, written `#name` in grammar files."""

    name: str

    def __str__(self) -> str:
        return f"#{self.name}"


class TypeDeclaration(BaseModel, frozen=True):
    type_name: str
    features: tuple[str, ...]

    def declares(self, feature: str) -> bool:
        return feature in self.features

    def instantiate(self, assignments: Mapping[str, str | None], span: Span = (0, 0)) -> "FlatFeatureStructure":
        """Build a validated structure of this type.

        Features assigned `None` or the empty string are left absent.

        Args:
            assignments: Feature to value mapping.
            span: Token span, start inclusive and end exclusive.

        Returns:
            A structure whose assignments follow the declaration order.

        Raises:
            FeatureStructureError: A feature is not declared for this type.
        """
        for feature in assignments:
            if feature not in self.features:
                raise FeatureStructureError(f"Feature '{feature}' is not declared for type '{self.type_name}'")
        if span[0] < 0 or span[1] < span[0]:
            raise FeatureStructureError(f"Invalid span {span} for '{self.type_name}'")
        ordered = tuple(
            (feature, value) for feature in self.features if (value := assignments.get(feature)) not in (None, "")
        )
        return FlatFeatureStructure(type_name=self.type_name, assignments=ordered, span=span)

    def render(self) -> str:
        return f"{self.type_name} := [{', '.join(self.features)}]"


class FlatFeatureStructure(BaseModel, frozen=True):
    """Typed, non-recursive bundle of feature/value atoms anchored to a token span."""

    type_name: str
    assignments: tuple[tuple[str, str], ...] = ()
    span: Span = (0, 0)

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]

    @property
    def features(self) -> dict[str, str]:
        return dict(self.assignments)

    def get(self, feature: str) -> str | None:
        for name, value in self.assignments:
            if name == feature:
                return value
        return None

    def __contains__(self, feature: object) -> bool:
        return any(name == feature for name, _ in self.assignments)

    def __str__(self) -> str:
        body = ", ".join(f"{name}: {value!r}" for name, value in self.assignments)
        return f"{self.type_name} & [{body}] @ {self.span[0]}..{self.span[1]}"


class ConstraintSet(BaseModel, frozen=True):
    type_name: str
    required: tuple[tuple[str, str | Variable], ...] = ()

    @property
    def variables(self) -> list[str]:
        return [value.name for _, value in self.required if isinstance(value, Variable)]

    @property
    def literals(self) -> dict[str, str]:
        return {feature: value for feature, value in self.required if isinstance(value, str)}

    def match(self, ffs: FlatFeatureStructure) -> dict[str, str] | None:
        """Match a structure, returning variable bindings or `None` for no match."""
        if ffs.type_name != self.type_name:
            return None
        present = ffs.features
        bindings: dict[str, str] = {}
        for feature, expected in self.required:
            value = present.get(feature)
            if value is None:
                return None
            if isinstance(expected, Variable):
                if bindings.get(expected.name, value) != value:
                    return None
                bindings[expected.name] = value
            elif value != expected:
                return None
        return bindings

    def __str__(self) -> str:
        body = ", ".join(
            f"{feature}: {value}" if isinstance(value, Variable) else f'{feature}: "{value}"'
            for feature, value in self.required
        )
        return f"{self.type_name} & [{body}]"


def matches(ffs: FlatFeatureStructure, constraints: ConstraintSet) -> dict[str, str] | None:
    return constraints.match(ffs)


class TypeRegistry(BaseModel, frozen=True):
    declarations: dict[str, TypeDeclaration] = {}

    @classmethod
    def from_declarations(cls, declarations: Iterable[TypeDeclaration]) -> Self:
        registry = cls()
        for declaration in declarations:
            registry = registry.declare_type(declaration)
        return registry

    @classmethod
    def from_text(cls, text: str) -> Self:
        return cls.from_declarations(parse_type_declarations(text))

    @classmethod
    def from_path(cls, path: Path | str) -> Self:
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def declare_type(self, declaration: TypeDeclaration) -> Self:
        if declaration.type_name in self.declarations:
            raise FeatureStructureError(f"Type '{declaration.type_name}' is already declared")
        duplicates = sorted({f for f in declaration.features if declaration.features.count(f) > 1})
        if duplicates:
            raise FeatureStructureError(
                f"Duplicate feature(s) {', '.join(duplicates)} in type '{declaration.type_name}'"
            )
        return self.model_copy(update={"declarations": {**self.declarations, declaration.type_name: declaration}})

    def get(self, type_name: str) -> TypeDeclaration:
        try:
            return self.declarations[type_name]
        except KeyError:
            raise FeatureStructureError(f"Unknown type '{type_name}'") from None

    def __contains__(self, type_name: object) -> bool:
        return type_name in self.declarations

    @property
    def types(self) -> list[TypeDeclaration]:
        return list(self.declarations.values())

    def make_ffs(
        self, type_name: str, assignments: Mapping[str, str | None], span: Span = (0, 0)
    ) -> FlatFeatureStructure:
        return self.get(type_name).instantiate(assignments, span)

    def check_constraints(self, constraints: ConstraintSet) -> None:
        declaration = self.get(constraints.type_name)
        for feature, _ in constraints.required:
            if not declaration.declares(feature):
                raise FeatureStructureError(
                    f"Feature '{feature}' is not declared for type '{constraints.type_name}'"
                )


def parse_type_declarations(text: str) -> list[TypeDeclaration]:
    """Parse `name := [F1, F2, ...]` declarations.

    A declaration may wrap across lines until its closing bracket. Blank lines
    and lines starting with `#` are skipped.
    """
    declarations: list[TypeDeclaration] = []
    buffer: list[str] = []
    start_line = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not buffer and (not line or line.startswith("#")):
            continue
        if not buffer:
            start_line = line_number
        buffer.append(line)
        if "]" not in line:
            continue
        chunk = " ".join(buffer)
        buffer = []
        found = _DECLARATION_RE.fullmatch(chunk)
        if found is None:
            raise FeatureStructureError(f"line {start_line}: malformed type declaration '{chunk}'")
        features = tuple(f.strip() for f in found["features"].split(",") if f.strip())
        declarations.append(TypeDeclaration(type_name=found["name"], features=features))
    if buffer:
        raise FeatureStructureError(f"line {start_line}: unterminated type declaration")
    return declarations


GAZETTEER_DECLARATION = TypeDeclaration(
    type_name="gazetteer",
    features=(
        "GTYPE",
        "VOLITIONAL",
        "EPISTEMIC",
        "TEMPORAL",
        "SURFACE",
        "GNUMBER",
        "AMOUNT",
        "SLOTTYPE",
        "NONUM",
        "CONTEXT",
        "NONVIOLENT",
    ),
)
TOKEN_DECLARATION = TypeDeclaration(type_name="token", features=("TYPE", "SURFACE"))
BASIC_TOKEN_DECLARATION = TypeDeclaration(type_name="basic-token", features=("TYPE", "SURFACE"))
