try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import regex
from pydantic import BaseModel

from tam_extract.types import Dimension

TEMPORAL_BASES = ("simultaneous", "anterior", "posterior", "perfect", "prospective", "recurrent", "atemporal")
EPISTEMIC_BASES = (
    "new_information",
    "certain",
    "hypothetical",
    "inferred",
    "conjectured",
    "probable",
    "general_fact",
)
VOLITIONAL_BASES = (
    "immediate_contribution",
    "accepted",
    "envisioned",
    "asserted",
    "wanted",
    "acceptable",
    "general_statement",
    "hearsay",
)
DIMENSIONS: tuple[Dimension, ...] = ("volitional", "epistemic", "temporal")

ANAPHORIC = "ana"
NEGATED_ANAPHORIC_PREFIX = "not_certain_ana_"

_TEMPSPEC_RE = regex.compile(r"(?P<spec>\S.*?) \\ (?P<surface>.*) \\")


class TemporalCategory(BaseModel, frozen=True):
    base: str
    anaphoric: bool = False
    spec: str | None = None

    def render(self) -> str:
        parts = [self.base]
        if self.anaphoric:
            parts.append(ANAPHORIC)
        if self.spec:
            parts.append(self.spec)
        return "_".join(parts)

    def __str__(self) -> str:
        return self.render()


class EpistemicCategory(BaseModel, frozen=True):
    base: str
    negated_anaphoric: bool = False

    def render(self) -> str:
        return f"{NEGATED_ANAPHORIC_PREFIX}{self.base}" if self.negated_anaphoric else self.base

    def __str__(self) -> str:
        return self.render()


class VolitionalCategory(BaseModel, frozen=True):
    base: str

    def render(self) -> str:
        return self.base

    def __str__(self) -> str:
        return self.render()


Category = TemporalCategory | EpistemicCategory | VolitionalCategory


class TempSpec(BaseModel, frozen=True):
    """Temporal specification contributed by an adverb: the spec atom and the adverb surface."""

    spec: str
    surface: str

    def render(self) -> str:
        return f"{self.spec} \\ {self.surface} \\"

    @classmethod
    def parse(cls, text: str) -> Self | None:
        found = _TEMPSPEC_RE.fullmatch(text.strip())
        if found is None:
            return None
        return cls(spec=found["spec"], surface=found["surface"])


class TamClass(BaseModel, frozen=True):
    volitional: VolitionalCategory | None = None
    epistemic: EpistemicCategory | None = None
    temporal: TemporalCategory | None = None
    tempspec: TempSpec | None = None

    def get(self, dimension: Dimension) -> Category | None:
        return getattr(self, dimension)

    def replace(self, **changes: Category | TempSpec | None) -> Self:
        return self.model_copy(update=changes)

    def atoms(self) -> tuple[str | None, str | None, str | None]:
        volitional, epistemic, temporal = (None if value is None else value.render() for value in self._categories())
        return volitional, epistemic, temporal

    def _categories(self) -> list[Category | None]:
        return [self.get(dimension) for dimension in DIMENSIONS]

    def __str__(self) -> str:
        return " + ".join(atom or "-" for atom in self.atoms())


class Adverb(BaseModel, frozen=True):
    """An adverb as seen by the effect calculus: its dimension, value atom and surface."""

    dimension: Dimension
    value: str
    surface: str


class MarkerPattern(BaseModel, frozen=True):
    name: str
    classes: frozenset[TamClass]
