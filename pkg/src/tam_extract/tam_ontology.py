"""Anchoring categories, the adverb effect calculus and marker-pattern tables.

A TAM class holds one category per dimension (volitional, epistemic,
temporal). Categories travel through feature structures as underscore-composed
atoms such as `anterior_ana_occ` or `not_certain_ana_probable`; this module
parses and renders them, and implements the two ways verb classes are
modified: by adverbs (`apply_adverb`) and by matrix verbs over a subordinate
verb (`combine_subordination`).
"""

import logging
from collections.abc import Iterable
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Literal, overload
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel

from tam_extract.errors import CategoryError
from tam_extract.models.tam import (
    ANAPHORIC,
    DIMENSIONS,
    EPISTEMIC_BASES,
    NEGATED_ANAPHORIC_PREFIX,
    TEMPORAL_BASES,
    VOLITIONAL_BASES,
    Adverb,
    Category,
    EpistemicCategory,
    MarkerPattern,
    TamClass,
    TempSpec,
    TemporalCategory,
    VolitionalCategory,
)
from tam_extract.types import Dimension, MatrixKind
from tam_extract.utils import split_pipe_fields

logger = logging.getLogger(__name__)

MATRIX_DIMENSIONS: dict[MatrixKind, frozenset[Dimension]] = {
    "report": frozenset({"volitional"}),
    "evidential": frozenset({"volitional", "epistemic"}),
    "possibility": frozenset({"volitional", "epistemic"}),
}


@overload
def parse_category(dimension: Literal["temporal"], atom: str) -> TemporalCategory: ...
@overload
def parse_category(dimension: Literal["epistemic"], atom: str) -> EpistemicCategory: ...
@overload
def parse_category(dimension: Literal["volitional"], atom: str) -> VolitionalCategory: ...
@overload
def parse_category(dimension: Dimension, atom: str) -> Category: ...
def parse_category(dimension: Dimension, atom: str) -> Category:
    """Decompose an atom such as `anterior_ana_repetitive` into a category.

    Raises:
        CategoryError: The base is not a known category of the dimension.
    """
    atom = atom.strip()
    if dimension == "temporal":
        return _parse_temporal(atom)
    if dimension == "epistemic":
        negated = atom.startswith(NEGATED_ANAPHORIC_PREFIX)
        base = atom[len(NEGATED_ANAPHORIC_PREFIX) :] if negated else atom
        if base not in EPISTEMIC_BASES:
            raise CategoryError(f"Unknown epistemic category '{atom}'")
        return EpistemicCategory(base=base, negated_anaphoric=negated)
    if dimension == "volitional":
        if atom not in VOLITIONAL_BASES:
            raise CategoryError(f"Unknown volitional category '{atom}'")
        return VolitionalCategory(base=atom)
    raise CategoryError(f"Unknown dimension '{dimension}'")


def _parse_temporal(atom: str) -> TemporalCategory:
    for base in TEMPORAL_BASES:
        if atom == base:
            return TemporalCategory(base=base)
        if not atom.startswith(base + "_"):
            continue
        rest = atom[len(base) + 1 :]
        anaphoric = rest == ANAPHORIC or rest.startswith(ANAPHORIC + "_")
        if anaphoric:
            rest = rest[len(ANAPHORIC) + 1 :]
        return TemporalCategory(base=base, anaphoric=anaphoric, spec=rest or None)
    raise CategoryError(f"Unknown temporal category '{atom}'")


def is_temporal_base(atom: str) -> bool:
    return atom in TEMPORAL_BASES


def tam_from_atoms(
    volitional: str | None = None,
    epistemic: str | None = None,
    temporal: str | None = None,
    tempspec: str | None = None,
) -> TamClass:
    """Build a TamClass from feature values; `None` or empty leaves a dimension absent."""
    return TamClass(
        volitional=parse_category("volitional", volitional) if volitional else None,
        epistemic=parse_category("epistemic", epistemic) if epistemic else None,
        temporal=parse_category("temporal", temporal) if temporal else None,
        tempspec=TempSpec.parse(tempspec) if tempspec else None,
    )


class TransformRule(BaseModel, frozen=True):
    """A row of the transformation table.

    Effects are `anaphoric_spec` (keep the verb's base, mark it anaphoric and
    attach the adverb's atom as specification) or `set_base:<base>`.
    """

    name: str
    dimension: Dimension
    adverb_values: frozenset[str]
    verb_bases: frozenset[str]
    effect: str

    def applies(self, adverb: Adverb, current: TemporalCategory | None) -> bool:
        return (
            adverb.dimension == self.dimension
            and adverb.value in self.adverb_values
            and current is not None
            and current.base in self.verb_bases
        )

    def rewrite(self, adverb: Adverb, current: TemporalCategory) -> TemporalCategory:
        if self.effect == "anaphoric_spec":
            return TemporalCategory(base=current.base, anaphoric=True, spec=adverb.value)
        return TemporalCategory(base=self.effect.removeprefix("set_base:"))


class TransformTable(BaseModel, frozen=True):
    rules: tuple[TransformRule, ...] = ()

    @classmethod
    def from_text(cls, text: str) -> Self:
        rules: list[TransformRule] = []
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = split_pipe_fields(line)
            if len(fields) != 5:
                raise CategoryError(f"line {line_number}: expected 5 fields in transformation row, got {len(fields)}")
            name, dimension, adverb_values, verb_bases, effect = fields
            if dimension != "temporal":
                raise CategoryError(f"line {line_number}: transformations are defined for temporal adverbs only")
            for base in verb_bases.split():
                _parse_temporal(base)
            if effect != "anaphoric_spec":
                target = effect.removeprefix("set_base:")
                if target == effect or not is_temporal_base(target):
                    raise CategoryError(f"line {line_number}: unknown transformation effect '{effect}'")
            rules.append(
                TransformRule(
                    name=name,
                    dimension=dimension,
                    adverb_values=frozenset(adverb_values.split()),
                    verb_bases=frozenset(verb_bases.split()),
                    effect=effect,
                )
            )
        return cls(rules=tuple(rules))

    @classmethod
    def from_path(cls, path: Path | str) -> Self:
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def find(self, adverb: Adverb, current: TemporalCategory | None) -> TransformRule | None:
        return next((rule for rule in self.rules if rule.applies(adverb, current)), None)

    @property
    def rule_names(self) -> list[str]:
        return [rule.name for rule in self.rules]


def _fold_pattern_name(name: str) -> str:
    # Suffix archiphonemes are written with either I or İ
    return name.replace("İ", "I").casefold()


class MarkerTable(BaseModel, frozen=True):
    patterns: dict[str, MarkerPattern] = {}

    @classmethod
    def from_text(cls, text: str) -> Self:
        """Parse `pattern | volitional + epistemic + temporal` lines, one class per line."""
        classes: dict[str, list[TamClass]] = {}
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = split_pipe_fields(line)
            atoms = fields[1].split("+") if len(fields) == 2 else []
            if len(atoms) != 3:
                raise CategoryError(f"line {line_number}: expected 'pattern | vol + epi + temp', got '{line}'")
            vol, epi, temp = (atom.strip() for atom in atoms)
            classes.setdefault(fields[0], []).append(tam_from_atoms(vol, epi, temp))
        return cls(
            patterns={name: MarkerPattern(name=name, classes=frozenset(found)) for name, found in classes.items()}
        )

    @classmethod
    def from_path(cls, path: Path | str) -> Self:
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def get(self, pattern_name: str) -> MarkerPattern:
        if pattern_name in self.patterns:
            return self.patterns[pattern_name]
        folded = _fold_pattern_name(pattern_name)
        for name, pattern in self.patterns.items():
            if _fold_pattern_name(name) == folded:
                return pattern
        raise CategoryError(f"Unknown marker pattern '{pattern_name}'")

    def __contains__(self, pattern_name: object) -> bool:
        try:
            self.get(str(pattern_name))
        except CategoryError:
            return False
        return True


def _shipped_tam_file(name: str) -> str:
    return resources.files("tam_extract").joinpath("packs", "tr", "tam", name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def default_marker_table() -> MarkerTable:
    return MarkerTable.from_text(_shipped_tam_file("markers.tab"))


@lru_cache(maxsize=1)
def default_transform_table() -> TransformTable:
    return TransformTable.from_text(_shipped_tam_file("transforms.tab"))


def marker_tam_classes(pattern_name: str, table: MarkerTable | None = None) -> frozenset[TamClass]:
    return (table or default_marker_table()).get(pattern_name).classes


def apply_adverb(verb: TamClass, adverb: Adverb, transforms: TransformTable | None = None) -> TamClass:
    """Apply an adverb's effect to a verb's TAM class.

    Only the adverb's own dimension may change (temporal adverbs also set the
    temporal specification). Resolution order: a matching transformation row,
    then override when the adverb names a different base, then specification.

    Args:
        verb: The verb's class.
        adverb: The adverb's dimension, value atom and surface.
        transforms: Transformation table; the shipped one by default.

    Returns:
        The modified class.
    """
    transforms = transforms if transforms is not None else default_transform_table()
    current = verb.get(adverb.dimension)
    if adverb.dimension == "temporal":
        assert current is None or isinstance(current, TemporalCategory)
        tempspec = TempSpec(spec=adverb.value, surface=adverb.surface)
        rule = transforms.find(adverb, current)
        if rule is not None and current is not None:
            logger.debug("Transformation %s on %s by '%s'", rule.name, current, adverb.surface)
            return verb.replace(temporal=rule.rewrite(adverb, current), tempspec=tempspec)
        if is_temporal_base(adverb.value) and (current is None or current.base != adverb.value):
            return verb.replace(temporal=TemporalCategory(base=adverb.value), tempspec=tempspec)
        return verb.replace(tempspec=tempspec)
    category = parse_category(adverb.dimension, adverb.value)
    if current is None or current.base != category.base:
        return verb.replace(**{adverb.dimension: category})
    return verb


def merge_dimension(
    dimension: Dimension, matrix: str | None, subordinate: str | None, kind: MatrixKind | None = None
) -> str | None:
    """Left-biased merge of one dimension's atoms, restricted to what `kind` lets the matrix specify."""
    if kind is not None and dimension not in MATRIX_DIMENSIONS[kind]:
        matrix = None
    for atom in (matrix, subordinate):
        if atom:
            return parse_category(dimension, atom).render()
    return None


def combine_subordination(matrix: TamClass, kind: MatrixKind, subordinate: TamClass) -> TamClass:
    """Merge a matrix verb's class over a subordinate verb's class.

    Each dimension the matrix kind specifies is taken from the matrix when
    present there; everything else comes from the subordinate.

    Raises:
        CategoryError: The subordinate carries no temporal category.
    """
    if subordinate.temporal is None:
        raise CategoryError("Subordinate verb carries no temporal category")
    merged: dict[str, Category | None] = {}
    for dimension in DIMENSIONS:
        taken = matrix.get(dimension) if dimension in MATRIX_DIMENSIONS[kind] else None
        merged[dimension] = taken if taken is not None else subordinate.get(dimension)
    return TamClass(tempspec=subordinate.tempspec, **merged)  # type: ignore[arg-type]


def enumerate_categories(dimension: Dimension, specs: Iterable[str] = ()) -> list[Category]:
    """Every category of a dimension, with temporal ones combined with `specs`."""
    if dimension == "volitional":
        return [VolitionalCategory(base=base) for base in VOLITIONAL_BASES]
    if dimension == "epistemic":
        return [
            EpistemicCategory(base=base, negated_anaphoric=negated)
            for base in EPISTEMIC_BASES
            for negated in (False, True)
        ]
    spec_options: list[str | None] = [None, *specs]
    return [
        TemporalCategory(base=base, anaphoric=anaphoric, spec=spec)
        for base in TEMPORAL_BASES
        for anaphoric in (False, True)
        for spec in spec_options
    ]


def category_matches(query: Category, actual: Category) -> bool:
    """Whether `actual` falls under the query category.

    Bases must agree. A temporal query carrying a specification matches
    exactly; an anaphoric one also requires the anaphoric marker. An epistemic
    query with the negated anaphoric prefix matches exactly.
    """
    if type(query) is not type(actual) or query.base != actual.base:
        return False
    if isinstance(query, TemporalCategory):
        assert isinstance(actual, TemporalCategory)
        if query.spec:
            return query == actual
        return actual.anaphoric or not query.anaphoric
    if isinstance(query, EpistemicCategory) and query.negated_anaphoric:
        return query == actual
    return True
