"""Grammar packs: the type declarations, cascade levels, lexicon and TAM tables of one language.

A pack directory holds::

    types.decl          type declarations
    manifest            level file names in cascade order
    level1.grm ...      one grammar level per file
    lexicon.lex         the seed lexicon
    tam/markers.tab     marker pattern -> TAM class sets
    tam/transforms.tab  named adverb transformations

`load_pack()` without a path reads `$TAM_PACK`, then falls back to the Turkish
pack shipped with the package.
"""

import logging
import os
import warnings
from importlib import resources
try:
    from importlib.resources.abc import Traversable
except ImportError:  # Python < 3.11
    from importlib.abc import Traversable
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from tam_extract.errors import CategoryError, PackError, PackValidationError
from tam_extract.functionals import FunctionRegistry, tam_functionals
from tam_extract.grammar_parser import parse_grammar, parse_manifest
from tam_extract.lexicon import CompiledLexicon, parse_lexicon
from tam_extract.models.feature_structure import (
    BASIC_TOKEN_DECLARATION,
    GAZETTEER_DECLARATION,
    TOKEN_DECLARATION,
    TypeRegistry,
)
from tam_extract.models.grammar import Cascade
from tam_extract.models.lexicon_entry import LexiconEntry
from tam_extract.tam_ontology import MarkerTable, TransformTable, tam_from_atoms
from tam_extract.tokenizer import DEFAULT_ABBREVIATIONS, turkish_lower
from tam_extract.types import PreprocessorName

logger = logging.getLogger(__name__)

PACK_ENV_VAR = "TAM_PACK"

_MODULE_TYPES: dict[PreprocessorName, str] = {
    "Tokenizer": TOKEN_DECLARATION.type_name,
    "BasicTokenizer": BASIC_TOKEN_DECLARATION.type_name,
    "Gazetteer": GAZETTEER_DECLARATION.type_name,
}

CatalogEntry = tuple[str, str, str]


class GrammarPack(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = ""
    registry: TypeRegistry = TypeRegistry()
    cascade: Cascade = Cascade()
    lexicon: CompiledLexicon | None = None
    markers: MarkerTable = MarkerTable()
    transforms: TransformTable = TransformTable()
    functions: FunctionRegistry = Field(default_factory=FunctionRegistry)

    def rule_catalog(self) -> list[CatalogEntry]:
        """(rule name, level name, output type) for every rule, in cascade order."""
        return [(rule.name, level.name, rule.output_type) for level in self.cascade.levels for rule in level.rules]

    def lexicon_entries(self) -> list[LexiconEntry]:
        return self.lexicon.entries if self.lexicon is not None else []

    def abbreviations(self) -> frozenset[str]:
        """Stop-list abbreviations plus the dotted words of `gaz_title` entries."""
        titles = {
            turkish_lower(word)
            for entry in self.lexicon_entries()
            if entry.gtype == "gaz_title"
            for word in entry.key
            if word.endswith(".")
        }
        return DEFAULT_ABBREVIATIONS | titles

    def violations(self) -> list[str]:
        """Every consistency violation of the pack; empty for a valid pack."""
        return [*self._gtype_violations(), *self._function_violations(), *self._marker_violations()]

    def pack_warnings(self) -> list[str]:
        return [*self._reachability_warnings(), *self._transform_warnings()]

    def validate_pack(self) -> None:
        """Emit pack warnings and raise on violations.

        Raises:
            PackValidationError: Carrying every violation found.
        """
        for message in self.pack_warnings():
            warnings.warn(message, stacklevel=2)
        violations = self.violations()
        if violations:
            raise PackValidationError(violations)

    def _gtype_violations(self) -> list[str]:
        known = {entry.gtype for entry in self.lexicon_entries() if entry.gtype}
        violations = []
        for _, rule in self.cascade.rules:
            for constraints in rule.constraints:
                gtype = constraints.literals.get("GTYPE")
                if constraints.type_name == GAZETTEER_DECLARATION.type_name and gtype and gtype not in known:
                    violations.append(f"rule '{rule.name}': GTYPE '{gtype}' occurs in no lexicon entry")
        return list(dict.fromkeys(violations))

    def _function_violations(self) -> list[str]:
        return list(
            dict.fromkeys(
                f"rule '{rule.name}': unknown functional '{call.name}'"
                for _, rule in self.cascade.rules
                for call in rule.calls
                if call.name not in self.functions
            )
        )

    def _marker_violations(self) -> list[str]:
        violations = []
        for entry in self.lexicon_entries():
            if entry.marker is None:
                continue
            where = f"lexicon line {entry.line_number} '{entry.text}'"
            try:
                pattern = self.markers.get(entry.marker)
                tam = tam_from_atoms(
                    entry.assignments.get("VOLITIONAL"),
                    entry.assignments.get("EPISTEMIC"),
                    entry.assignments.get("TEMPORAL"),
                )
            except CategoryError as exc:
                violations.append(f"{where}: {exc}")
                continue
            if tam not in pattern.classes:
                violations.append(f"{where}: {tam} is not a class of marker {pattern.name}")
        return violations

    def _reachability_warnings(self) -> list[str]:
        messages = []
        available: set[str] = set()
        for level in self.cascade.levels:
            level_input = available | {_MODULE_TYPES[module] for module in level.settings.modules}
            for rule in level.rules:
                for type_name in sorted(rule.consumed_types - level_input):
                    messages.append(
                        f"{level.name}: rule '{rule.name}' consumes '{type_name}', which nothing produces"
                    )
            produced = level.output_types
            available = level_input | produced if level.settings.output_mode == "all" else produced
        return messages

    def _transform_warnings(self) -> list[str]:
        names = {rule.name for _, rule in self.cascade.rules}
        return [
            f"transformation '{name}' has no rule of that name"
            for name in self.transforms.rule_names
            if name not in names
        ]


def _read(root: Traversable, *parts: str) -> str:
    target = root.joinpath(*parts)
    if not target.is_file():
        raise PackError(f"Missing pack file '{'/'.join(parts)}' in {root}")
    return target.read_text(encoding="utf-8")


def shipped_pack_root() -> Traversable:
    return resources.files("tam_extract").joinpath("packs", "tr")


def resolve_pack_root(path: Path | str | None = None) -> Traversable:
    if path is None:
        path = os.environ.get(PACK_ENV_VAR) or None
    if path is None:
        return shipped_pack_root()
    root = Path(path)
    if not root.is_dir():
        raise PackError(f"Pack directory not found: {root}")
    return root


def load_pack(path: Path | str | None = None, validate: bool = True) -> GrammarPack:
    """Load and validate a grammar pack.

    Args:
        path: Pack directory. Defaults to `$TAM_PACK`, then the shipped pack.
        validate: Run pack validation after loading.

    Returns:
        The loaded pack.

    Raises:
        PackError: A pack file is missing.
        PackValidationError: Validation found violations.
        GrammarSyntaxError: A level file does not parse.
        LexiconSyntaxError: The lexicon does not parse.
    """
    root = resolve_pack_root(path)
    registry = TypeRegistry.from_text(_read(root, "types.decl"))
    declaration = registry.get("gazetteer") if "gazetteer" in registry else GAZETTEER_DECLARATION
    lexicon = CompiledLexicon(parse_lexicon(_read(root, "lexicon.lex"), declaration), declaration)
    levels = [
        parse_grammar(_read(root, file_name), registry, name=file_name.removesuffix(".grm"))
        for file_name in parse_manifest(_read(root, "manifest"))
    ]
    transforms = TransformTable.from_text(_read(root, "tam", "transforms.tab"))
    pack = GrammarPack(
        name=root.name,
        registry=registry,
        cascade=Cascade(levels=tuple(levels)),
        lexicon=lexicon,
        markers=MarkerTable.from_text(_read(root, "tam", "markers.tab")),
        transforms=transforms,
        functions=FunctionRegistry().with_functions(tam_functionals(transforms)),
    )
    logger.info(
        "Loaded pack %r: %d level(s), %d rule(s), %d lexicon entries",
        pack.name,
        len(levels),
        len(pack.cascade.rules),
        len(lexicon),
    )
    if validate:
        pack.validate_pack()
    return pack
