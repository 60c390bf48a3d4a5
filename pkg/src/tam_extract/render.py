"""Block and JSON output of analyses."""

from collections.abc import Iterable

from pydantic import TypeAdapter

from tam_extract.models.document import AnalysisRecord, CategoryRecord, SentenceAnalysis, TamRecord
from tam_extract.models.feature_structure import FlatFeatureStructure, TypeDeclaration
from tam_extract.models.tam import Category, EpistemicCategory, TempSpec, TemporalCategory
from tam_extract.tam_ontology import tam_from_atoms

CATEGORY_FEATURES = ("VOLITIONAL", "EPISTEMIC", "TEMPORAL")
SENTENCE_FEATURES = (
    "TYPE",
    "SURFACE",
    *CATEGORY_FEATURES,
    "TEMPSPEC",
    "VERB",
    "PEOPLE",
    "HUMANITARIAN_NEED",
    "DISASTER",
    "RULE",
)

_records = TypeAdapter(list[AnalysisRecord])


def _structure(analysis: SentenceAnalysis | FlatFeatureStructure) -> FlatFeatureStructure:
    return analysis.analysis if isinstance(analysis, SentenceAnalysis) else analysis


def render_block(
    analysis: SentenceAnalysis | FlatFeatureStructure, declaration: TypeDeclaration | None = None
) -> str:
    """Render one structure as a `FEATURE : value` block.

    The three category lines are always present, each followed by a
    parenthesised slot holding the temporal specification atom on TEMPORAL.
    Other features are printed only when assigned.

    Args:
        analysis: The structure, bare or with provenance.
        declaration: Feature order; the `sentence_analysis` order by default.

    Returns:
        The block, header line first, without a trailing newline.
    """
    ffs = _structure(analysis)
    if declaration is not None:
        order = list(declaration.features)
    else:
        order = [*SENTENCE_FEATURES, *(name for name, _ in ffs.assignments if name not in SENTENCE_FEATURES)]
    lines = [ffs.type_name]
    for feature in order:
        value = ffs.get(feature)
        if feature in CATEGORY_FEATURES:
            slot = ""
            if feature == "TEMPORAL" and (tempspec := TempSpec.parse(ffs.get("TEMPSPEC") or "")) is not None:
                slot = tempspec.spec
            lines.append(" ".join(part for part in (f"{feature} :", value, f"({slot})") if part))
        elif value is not None:
            lines.append(f"{feature} : {value}")
    return "\n".join(lines)


def render_blocks(analyses: Iterable[SentenceAnalysis]) -> str:
    """Blocks separated by blank lines, each preceded by a `# <sentence>` comment line."""
    blocks = [f"# {analysis.sentence}\n{render_block(analysis)}" for analysis in analyses]
    return "\n\n".join(blocks) + "\n" if blocks else ""


def _category_record(category: Category | None) -> CategoryRecord | None:
    if category is None:
        return None
    if isinstance(category, TemporalCategory):
        return CategoryRecord(base=category.base, anaphoric=category.anaphoric, spec=category.spec)
    if isinstance(category, EpistemicCategory):
        return CategoryRecord(base=category.base, anaphoric=category.negated_anaphoric)
    return CategoryRecord(base=category.base)


def _split(value: str | None, separator: str) -> list[str]:
    return [part.strip() for part in (value or "").split(separator) if part.strip()]


def to_record(analysis: SentenceAnalysis) -> AnalysisRecord:
    ffs = analysis.analysis
    tam = tam_from_atoms(ffs.get("VOLITIONAL"), ffs.get("EPISTEMIC"), ffs.get("TEMPORAL"))
    provenance = analysis.provenance
    return AnalysisRecord(
        doc=provenance.document_id,
        line=provenance.line_index,
        sentence=provenance.sentence_index,
        char_span=provenance.char_span,
        disaster_type=provenance.disaster_type,
        rule=ffs.get("RULE"),
        surface=ffs.get("SURFACE"),
        tam=TamRecord(
            volitional=_category_record(tam.volitional),
            epistemic=_category_record(tam.epistemic),
            temporal=_category_record(tam.temporal),
        ),
        tempspec=ffs.get("TEMPSPEC"),
        verb=ffs.get("VERB"),
        people=_split(ffs.get("PEOPLE"), ", "),
        disaster=ffs.get("DISASTER"),
        needs=list(analysis.needs) if analysis.needs is not None else _split(ffs.get("HUMANITARIAN_NEED"), "-"),
    )


def render_json(analyses: Iterable[SentenceAnalysis]) -> str:
    """A JSON array with one object per analysis, keys in a fixed order."""
    return _records.dump_json([to_record(analysis) for analysis in analyses], indent=2).decode("utf-8")


def parse_json(text: str | bytes) -> list[AnalysisRecord]:
    return _records.validate_json(text)
