"""Running a grammar pack over documents and filtering the resulting analyses."""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import get_args
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel, Field

from tam_extract.errors import CategoryError, FilterExpressionError, TamExtractError
from tam_extract.matcher import cascade_streams
from tam_extract.models.document import Document, Provenance, SentenceAnalysis
from tam_extract.models.feature_structure import FlatFeatureStructure
from tam_extract.models.tam import DIMENSIONS
from tam_extract.models.token import SentenceSpan
from tam_extract.pack import GrammarPack
from tam_extract.stream import MatchContext, Stream
from tam_extract.tam_ontology import category_matches, parse_category
from tam_extract.tokenizer import split_sentences
from tam_extract.types import DisasterType, FilterDimension, OutputFormat, SearchMode

logger = logging.getLogger(__name__)

ANALYSIS_TYPE = "sentence_analysis"
# Features filled from clause items, and the item type each is collected from
CLAUSE_FEATURES = {"PEOPLE": "people", "HUMANITARIAN_NEED": "need", "DISASTER": "disaster"}


class RunOptions(BaseModel, frozen=True):
    search_mode: SearchMode | None = None
    workers: int = Field(default=1, ge=1)
    format: OutputFormat = "block"
    filters: tuple[str, ...] = ()


def _named_in(item: FlatFeatureStructure, value: str) -> bool:
    name = item.get("NAME")
    return bool(name and name in value)


def _clause_evidence(evidence: Stream, item: FlatFeatureStructure) -> dict[str, list[FlatFeatureStructure]]:
    """Clause items behind each list-valued feature of a sentence analysis."""
    context = MatchContext(stream=evidence, start=item.start, end=item.end)
    found: dict[str, list[FlatFeatureStructure]] = {}
    for feature, type_name in CLAUSE_FEATURES.items():
        value = item.get(feature)
        if not value:
            continue
        items = [clause_item for clause_item in context.clause_items(type_name) if _named_in(clause_item, value)]
        if items:
            found[feature] = items
    return found


def _char_span(
    sentence: SentenceSpan, item: FlatFeatureStructure, evidence: dict[str, list[FlatFeatureStructure]]
) -> tuple[int, int]:
    start = min([item.start, *(clause_item.start for items in evidence.values() for clause_item in items)])
    if item.end <= start:
        return sentence.char_span
    return sentence.tokens[start].char_span[0], sentence.tokens[item.end - 1].char_span[1]


def analyze_document(
    doc: Document, pack: GrammarPack, search_mode: SearchMode | None = None
) -> list[SentenceAnalysis]:
    """Every sentence analysis of a document, in document then cascade order.

    A sentence the cascade fails on yields no analyses; the document goes on.
    Provenance spans run from the first clause item a list-valued feature was
    built from to the end of the analysed verb.
    """
    abbreviations = pack.abbreviations()
    analyses: list[SentenceAnalysis] = []
    for line_index, line in enumerate(doc.lines):
        for sentence_index, sentence in enumerate(split_sentences(line, line_index, abbreviations)):
            try:
                streams = cascade_streams(
                    pack.cascade, sentence.tokens, pack.lexicon, pack.registry, pack.functions, search_mode
                )
            except TamExtractError as exc:
                logger.warning("Skipping %s line %d sentence %d: %s", doc.id, line_index, sentence_index, exc)
                continue
            final = streams[-1]
            evidence = streams[-2] if len(streams) > 1 else final
            for item in final.of_type(ANALYSIS_TYPE):
                clause = _clause_evidence(evidence, item)
                provenance = Provenance(
                    document_id=doc.id,
                    line_index=line_index,
                    sentence_index=sentence_index,
                    char_span=_char_span(sentence, item, clause),
                    disaster_type=doc.disaster_type,
                )
                needs = clause.get("HUMANITARIAN_NEED")
                analyses.append(
                    SentenceAnalysis(
                        analysis=item,
                        provenance=provenance,
                        sentence=sentence.text,
                        needs=None if needs is None else tuple(need.get("NAME") or "" for need in needs),
                    )
                )
    logger.info("Analysed %s: %d line(s), %d analyses", doc.id, len(doc.lines), len(analyses))
    return analyses


def analyze_corpus(
    documents: Sequence[Document], pack: GrammarPack, options: RunOptions | None = None
) -> list[SentenceAnalysis]:
    """Analyse documents on a pool of `options.workers` threads; results keep document order."""
    options = options or RunOptions()
    analyze = partial(analyze_document, pack=pack, search_mode=options.search_mode)
    if options.workers == 1 or len(documents) < 2:
        per_document = [analyze(doc) for doc in documents]
    else:
        with ThreadPoolExecutor(max_workers=options.workers) as executor:
            per_document = list(executor.map(analyze, documents))
    return [analysis for analyses in per_document for analysis in analyses]


class AnalysisFilter(BaseModel, frozen=True):
    """One `dimension=value` condition over sentence analyses."""

    dimension: FilterDimension
    value: str

    @classmethod
    def parse(cls, expression: str) -> Self:
        """Parse `temporal=anterior`, `volitional=hearsay`, `rule=request_sentence`, `disaster_type=ND`...

        Raises:
            FilterExpressionError: Malformed expression, unknown dimension or value.
        """
        name, separator, value = expression.partition("=")
        name, value = name.strip().lower(), value.strip()
        if not separator or not name or not value:
            raise FilterExpressionError(f"Expected 'dimension=value', got '{expression}'")
        if name not in get_args(FilterDimension):
            raise FilterExpressionError(f"Unknown filter dimension '{name}'")
        if name in DIMENSIONS:
            try:
                parse_category(name, value)  # type: ignore[arg-type]
            except CategoryError as exc:
                raise FilterExpressionError(str(exc)) from exc
        elif name == "disaster_type" and value not in get_args(DisasterType):
            raise FilterExpressionError(f"Unknown disaster type '{value}'")
        return cls(dimension=name, value=value)  # type: ignore[arg-type]

    def matches(self, analysis: SentenceAnalysis) -> bool:
        if self.dimension == "rule":
            return analysis.rule == self.value
        if self.dimension == "disaster_type":
            return analysis.provenance.disaster_type == self.value
        atom = analysis.get(self.dimension.upper())
        if not atom:
            return False
        try:
            actual = parse_category(self.dimension, atom)
        except CategoryError:
            return False
        return category_matches(parse_category(self.dimension, self.value), actual)


def parse_filter(expression: str) -> AnalysisFilter:
    return AnalysisFilter.parse(expression)


def filter_analyses(
    analyses: Iterable[SentenceAnalysis], expressions: Iterable[str | AnalysisFilter] = ()
) -> list[SentenceAnalysis]:
    """Keep the analyses matching every expression.

    Raises:
        FilterExpressionError: An expression does not parse.
    """
    filters = [parse_filter(item) if isinstance(item, str) else item for item in expressions]
    return [analysis for analysis in analyses if all(condition.matches(analysis) for condition in filters)]
