from tam_extract.corpus import ingest_corpus, read_document
from tam_extract.errors import (
    CategoryError,
    FeatureStructureError,
    FilterExpressionError,
    GrammarSyntaxError,
    LexiconFormatError,
    LexiconSyntaxError,
    PackError,
    PackValidationError,
    TamExtractError,
    UnknownFunctionError,
)
from tam_extract.grammar_parser import parse_grammar
from tam_extract.lexicon import CompiledLexicon, compile_lexicon, parse_lexicon
from tam_extract.matcher import run_cascade, run_level
from tam_extract.models.document import AnalysisRecord, Document, SentenceAnalysis
from tam_extract.models.feature_structure import FlatFeatureStructure, TypeDeclaration, TypeRegistry
from tam_extract.models.tam import TamClass
from tam_extract.pack import GrammarPack, load_pack
from tam_extract.pipeline import RunOptions, analyze_corpus, analyze_document, filter_analyses
from tam_extract.render import parse_json, render_block, render_blocks, render_json
from tam_extract.tam_ontology import apply_adverb, combine_subordination, marker_tam_classes, parse_category
from tam_extract.tokenizer import split_sentences, tokenize

__all__ = [
    "AnalysisRecord",
    "CategoryError",
    "CompiledLexicon",
    "Document",
    "FeatureStructureError",
    "FilterExpressionError",
    "FlatFeatureStructure",
    "GrammarPack",
    "GrammarSyntaxError",
    "LexiconFormatError",
    "LexiconSyntaxError",
    "PackError",
    "PackValidationError",
    "RunOptions",
    "SentenceAnalysis",
    "TamClass",
    "TamExtractError",
    "TypeDeclaration",
    "TypeRegistry",
    "UnknownFunctionError",
    "analyze_corpus",
    "analyze_document",
    "apply_adverb",
    "combine_subordination",
    "compile_lexicon",
    "filter_analyses",
    "ingest_corpus",
    "load_pack",
    "marker_tam_classes",
    "parse_category",
    "parse_grammar",
    "parse_json",
    "parse_lexicon",
    "read_document",
    "render_block",
    "render_blocks",
    "render_json",
    "run_cascade",
    "run_level",
    "split_sentences",
    "tokenize",
]
