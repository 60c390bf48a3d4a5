"""Command line interface: `tam-extract run | compile-lexicon | validate-pack | catalog`."""

import argparse
import logging
import sys
import warnings
from pathlib import Path
from typing import get_args

from pydantic import ValidationError

from tam_extract.corpus import ingest_corpus, read_document
from tam_extract.errors import FilterExpressionError, TamExtractError
from tam_extract.lexicon import CompiledLexicon
from tam_extract.models.document import Document
from tam_extract.models.feature_structure import GAZETTEER_DECLARATION, TypeRegistry
from tam_extract.pack import load_pack
from tam_extract.pipeline import RunOptions, analyze_corpus, filter_analyses, parse_filter
from tam_extract.render import render_blocks, render_json
from tam_extract.types import OutputFormat, SearchMode

logger = logging.getLogger("tam_extract")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PACK = 2
EXIT_IO = 3


def _compile_lexicon_command(args: argparse.Namespace) -> int:
    declaration = GAZETTEER_DECLARATION
    if args.types is not None:
        registry = TypeRegistry.from_path(args.types)
        if "gazetteer" in registry:
            declaration = registry.get("gazetteer")
    lexicon = CompiledLexicon.from_path(args.source, declaration)
    lexicon.save(args.target)
    print(f"Compiled {len(lexicon)} entries into {args.target}")
    return EXIT_OK


def _documents(source: Path) -> list[Document]:
    if source.is_dir():
        return ingest_corpus(source)
    if not source.is_file():
        raise FileNotFoundError(f"No such file or directory: {source}")
    return [read_document(source)]


def _run_command(args: argparse.Namespace) -> int:
    options = RunOptions(
        search_mode=args.mode,
        workers=args.workers,
        format=args.format,
        filters=tuple(args.filter),
    )
    filters = [parse_filter(expression) for expression in options.filters]
    try:
        documents = _documents(Path(args.input))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    pack = load_pack(args.pack)
    analyses = filter_analyses(analyze_corpus(documents, pack, options), filters)
    output = render_json(analyses) + "\n" if options.format == "json" else render_blocks(analyses)
    if args.out is None:
        sys.stdout.write(output)
    else:
        Path(args.out).write_text(output, encoding="utf-8")
        logger.info("Wrote %d analyses to %s", len(analyses), args.out)
    return EXIT_OK


def _validate_pack_command(args: argparse.Namespace) -> int:
    pack = load_pack(args.pack, validate=False)
    for message in pack.pack_warnings():
        print(f"warning: {message}")
    violations = pack.violations()
    for message in violations:
        print(f"error: {message}")
    if violations:
        return EXIT_PACK
    print(f"Pack '{pack.name}' is valid: {len(pack.cascade.rules)} rule(s), {len(pack.lexicon_entries())} entries")
    return EXIT_OK


def _catalog_command(args: argparse.Namespace) -> int:
    pack = load_pack(args.pack)
    for name, level, output_type in pack.rule_catalog():
        print(f"{name}\t{level}\t{output_type}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tam-extract", description="TAM classification of Turkish crisis news.")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging threshold (default: WARNING).",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    compile_parser = subparsers.add_parser("compile-lexicon", help="Compile a lexicon source file.")
    compile_parser.add_argument("source", help="Lexicon source (.lex).")
    compile_parser.add_argument("target", help="Compiled lexicon output path.")
    compile_parser.add_argument("--types", default=None, help="Type declarations holding the gazetteer type.")
    compile_parser.set_defaults(func=_compile_lexicon_command)

    run_parser = subparsers.add_parser("run", help="Analyse a corpus file or directory.")
    run_parser.add_argument("--pack", default=None, help="Grammar pack directory (default: $TAM_PACK or shipped).")
    run_parser.add_argument("--input", required=True, help="Corpus file or directory.")
    run_parser.add_argument("--format", default="block", choices=get_args(OutputFormat))
    run_parser.add_argument(
        "--filter", action="append", default=[], metavar="DIM=VALUE", help="Keep matching analyses; repeatable."
    )
    run_parser.add_argument("--mode", default=None, choices=get_args(SearchMode), help="Override every level.")
    run_parser.add_argument("--workers", type=int, default=1, help="Documents analysed in parallel.")
    run_parser.add_argument("--out", default=None, help="Write output here instead of stdout.")
    run_parser.set_defaults(func=_run_command)

    validate_parser = subparsers.add_parser("validate-pack", help="Check a grammar pack for consistency.")
    validate_parser.add_argument("pack", help="Grammar pack directory.")
    validate_parser.set_defaults(func=_validate_pack_command)

    catalog_parser = subparsers.add_parser("catalog", help="List the rules of a grammar pack.")
    catalog_parser.add_argument("pack", nargs="?", default=None, help="Grammar pack directory.")
    catalog_parser.set_defaults(func=_catalog_command)
    return parser


def _parse_args(argv: list[str] | None) -> argparse.Namespace:
    return _build_parser().parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)
    warnings.simplefilter("default")
    try:
        return int(args.func(args))
    except (FilterExpressionError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TamExtractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PACK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
