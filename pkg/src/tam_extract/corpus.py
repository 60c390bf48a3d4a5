"""Corpus ingestion.

Articles are UTF-8 text files named `<topic>-<seq>-<Name>-<TYPE>.txt`, the
sequence being optional for single-article topics and TYPE one of MMD
(man-made disaster), ND (natural disaster) or DO (disease outbreak).
Leading URL, date and author lines are metadata and are not analysed.
"""

import logging
import warnings
from pathlib import Path

import regex

from tam_extract.models.document import Document, DocumentMetadata

logger = logging.getLogger(__name__)

_FILENAME_RE = regex.compile(r"(?P<topic>\d+)(?:-(?P<sequence>\d+))?-(?P<name>[^-]+)-(?P<type>MMD|ND|DO)")
_DATE = r"\d{1,2}\.\d{1,2}\.\d{4}(?:\s*[, ]\s*\d{1,2}[:.]\d{2}(?:[:.]\d{2})?)?"
_METADATA_RE = regex.compile(
    rf"""
    \s*
    (?:<(?P<url>https?://[^>\s]+)>|(?P<bare_url>https?://[^\s,]+))?
    \s*,?\s*
    (?P<date>{_DATE})?
    \s*
    """,
    regex.VERBOSE,
)
_AUTHOR_RE = regex.compile(r"\s*(?:Yazar|Author)\s*:\s*(?P<author>\S.*?)\s*")


def parse_filename(name: str) -> dict[str, object] | None:
    """Document fields encoded in a corpus file name, or `None` if it does not follow the convention."""
    found = _FILENAME_RE.fullmatch(Path(name).stem)
    if found is None:
        return None
    return {
        "topic_number": int(found["topic"]),
        "sequence": int(found["sequence"]) if found["sequence"] else None,
        "topic_name": found["name"],
        "disaster_type": found["type"],
    }


def parse_metadata_line(line: str) -> dict[str, str] | None:
    """URL, date or author carried by a header line; `None` for a content line."""
    if author := _AUTHOR_RE.fullmatch(line):
        return {"author": author["author"]}
    found = _METADATA_RE.fullmatch(line)
    if found is None:
        return None
    fields = {
        "url": found["url"] or found["bare_url"],
        "publication_date": found["date"],
    }
    fields = {key: value for key, value in fields.items() if value}
    return fields or None


def split_header(lines: list[str]) -> tuple[DocumentMetadata, list[str]]:
    """Separate leading metadata lines from the content lines."""
    collected: dict[str, str] = {}
    for index, line in enumerate(lines):
        if not line.strip():
            continue
        fields = parse_metadata_line(line)
        if fields is None:
            return DocumentMetadata(**collected), lines[index:]
        for key, value in fields.items():
            collected.setdefault(key, value)
    return DocumentMetadata(**collected), []


def read_document(path: Path | str) -> Document:
    """Read one corpus file.

    Raises:
        ValueError: The file name does not follow the corpus convention.
        OSError: The file cannot be read.
    """
    path = Path(path)
    fields = parse_filename(path.name)
    if fields is None:
        raise ValueError(f"Not a corpus file name: {path.name}")
    metadata, lines = split_header(path.read_text(encoding="utf-8").splitlines())
    return Document.model_validate({**fields, "metadata": metadata, "lines": tuple(lines), "path": str(path)})


def ingest_corpus(root_dir: Path | str) -> list[Document]:
    """Collect every corpus document under `root_dir`, recursively, in path order.

    Files that are not `.txt` or whose names do not follow the convention are
    skipped with a warning.
    """
    root = Path(root_dir)
    documents: list[Document] = []
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        if path.suffix != ".txt" or parse_filename(path.name) is None:
            warnings.warn(f"Skipping '{path.relative_to(root)}': not a corpus article", stacklevel=2)
            continue
        documents.append(read_document(path))
    logger.info("Ingested %d document(s) from %s", len(documents), root)
    return documents
