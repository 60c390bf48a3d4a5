try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel

from tam_extract.models.feature_structure import FlatFeatureStructure
from tam_extract.types import DisasterType


class DocumentMetadata(BaseModel, frozen=True):
    publication_date: str | None = None
    url: str | None = None
    author: str | None = None


class Document(BaseModel, frozen=True):
    """One corpus article, named `<topic>-<seq>-<Name>-<TYPE>.txt`."""

    topic_number: int
    sequence: int | None = None
    topic_name: str
    disaster_type: DisasterType
    metadata: DocumentMetadata = DocumentMetadata()
    lines: tuple[str, ...] = ()
    path: str = ""

    @property
    def id(self) -> str:
        parts = [str(self.topic_number)]
        if self.sequence is not None:
            parts.append(str(self.sequence))
        return "-".join([*parts, self.topic_name, self.disaster_type])

    @classmethod
    def from_text(cls, text: str, **fields) -> Self:
        return cls(lines=tuple(text.splitlines()), **fields)


class Provenance(BaseModel, frozen=True):
    document_id: str = ""
    line_index: int = 0
    sentence_index: int = 0
    char_span: tuple[int, int] = (0, 0)
    disaster_type: DisasterType | None = None


class SentenceAnalysis(BaseModel, frozen=True):
    """A `sentence_analysis` structure with where it came from.

    `needs` holds the humanitarian needs one by one when the pipeline collected
    them; otherwise they are read back from the HUMANITARIAN_NEED slots.
    """

    analysis: FlatFeatureStructure
    provenance: Provenance = Provenance()
    sentence: str = ""
    needs: tuple[str, ...] | None = None

    def get(self, feature: str) -> str | None:
        return self.analysis.get(feature)

    @property
    def rule(self) -> str | None:
        return self.get("RULE")


class CategoryRecord(BaseModel, frozen=True):
    base: str
    anaphoric: bool = False
    spec: str | None = None


class TamRecord(BaseModel, frozen=True):
    volitional: CategoryRecord | None = None
    epistemic: CategoryRecord | None = None
    temporal: CategoryRecord | None = None


class AnalysisRecord(BaseModel, frozen=True):
    """Machine-readable form of one analysis, as written by `render_json`."""

    doc: str
    line: int
    sentence: int
    char_span: tuple[int, int]
    disaster_type: DisasterType | None = None
    rule: str | None = None
    surface: str | None = None
    tam: TamRecord = TamRecord()
    tempspec: str | None = None
    verb: str | None = None
    people: list[str] = []
    disaster: str | None = None
    needs: list[str] = []
