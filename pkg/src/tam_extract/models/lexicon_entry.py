try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel


class LexiconEntry(BaseModel, frozen=True):
    """One lexicon line: a (possibly multi-word) key and its gazetteer assignments."""

    key: tuple[str, ...]
    assignments: dict[str, str]
    line_number: int = 0
    marker: str | None = None

    @classmethod
    def from_words(cls, text: str, assignments: dict[str, str], **kwargs) -> Self:
        return cls(key=tuple(text.split()), assignments=assignments, **kwargs)

    @property
    def text(self) -> str:
        return " ".join(self.key)

    @property
    def gtype(self) -> str | None:
        return self.assignments.get("GTYPE")
