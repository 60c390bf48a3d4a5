from pydantic import BaseModel

from tam_extract.types import TokenClass


class Token(BaseModel, frozen=True):
    surface: str
    token_class: TokenClass
    char_span: tuple[int, int]


class SentenceSpan(BaseModel, frozen=True):
    """A sentence cut from one source line, with its tokens and offsets into that line."""

    text: str
    tokens: tuple[Token, ...]
    source_line_index: int = 0
    char_span: tuple[int, int] = (0, 0)

    @property
    def surfaces(self) -> list[str]:
        return [token.surface for token in self.tokens]
