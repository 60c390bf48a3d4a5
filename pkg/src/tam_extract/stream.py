"""The item stream a cascade level reads, and the context functionals see."""

from bisect import bisect_left
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from tam_extract.models.feature_structure import FlatFeatureStructure
from tam_extract.models.token import Token

CLAUSE_BOUNDARIES = frozenset({".", "!", "?", ";", ":", '"', "“", "”", "«", "»", "(", ")"})


class Stream:
    """Feature structures over one sentence, indexed by start token.

    Several items may start at the same position (ambiguous lexicon variants,
    overlapping annotations); they keep their insertion order.
    """

    def __init__(self, items: Iterable[FlatFeatureStructure], tokens: Sequence[Token] = ()) -> None:
        self.tokens = tuple(tokens)
        ordered = sorted(items, key=lambda item: item.start)
        self._items = tuple(ordered)
        self._by_start: dict[int, list[FlatFeatureStructure]] = {}
        for item in ordered:
            self._by_start.setdefault(item.start, []).append(item)
        self._starts = sorted(self._by_start)

    def __iter__(self) -> Iterator[FlatFeatureStructure]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    @property
    def items(self) -> tuple[FlatFeatureStructure, ...]:
        return self._items

    @property
    def starts(self) -> list[int]:
        return list(self._starts)

    @property
    def length(self) -> int:
        """Token count, or the furthest item end when no tokens are attached."""
        return max(len(self.tokens), max((item.end for item in self._items), default=0))

    def next_start(self, position: int) -> int | None:
        """First occupied start at or after `position`."""
        index = bisect_left(self._starts, position)
        return self._starts[index] if index < len(self._starts) else None

    def items_at(self, position: int) -> list[FlatFeatureStructure]:
        return list(self._by_start.get(position, ()))

    def of_type(self, type_name: str) -> list[FlatFeatureStructure]:
        return [item for item in self._items if item.type_name == type_name]

    def clause_start(self, position: int) -> int:
        """Start of the clause containing the token before `position`."""
        for index in range(min(position, len(self.tokens)) - 1, -1, -1):
            if self.tokens[index].surface in CLAUSE_BOUNDARIES:
                return index + 1
        return 0


@dataclass(frozen=True)
class MatchContext:
    """What a functional operator may look at besides its arguments."""

    stream: Stream
    start: int
    end: int
    consumed: tuple[FlatFeatureStructure, ...] = ()
    rule_name: str = ""

    def last_consumed(self, type_name: str) -> FlatFeatureStructure | None:
        for item in reversed(self.consumed):
            if item.type_name == type_name:
                return item
        return None

    def clause_items(self, type_name: str) -> list[FlatFeatureStructure]:
        """Items of `type_name` left of the match in its clause, greedy longest and non-overlapping."""
        position = self.stream.clause_start(self.start)
        collected: list[FlatFeatureStructure] = []
        while position < self.start:
            candidates = [
                item
                for item in self.stream.items_at(position)
                if item.type_name == type_name and item.end <= self.start
            ]
            if not candidates:
                position += 1
                continue
            longest = max(candidates, key=lambda item: item.end)
            collected.append(longest)
            position = max(longest.end, position + 1)
        return collected
