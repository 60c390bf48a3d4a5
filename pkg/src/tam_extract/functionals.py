"""Functional operators callable from rule right hand sides.

Every functional receives the match context first and then its arguments,
each a string or `None` for an unbound variable. Returning `None` or the
empty string leaves the assigned feature absent.
"""

from collections.abc import Callable, Iterable, Mapping, Sequence
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from tam_extract.errors import CategoryError, UnknownFunctionError
from tam_extract.models.tam import DIMENSIONS, Adverb, TamClass, TempSpec
from tam_extract.stream import MatchContext
from tam_extract.tam_ontology import MATRIX_DIMENSIONS, TransformTable, apply_adverb, merge_dimension, parse_category
from tam_extract.types import Dimension

Functional = Callable[..., str | None]


def _present(args: Iterable[str | None]) -> list[str]:
    return [arg for arg in args if arg]


def _require(context: MatchContext | None, name: str) -> MatchContext:
    if context is None:
        raise ValueError(f"{name} needs a match context")
    return context


def conc(context: MatchContext | None, *args: str | None) -> str:
    return "".join(_present(args))


def conc_with_blanks(context: MatchContext | None, *args: str | None) -> str:
    return " ".join(_present(args))


def conc_with_separator(context: MatchContext | None, separator: str | None, *args: str | None) -> str:
    return (separator or "").join(_present(args))


def person_name_initial(context: MatchContext | None, *initials: str | None) -> str:
    """`A`, `K` gives `A. K.`; absent initials are skipped."""
    return " ".join(f"{initial}." for initial in _present(initials))


def is_reliable_person_name(context: MatchContext | None, full_name: str | None) -> str | None:
    # Heuristic: at least two words, none shorter than two characters
    if not full_name:
        return None
    words = full_name.split()
    return "true" if len(words) >= 2 and all(len(word) >= 2 for word in words) else "false"


def matched(context: MatchContext | None, type_name: str | None, feature: str | None) -> str | None:
    """Value of `feature` on the last consumed item of `type_name`."""
    item = _require(context, "Matched").last_consumed(type_name or "")
    return item.get(feature or "") if item is not None else None


def _clause_values(context: MatchContext | None, name: str, type_name: str | None, feature: str | None) -> list[str]:
    items = _require(context, name).clause_items(type_name or "")
    return _present(item.get(feature or "") for item in items)


def clause_list(
    context: MatchContext | None, type_name: str | None, feature: str | None, separator: str | None = ", "
) -> str:
    return (separator if separator is not None else ", ").join(
        _clause_values(context, "ClauseList", type_name, feature)
    )


def clause_slots(context: MatchContext | None, type_name: str | None, feature: str | None, slots: str | None) -> str:
    """Clause items as dash-prefixed slots, left-padded with empty slots up to `slots`."""
    values = _clause_values(context, "ClauseSlots", type_name, feature)
    if not values:
        return ""
    padding = max(0, int(slots or 0) - len(values))
    return "".join(f"-{value}" for value in [""] * padding + values)


def _dimension(value: str | None) -> Dimension:
    if value not in DIMENSIONS:
        raise CategoryError(f"Unknown dimension '{value}'")
    return value  # type: ignore[return-value]


def tam_functionals(transforms: TransformTable | None = None) -> dict[str, Functional]:
    """TAM functionals bound to a transformation table (the shipped one by default).

    - `ApplyAdverb(dimension, verb, adverb)`: the verb's atom in `dimension` after
      the adverb's effect.
    - `AdverbTempSpec(adverb, surface)`: the temporal specification an adverb contributes.
    - `MergeTam(dimension, kind, matrix, subordinate)`: one dimension of a matrix verb
      of `kind` merged over a subordinate verb.
    """

    def apply_adverb_functional(
        context: MatchContext | None, dimension: str | None, verb: str | None, adverb: str | None
    ) -> str | None:
        checked = _dimension(dimension)
        if not adverb:
            return verb
        current = TamClass(**{checked: parse_category(checked, verb)}) if verb else TamClass()
        modified = apply_adverb(current, Adverb(dimension=checked, value=adverb, surface=""), transforms)
        category = modified.get(checked)
        return category.render() if category is not None else None

    def adverb_tempspec(context: MatchContext | None, adverb: str | None, surface: str | None) -> str | None:
        if not adverb or not surface:
            return None
        return TempSpec(spec=adverb, surface=surface).render()

    def merge_tam(
        context: MatchContext | None,
        dimension: str | None,
        kind: str | None,
        matrix: str | None,
        subordinate: str | None = None,
    ) -> str | None:
        if kind not in MATRIX_DIMENSIONS:
            raise CategoryError(f"Unknown matrix verb kind '{kind}'")
        return merge_dimension(_dimension(dimension), matrix, subordinate, kind)  # type: ignore[arg-type]

    return {
        "ApplyAdverb": apply_adverb_functional,
        "AdverbTempSpec": adverb_tempspec,
        "MergeTam": merge_tam,
    }


BUILTINS: dict[str, Functional] = {
    "Conc": conc,
    "ConcWithBlanks": conc_with_blanks,
    "ConcWithSeparator": conc_with_separator,
    "PersonNameInitial": person_name_initial,
    "IsReliablePersonName": is_reliable_person_name,
    "Matched": matched,
    "ClauseList": clause_list,
    "ClauseSlots": clause_slots,
    **tam_functionals(),
}


class FunctionRegistry:
    """Read-only mapping of functional names to callables."""

    def __init__(self, functions: Mapping[str, Functional] | None = None) -> None:
        self._functions = dict(BUILTINS if functions is None else functions)

    def __contains__(self, name: object) -> bool:
        return name in self._functions

    @property
    def names(self) -> list[str]:
        return sorted(self._functions)

    def get(self, name: str) -> Functional:
        try:
            return self._functions[name]
        except KeyError:
            raise UnknownFunctionError(name) from None

    def with_functions(self, functions: Mapping[str, Functional]) -> Self:
        return type(self)({**self._functions, **functions})

    def call(self, name: str, args: Sequence[str | None], context: MatchContext | None = None) -> str | None:
        return self.get(name)(context, *args)


def eval_functional(
    name: str,
    args: Sequence[str | None],
    context: MatchContext | None = None,
    functions: FunctionRegistry | None = None,
) -> str:
    """Evaluate a functional, mapping an absent result to the empty string.

    Raises:
        UnknownFunctionError: `name` is not registered.
    """
    return (functions or FunctionRegistry()).call(name, args, context) or ""
