#!/usr/bin/env python3
"""
Runtime values and the observations recorded for them.

MiniLang values map onto Python as: int -> ``int``, boolean -> ``bool``,
string -> ``str``, character -> ``MiniChar``, array -> ``MiniArray`` and
null -> ``None``.  ``project`` expands one runtime value into the
observations the profiler stores for it: primitives give their actual
value, while objects give their null check, type, size and elements.
"""

from dataclasses import dataclass
from typing import Any, List, Optional, Tuple, Union

from ..frontend.syntax import OccurrenceKind, VarOccurrence, feature_name


@dataclass(frozen=True)
class MiniChar:
    value: str

    @property
    def code(self) -> int:
        return ord(self.value)


class MiniArray:
    """Fixed-size array; compares by identity."""

    __slots__ = ("items",)

    def __init__(self, items: List[Any]):
        self.items = list(items)

    def __len__(self) -> int:
        return len(self.items)

    def __repr__(self) -> str:
        return f"MiniArray({self.items!r})"


RuntimeValue = Union[int, bool, str, MiniChar, MiniArray, None]


def type_name(value: RuntimeValue) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "int"
    if isinstance(value, MiniChar):
        return "char"
    if isinstance(value, str):
        return "string"
    if isinstance(value, MiniArray):
        return "array"
    raise TypeError(f"not a MiniLang value: {value!r}")


def render(value: RuntimeValue) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, MiniChar):
        return value.value
    if isinstance(value, MiniArray):
        return "[" + ", ".join(render(item) for item in value.items) + "]"
    return str(value)


# --------------------------------------------------------------------------
# Observed values
# --------------------------------------------------------------------------

NUMERIC = "numeric"
BOOLEAN = "boolean"
NULL_CHECK = "null_check"
TYPE_TAG = "type_tag"
SIZE = "size"
ELEMENT = "element"
NOMINAL = "nominal"

OBSERVED_KINDS = (NUMERIC, BOOLEAN, NULL_CHECK, TYPE_TAG, SIZE, ELEMENT, NOMINAL)


@dataclass(frozen=True)
class ObservedValue:
    kind: str
    value: Union[int, bool, str]
    index: Optional[int] = None

    def __post_init__(self):
        if self.kind not in OBSERVED_KINDS:
            raise ValueError(f"unknown observation kind {self.kind!r}")
        if self.kind == SIZE and self.value < 0:
            raise ValueError("size must be non-negative")
        if self.kind == ELEMENT and (self.index is None or self.index < 0):
            raise ValueError("element observations need a non-negative index")

    @property
    def is_numeric(self) -> bool:
        return self.kind in (NUMERIC, SIZE) or (self.kind == ELEMENT and not isinstance(self.value, bool))

    @property
    def is_boolean(self) -> bool:
        return self.kind in (BOOLEAN, NULL_CHECK) or (self.kind == ELEMENT and isinstance(self.value, bool))

    @property
    def nominal(self) -> str:
        """Rendering used when a column mixes kinds and must split multiway."""
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        return str(self.value)

    def to_list(self) -> List[Any]:
        return [self.kind, self.value, self.index]

    @classmethod
    def from_list(cls, data: List[Any]) -> "ObservedValue":
        kind, value, index = data
        return cls(kind, value, index)


def _primitive_observation(value: RuntimeValue) -> Optional[ObservedValue]:
    if isinstance(value, bool):
        return ObservedValue(BOOLEAN, value)
    if isinstance(value, int):
        return ObservedValue(NUMERIC, value)
    if isinstance(value, MiniChar):
        return ObservedValue(NUMERIC, value.code)
    return None


def project(name: str, line: int, kind: OccurrenceKind,
            value: RuntimeValue) -> List[Tuple[VarOccurrence, ObservedValue]]:
    """All observations one read or write of ``name`` at ``line`` produces."""
    base = VarOccurrence(name, line, kind)
    primitive = _primitive_observation(value)
    if primitive is not None:
        return [(base, primitive)]

    feature = OccurrenceKind.PREDICATE_FEATURE
    records = [
        (base, ObservedValue(NOMINAL, render(value))),
        (VarOccurrence(feature_name("isnull", name), line, feature), ObservedValue(NULL_CHECK, value is None)),
        (VarOccurrence(feature_name("typeof", name), line, feature), ObservedValue(TYPE_TAG, type_name(value))),
    ]
    if value is None:
        return records

    records.append((VarOccurrence(feature_name("length", name), line, feature), ObservedValue(SIZE, len(value))))
    if isinstance(value, MiniArray):
        for index, item in enumerate(value.items):
            element = _primitive_observation(item)
            if element is not None:
                records.append((
                    VarOccurrence(feature_name("element", name, index), line, feature),
                    ObservedValue(ELEMENT, element.value, index),
                ))
    return records
