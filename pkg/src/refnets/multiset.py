"""Finite multisets (bags) over hashable elements.

Markings, token demands and token productions are all multisets; the
engines lean on the algebra here (sum, union, truncated subtraction,
inclusion) instead of ad-hoc counting.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping
from typing import Callable, TypeVar

T = TypeVar("T", bound=Hashable)

__all__ = ["Multiset", "EMPTY"]


class Multiset:
    """Immutable finite multiset: element -> positive count.

    Zero-count entries are never stored, so two multisets with the same
    positive entries always compare (and hash) equal.
    """

    __slots__ = ("_entries", "_size", "_hash")

    def __init__(self, items: Iterable[T] | Mapping[T, int] = ()):
        entries: dict = {}
        if isinstance(items, Mapping):
            for elem, count in items.items():
                if not isinstance(count, int) or isinstance(count, bool):
                    raise ValueError(f"multiset count must be an int, got {count!r}")
                if count < 0:
                    raise ValueError(f"multiset count must be >= 0, got {count}")
                if count:
                    entries[elem] = entries.get(elem, 0) + count
        else:
            for elem in items:
                entries[elem] = entries.get(elem, 0) + 1
        self._entries = entries
        self._size = sum(entries.values())
        self._hash: int | None = None

    @classmethod
    def _raw(cls, entries: dict) -> "Multiset":
        ms = object.__new__(cls)
        ms._entries = entries
        ms._size = sum(entries.values())
        ms._hash = None
        return ms

    def count(self, elem) -> int:
        return self._entries.get(elem, 0)

    def __contains__(self, elem) -> bool:
        return elem in self._entries

    def __len__(self) -> int:
        """Total size: the sum of all counts."""
        return self._size

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self) -> Iterator:
        """Iterate over distinct elements (the support)."""
        return iter(self._entries)

    def items(self) -> Iterator[tuple[Hashable, int]]:
        return iter(self._entries.items())

    def items_sorted(self, key: Callable = repr) -> list[tuple[Hashable, int]]:
        """Entries ordered by a serialization key of the element."""
        return sorted(self._entries.items(), key=lambda kv: key(kv[0]))

    def expand(self) -> Iterator:
        """Iterate elements with repetition."""
        for elem, count in self._entries.items():
            for _ in range(count):
                yield elem

    def __add__(self, other: "Multiset") -> "Multiset":
        """Pointwise sum of counts."""
        if not isinstance(other, Multiset):
            return NotImplemented
        entries = dict(self._entries)
        for elem, count in other._entries.items():
            entries[elem] = entries.get(elem, 0) + count
        return Multiset._raw(entries)

    def __sub__(self, other: "Multiset") -> "Multiset":
        """Truncated subtraction: counts never go below zero."""
        if not isinstance(other, Multiset):
            return NotImplemented
        entries = dict(self._entries)
        for elem, count in other._entries.items():
            left = entries.get(elem, 0) - count
            if left > 0:
                entries[elem] = left
            else:
                entries.pop(elem, None)
        return Multiset._raw(entries)

    def union(self, other: "Multiset") -> "Multiset":
        """Pointwise maximum of counts."""
        entries = dict(self._entries)
        for elem, count in other._entries.items():
            if count > entries.get(elem, 0):
                entries[elem] = count
        return Multiset._raw(entries)

    __or__ = union

    def __le__(self, other: "Multiset") -> bool:
        """Multiset inclusion: every count of self fits in other."""
        if not isinstance(other, Multiset):
            return NotImplemented
        if self._size > other._size:
            return False
        return all(count <= other._entries.get(elem, 0) for elem, count in self._entries.items())

    def __lt__(self, other: "Multiset") -> bool:
        return self <= other and self != other

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._entries == other._entries

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def add(self, elem, count: int = 1) -> "Multiset":
        if count < 0:
            raise ValueError("count must be >= 0")
        if count == 0:
            return self
        entries = dict(self._entries)
        entries[elem] = entries.get(elem, 0) + count
        return Multiset._raw(entries)

    def to_counts(self) -> dict:
        return dict(self._entries)

    def __repr__(self) -> str:
        if not self._entries:
            return "Multiset()"
        inner = ", ".join(f"{e!r}: {c}" for e, c in self._entries.items())
        return f"Multiset({{{inner}}})"


EMPTY = Multiset()
