"""Finite multisets with non-negative integer counts.

Markings, pre/postconditions and responsibility sets are all `Multiset`
instances.  A multiset is immutable and hashable; entries with count zero
are never stored, so equal multisets always share the same canonical key.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from typing import Any


class Multiset(Mapping):
    """Immutable multiset over hashable, orderable elements.

    Construct from a mapping of counts or from an iterable of elements
    (each occurrence counts once)::

        >>> Multiset({"p": 2}) - Multiset({"p": 1, "q": 3})
        Multiset({'p': 1})
        >>> Multiset(["a", "b", "a"])["a"]
        2
    """

    __slots__ = ("_counts", "_key", "_hash")

    def __init__(self, data: Mapping[Any, int] | Iterable[Any] | None = None):
        counts: dict[Any, int] = {}
        if data is None:
            pass
        elif isinstance(data, Mapping):
            for elem, n in data.items():
                if n < 0:
                    raise ValueError(f"negative count {n} for {elem!r}")
                if n:
                    counts[elem] = counts.get(elem, 0) + int(n)
        else:
            for elem in data:
                counts[elem] = counts.get(elem, 0) + 1
        self._counts = counts
        self._key = tuple(sorted(counts.items()))
        self._hash = hash(self._key)

    @classmethod
    def _from_counts(cls, counts: dict) -> "Multiset":
        # counts must already be canonical (no zeros)
        obj = cls.__new__(cls)
        obj._counts = counts
        obj._key = tuple(sorted(counts.items()))
        obj._hash = hash(obj._key)
        return obj

    # Mapping protocol: missing elements have count 0
    def __getitem__(self, elem: Hashable) -> int:
        return self._counts.get(elem, 0)

    def __iter__(self) -> Iterator:
        return (e for e, _ in self._key)

    def __len__(self) -> int:
        """Number of distinct elements (size of the support)."""
        return len(self._counts)

    def __contains__(self, elem: object) -> bool:
        return elem in self._counts

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._key == other._key
        if isinstance(other, Mapping):
            return self == Multiset(other)
        return NotImplemented

    def __lt__(self, other: "Multiset") -> bool:
        # total order on canonical keys, used only for deterministic sorting
        return self._key < other._key

    def __repr__(self) -> str:
        return f"Multiset({dict(self._key)!r})"

    @property
    def key(self) -> tuple:
        """Canonical form: sorted tuple of ``(element, count)`` pairs."""
        return self._key

    @property
    def cardinality(self) -> int:
        return sum(self._counts.values())

    def support(self) -> frozenset:
        return frozenset(self._counts)

    def elements(self) -> list:
        """Sorted list of elements, repeated according to their counts."""
        return [e for e, n in self._key for _ in range(n)]

    def __add__(self, other: "Multiset") -> "Multiset":
        counts = dict(self._counts)
        for e, n in other._counts.items():
            counts[e] = counts.get(e, 0) + n
        return Multiset._from_counts(counts)

    def __sub__(self, other: "Multiset") -> "Multiset":
        counts = {}
        for e, n in self._counts.items():
            rest = n - other._counts.get(e, 0)
            if rest > 0:
                counts[e] = rest
        return Multiset._from_counts(counts)

    def issubset(self, other: "Multiset") -> bool:
        oc = other._counts
        return all(n <= oc.get(e, 0) for e, n in self._counts.items())

    __le__ = issubset

    def image(self, f: Callable[[Any], Any] | Mapping) -> "Multiset":
        """``f[M]``: count of ``y`` is the summed count of all preimages."""
        fn = f.__getitem__ if isinstance(f, Mapping) else f
        counts: dict = {}
        for e, n in self._counts.items():
            y = fn(e)
            counts[y] = counts.get(y, 0) + n
        return Multiset._from_counts(counts)

    def restrict(self, elems: Iterable) -> "Multiset":
        """Sub-multiset keeping only the given elements."""
        keep = set(elems)
        return Multiset._from_counts({e: n for e, n in self._counts.items() if e in keep})

    def __reduce__(self):
        return (Multiset, (dict(self._key),))


EMPTY = Multiset()
