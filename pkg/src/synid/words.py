"""Words in the free commutative monoid over object names."""

from __future__ import annotations

import re
from collections.abc import Mapping


_NAME = r"[A-Za-z][A-Za-z0-9_']*"
_FACTOR = re.compile(rf"^({_NAME})(?:\^(\d+))?$")


def _parse_factors(text):
    text = text.strip()
    if text in ("", "1"):
        return []
    out = []
    for tok in text.split():
        m = _FACTOR.match(tok)
        if not m:
            raise ValueError(f"bad word factor {tok!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
    return out


class ObjectWord(Mapping):
    """A multiset of object names; the empty word is the monoidal unit ``1``.

    >>> ObjectWord("X U") - ObjectWord("U")
    ObjectWord('X')
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, items=()):
        counts = {}
        if isinstance(items, Mapping):
            pairs = items.items()
        elif isinstance(items, str):
            pairs = _parse_factors(items)
        else:
            pairs = ((x, 1) if isinstance(x, str) else x for x in items)
        for name, k in pairs:
            if k < 0:
                raise ValueError(f"negative multiplicity for {name!r}")
            if k:
                counts[name] = counts.get(name, 0) + k
        self._counts = counts
        self._hash = None

    @classmethod
    def power(cls, name, k=1) -> "ObjectWord":
        return cls({name: k})

    def __getitem__(self, name):
        return self._counts.get(name, 0)

    def __contains__(self, name):
        return name in self._counts

    def __iter__(self):
        return iter(self._counts)

    def __len__(self):
        return len(self._counts)

    def __eq__(self, other):
        if isinstance(other, ObjectWord):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __mul__(self, other: "ObjectWord") -> "ObjectWord":
        out = dict(self._counts)
        for name, k in other._counts.items():
            out[name] = out.get(name, 0) + k
        return ObjectWord(out)

    __add__ = __mul__

    def __sub__(self, other: "ObjectWord") -> "ObjectWord":
        """Truncated multiset difference."""
        return ObjectWord({n: max(0, k - other[n]) for n, k in self._counts.items()})

    def __le__(self, other: "ObjectWord") -> bool:
        return all(k <= other[n] for n, k in self._counts.items())

    @property
    def is_unit(self) -> bool:
        return not self._counts

    def size(self) -> int:
        return sum(self._counts.values())

    def support(self) -> frozenset:
        return frozenset(self._counts)

    def is_power_of(self, name) -> bool:
        return set(self._counts) <= {name}

    def with_count(self, name, k) -> "ObjectWord":
        out = dict(self._counts)
        out[name] = k
        return ObjectWord(out)

    def rename(self, mapping) -> "ObjectWord":
        out = {}
        for n, k in self._counts.items():
            m = mapping.get(n, n)
            out[m] = out.get(m, 0) + k
        return ObjectWord(out)

    def format(self, order=None) -> str:
        """``X U^2`` style text; ``1`` for the unit.

        ``order`` lists object names in the preferred print order; unlisted
        names follow alphabetically.
        """
        if not self._counts:
            return "1"
        rank = {n: i for i, n in enumerate(order or ())}
        names = sorted(self._counts, key=lambda n: (rank.get(n, len(rank)), n))
        return " ".join(n if self._counts[n] == 1 else f"{n}^{self._counts[n]}" for n in names)

    def __repr__(self):
        if not self._counts:
            return "ObjectWord()"
        return f"ObjectWord({self.format()!r})"

    def __str__(self):
        return self.format()


UNIT = ObjectWord()


def word(pairs) -> ObjectWord:
    """Build a word from ``(object, count)`` pairs; counts must be positive."""
    pairs = list(pairs)
    for name, k in pairs:
        if k <= 0:
            raise ValueError(f"count for {name!r} must be positive, got {k}")
    return ObjectWord(pairs)


def word_product(a: ObjectWord, b: ObjectWord) -> ObjectWord:
    return a * b


def word_difference(a: ObjectWord, b: ObjectWord) -> ObjectWord:
    return a - b
