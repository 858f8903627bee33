"""Finite subsets of the naturals as canonical codes, plus set prefixes.

The canonical code of a finite set F is the integer sum of 2**n over n in F,
so a code doubles as a bitmask and subset tests are single integer ops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def code_of(elements: Iterable[int]) -> int:
    code = 0
    for n in elements:
        if n < 0:
            raise ValueError(f"negative element {n}")
        code |= 1 << n
    return code


def elements_of(code: int) -> tuple[int, ...]:
    if code < 0:
        raise ValueError("codes are nonnegative")
    out = []
    while code:
        low = code & -code
        out.append(low.bit_length() - 1)
        code ^= low
    return tuple(out)


@dataclass(frozen=True)
class FiniteSet:
    """A finite set of naturals, stored as its canonical code."""

    code: int

    @classmethod
    def from_elements(cls, elements: Iterable[int]) -> "FiniteSet":
        return cls(code_of(elements))

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.code)

    def __contains__(self, x: int) -> bool:
        return x >= 0 and (self.code >> x) & 1 == 1

    def __len__(self) -> int:
        return self.code.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    @property
    def is_empty(self) -> bool:
        return self.code == 0

    def max_value(self) -> int:
        """Largest element; undefined (raises) on the empty set."""
        if self.code == 0:
            raise ValueError("max of the empty set is undefined")
        return self.code.bit_length() - 1

    def min_value(self) -> int:
        if self.code == 0:
            raise ValueError("min of the empty set is undefined")
        low = self.code & -self.code
        return low.bit_length() - 1

    def issubset_mask(self, mask: int) -> bool:
        return self.code & ~mask == 0

    def union(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet(self.code | other.code)

    def characteristic_string(self) -> str:
        """Binary string of length max+1 with ones exactly on the set.

        The empty set yields the empty string.
        """
        if self.code == 0:
            return ""
        top = self.max_value()
        return "".join("1" if (self.code >> n) & 1 else "0" for n in range(top + 1))


def encode_finite_set(elements: Iterable[int]) -> FiniteSet:
    """Canonical code of a finite set given by its (distinct) elements."""
    return FiniteSet.from_elements(elements)


def decode_finite_set(code: int) -> FiniteSet:
    """The finite set whose canonical code is ``code``."""
    if code < 0:
        raise ValueError("codes are nonnegative")
    return FiniteSet(code)


def subset_of_string(fs: FiniteSet, sigma: str) -> bool:
    """Whether every element n of fs has sigma[n] == '1'.

    Elements at or beyond len(sigma) make the answer False.
    """
    if fs.code == 0:
        return True
    if fs.max_value() >= len(sigma):
        return False
    return all(sigma[n] == "1" for n in fs.elements)


@dataclass(frozen=True)
class SetPrefix:
    """Characteristic prefix of a constructed set: `length` bits of mask."""

    mask: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.mask >> self.length:
            raise ValueError("mask has bits at or beyond length")

    @classmethod
    def from_members(cls, members: Iterable[int], length: int | None = None) -> "SetPrefix":
        code = code_of(members)
        if length is None:
            length = code.bit_length()
        return cls(code, length)

    @classmethod
    def from_bits(cls, bits: str) -> "SetPrefix":
        mask = 0
        for pos, ch in enumerate(bits):
            if ch == "1":
                mask |= 1 << pos
            elif ch != "0":
                raise ValueError(f"bad bit {ch!r}")
        return cls(mask, len(bits))

    @property
    def bits(self) -> str:
        return "".join("1" if (self.mask >> n) & 1 else "0" for n in range(self.length))

    def members(self) -> tuple[int, ...]:
        return elements_of(self.mask)

    @property
    def principal(self) -> tuple[int, ...]:
        """Members in increasing order (the principal-function table)."""
        return self.members()

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.length and (self.mask >> x) & 1 == 1

    def complement_members(self) -> tuple[int, ...]:
        return tuple(n for n in range(self.length) if not (self.mask >> n) & 1)
