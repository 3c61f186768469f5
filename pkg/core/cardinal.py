# core/cardinal.py
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Iterable, Sequence

from core.errors import InputError


class Tag(IntEnum):
    FINITE = 0
    ALEPH = 1


@dataclass(frozen=True, order=True)
class Cardinal:
    """
    Exact cardinal: a natural number or aleph_k for a natural index k.

    Field order makes the generated ordering the cardinal ordering:
    every finite cardinal sits below every aleph, and within a tag the
    value decides. Limit alephs are not representable.
    """

    tag: Tag
    value: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", Tag(self.tag))
        if isinstance(self.value, bool) or not isinstance(self.value, int) or self.value < 0:
            raise InputError(f"cardinal value must be a natural number, got {self.value!r}")

    @property
    def is_finite(self) -> bool:
        return self.tag is Tag.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.tag is Tag.ALEPH

    @property
    def is_zero(self) -> bool:
        return self.tag is Tag.FINITE and self.value == 0

    def __str__(self) -> str:
        if self.is_finite:
            return str(self.value)
        return f"aleph_{self.value}"

    def to_json(self) -> Any:
        if self.is_finite:
            return self.value
        return {"aleph": self.value}

    @classmethod
    def from_json(cls, raw: Any) -> "Cardinal":
        if isinstance(raw, bool):
            raise InputError(f"not a cardinal: {raw!r}")
        if isinstance(raw, int):
            return finite(raw)
        if isinstance(raw, dict) and set(raw) == {"aleph"}:
            index = raw["aleph"]
            if isinstance(index, int) and not isinstance(index, bool):
                return aleph(index)
        raise InputError(f"not a cardinal: {raw!r}")


def finite(n: int) -> Cardinal:
    return Cardinal(Tag.FINITE, n)


def aleph(k: int) -> Cardinal:
    return Cardinal(Tag.ALEPH, k)


ZERO = finite(0)
ALEPH_0 = aleph(0)


def succ(a: Cardinal) -> Cardinal:
    return Cardinal(a.tag, a.value + 1)


def pred(a: Cardinal) -> Cardinal:
    """Inverse of succ. aleph_0 and 0 are not successors."""
    if a.value == 0:
        raise InputError(f"{a} is not a successor cardinal")
    return Cardinal(a.tag, a.value - 1)


def sup(cards: Sequence[Cardinal]) -> Cardinal:
    if not cards:
        raise InputError("empty supremum")
    return max(cards)


def sup_plus(cards: Iterable[Cardinal]) -> Cardinal:
    """Least cardinal strictly above every member; 0 for the empty family."""
    cards = list(cards)
    if not cards:
        return ZERO
    return succ(sup(cards))


def mul(a: Cardinal, b: Cardinal) -> Cardinal:
    if a.is_zero or b.is_zero:
        return ZERO
    if a.is_finite and b.is_finite:
        return finite(a.value * b.value)
    return max(a, b)


def add(a: Cardinal, b: Cardinal) -> Cardinal:
    if a.is_finite and b.is_finite:
        return finite(a.value + b.value)
    return max(a, b)
