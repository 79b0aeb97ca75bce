"""Ultimately periodic words and enumeration of small lassos."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterator, Sequence, Tuple


@dataclass(frozen=True)
class LassoWord:
    """The omega-word ``prefix . period^omega``."""

    prefix: Tuple[Hashable, ...]
    period: Tuple[Hashable, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("lasso period must be non-empty")

    def __len__(self) -> int:
        return len(self.prefix) + len(self.period)

    def letter(self, i: int) -> Hashable:
        """Letter at position ``i`` of the infinite word."""
        n = len(self.prefix)
        if i < n:
            return self.prefix[i]
        return self.period[(i - n) % len(self.period)]

    def unroll(self, n: int) -> Tuple[Hashable, ...]:
        return tuple(self.letter(i) for i in range(n))

    def prepend(self, word: Sequence[Hashable]) -> "LassoWord":
        return LassoWord(tuple(word) + self.prefix, self.period)

    def letters(self) -> set:
        return set(self.prefix) | set(self.period)

    def __str__(self) -> str:
        def show(a):
            if isinstance(a, frozenset):
                return "{" + ",".join(sorted(a)) + "}"
            return str(a)

        u = " ".join(show(a) for a in self.prefix)
        v = " ".join(show(a) for a in self.period)
        return f"{u} ({v})^w" if u else f"({v})^w"


def enumerate_lassos(alphabet: Sequence[Hashable], max_prefix: int,
                     max_period: int) -> Iterator[LassoWord]:
    """Every lasso with ``|u| <= max_prefix`` and ``1 <= |v| <= max_period``.
    Equal omega-words with different presentations are all produced."""
    for ulen in range(max_prefix + 1):
        for u in itertools.product(alphabet, repeat=ulen):
            for vlen in range(1, max_period + 1):
                for v in itertools.product(alphabet, repeat=vlen):
                    yield LassoWord(u, v)


def count_lassos(n_letters: int, max_prefix: int, max_period: int) -> int:
    nu = sum(n_letters ** k for k in range(max_prefix + 1))
    nv = sum(n_letters ** k for k in range(1, max_period + 1))
    return nu * nv
