"""Wiki-index math.

A probe yields a mention table: (title, mentions) pairs for every page whose
bibliographic sections mention the author at least once. Ranked by descending
mentions, the table gives WH, the largest rank i whose count R_i still
satisfies R_i >= i, and the index itself:

    WI = WH * f(N)

where N is the table length and f is a growth function (square root by
default). WI is reported rounded half away from zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import InvalidFunction

GROWTH_KINDS = ("sqrt", "identity", "log1p")


@dataclass(frozen=True)
class RefSequence:
    """Mention counts ranked descending, ties broken by title ascending."""

    titles: list[str]
    counts: list[int]

    @property
    def n(self) -> int:
        return len(self.counts)

    def pairs(self) -> list[tuple[str, int]]:
        return list(zip(self.titles, self.counts))


@dataclass(frozen=True)
class GrowthFunction:
    """Growth term f(N). Built-in kinds or a custom non-decreasing callable."""

    kind: str
    descriptor: str
    fn: Callable[[int], float] | None = field(default=None, compare=False)

    @classmethod
    def sqrt(cls) -> "GrowthFunction":
        return cls("sqrt", "sqrt")

    @classmethod
    def identity(cls) -> "GrowthFunction":
        return cls("identity", "identity")

    @classmethod
    def log1p(cls) -> "GrowthFunction":
        return cls("log1p", "log1p")

    @classmethod
    def custom(cls, fn: Callable[[int], float], descriptor: str = "custom") -> "GrowthFunction":
        return cls("custom", descriptor, fn)

    @classmethod
    def from_name(cls, name: str) -> "GrowthFunction":
        if name not in GROWTH_KINDS:
            raise InvalidFunction(f"unknown growth function {name!r}, expected one of {GROWTH_KINDS}")
        return cls(name, name)

    def value(self, n: int) -> float:
        if n < 0:
            raise ValueError("n must be non-negative")
        if self.kind == "sqrt":
            return math.sqrt(n)
        if self.kind == "identity":
            return float(n)
        if self.kind == "log1p":
            return math.log1p(n)
        if self.kind == "custom":
            if self.fn is None:
                raise InvalidFunction("custom growth function has no callable")
            return float(self.fn(n))
        raise InvalidFunction(f"unknown growth kind {self.kind!r}")


@dataclass(frozen=True)
class WikiIndexResult:
    n: int
    wh: int
    wi_raw: float
    wi_rounded: int
    growth: str


def build_ref_sequence(pairs: Iterable[tuple[str, int]]) -> RefSequence:
    """Drop zero-mention pairs and rank by (count desc, title asc)."""
    kept = []
    for title, count in pairs:
        if count < 0:
            raise ValueError(f"negative mention count for {title!r}")
        if count >= 1:
            kept.append((title, count))
    kept.sort(key=lambda pair: (-pair[1], pair[0]))
    return RefSequence([t for t, _ in kept], [c for _, c in kept])


def compute_wh(seq: RefSequence) -> int:
    """Largest rank i (1-based) with counts[i-1] >= i; 0 for an empty table."""
    wh = 0
    for i, count in enumerate(seq.counts, start=1):
        if count >= i:
            wh = i
        else:
            break  # counts are non-increasing, no later rank can qualify
    return wh


def _round_half_away(x: float) -> int:
    if x >= 0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


def _validate_custom(growth: GrowthFunction, n: int) -> None:
    previous = None
    for i in range(0, n + 1):
        value = growth.value(i)
        if value < 0:
            raise InvalidFunction(f"growth function {growth.descriptor!r} is negative at {i}")
        if previous is not None and value < previous:
            raise InvalidFunction(f"growth function {growth.descriptor!r} decreases at {i}")
        previous = value


def compute_wi(wh: int, n: int, growth: GrowthFunction) -> WikiIndexResult:
    """Combine WH and N into the index. Requires 0 <= wh <= n."""
    if not 0 <= wh <= n:
        raise ValueError(f"wh must satisfy 0 <= wh <= n, got wh={wh} n={n}")
    if growth.kind == "custom":
        _validate_custom(growth, n)
    raw = wh * growth.value(n)
    return WikiIndexResult(n=n, wh=wh, wi_raw=raw, wi_rounded=_round_half_away(raw), growth=growth.descriptor)


def wiki_index(pairs: Iterable[tuple[str, int]], growth: GrowthFunction | None = None) -> WikiIndexResult:
    """Mention table in, WikiIndexResult out."""
    growth = growth or GrowthFunction.sqrt()
    seq = build_ref_sequence(pairs)
    return compute_wi(compute_wh(seq), seq.n, growth)
