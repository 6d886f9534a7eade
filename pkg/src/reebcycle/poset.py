"""Graded cell posets and their order complexes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .complex import PreconditionError, SimplicialComplex, build_complex


@dataclass(frozen=True)
class CellPoset:
    """Cells ``0..N-1`` with nondecreasing dimensions and a strict order.

    ``relation`` holds pairs ``(lower, upper)``; it is expected to be
    transitively closed (see :func:`transitive_closure`).
    """

    dims: tuple[int, ...]
    relation: frozenset[tuple[int, int]]
    n: int

    def __post_init__(self):
        if any(a > b for a, b in zip(self.dims, self.dims[1:])):
            raise PreconditionError("cells must be listed by nondecreasing dimension")
        for lo, hi in self.relation:
            if self.dims[lo] >= self.dims[hi]:
                raise PreconditionError(f"face relation {lo} < {hi} is not graded")

    def __len__(self):
        return len(self.dims)

    @cached_property
    def below(self) -> tuple[frozenset[int], ...]:
        out = [set() for _ in self.dims]
        for lo, hi in self.relation:
            out[hi].add(lo)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def above(self) -> tuple[frozenset[int], ...]:
        out = [set() for _ in self.dims]
        for lo, hi in self.relation:
            out[lo].add(hi)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def covers(self) -> tuple[tuple[int, ...], ...]:
        """Cells directly below each cell."""
        out = []
        for c, low in enumerate(self.below):
            out.append(tuple(sorted(d for d in low
                                    if not any(d in self.below[e] for e in low))))
        return tuple(out)

    @cached_property
    def _chains(self) -> dict[int, tuple[tuple[int, ...], ...]]:
        memo: dict[int, tuple[tuple[int, ...], ...]] = {}
        for c in range(len(self.dims)):  # dims nondecreasing: covers come first
            down = self.covers[c]
            if not down:
                memo[c] = ((c,),)
            else:
                memo[c] = tuple(ch + (c,) for d in down for ch in memo[d])
        return memo

    def chains_ending(self, c: int) -> tuple[tuple[int, ...], ...]:
        """Maximal chains of the closed cell below ``c``, ending at ``c``."""
        return self._chains[c]

    @cached_property
    def order_complex(self) -> SimplicialComplex:
        maximal = [ch for c in range(len(self.dims)) if not self.above[c]
                   for ch in self._chains[c]]
        return build_complex(maximal, len(self.dims))

    @property
    def top_cells(self) -> list[int]:
        return [c for c, d in enumerate(self.dims) if d == self.n]

    @property
    def walls(self) -> list[int]:
        return [c for c, d in enumerate(self.dims) if d == self.n - 1]

    def top_cofaces(self, c: int) -> list[int]:
        return sorted(x for x in self.above[c] if self.dims[x] == self.n)

    @property
    def dimension(self) -> int:
        return max(self.dims) if self.dims else -1

    def euler_characteristic(self) -> int:
        return sum((-1) ** d for d in self.dims)

    def is_transitive(self) -> bool:
        rel = self.relation
        return all((a, c) in rel for a, b in rel for c in self.above[b])


def transitive_closure(pairs: Iterable[tuple[int, int]], size: int) -> frozenset[tuple[int, int]]:
    up = [set() for _ in range(size)]
    for lo, hi in pairs:
        up[lo].add(hi)
    closed: list[set[int]] = [set() for _ in range(size)]
    for c in reversed(range(size)):
        stack = list(up[c])
        seen = closed[c]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(up[x])
    return frozenset((lo, hi) for lo in range(size) for hi in closed[lo])
