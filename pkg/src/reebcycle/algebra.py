"""Exact integer linear algebra and finitely generated coefficient modules.

Everything here works over Python's arbitrary-precision ``int``.  Modules are
presented as ``Z^s / L`` where ``L`` is spanned by relation columns; a module
over ``Z2`` is treated as the Z-module with the extra relations ``2 e_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix stored row-major as a list of lists."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]], cols: int | None = None):
        self.data = [list(map(int, row)) for row in data]
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        for row in self.data:
            if len(row) != cols:
                raise ValueError("ragged matrix rows")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        m = cls.zeros(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                m.data[i][j] = int(v)
        return m

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.data, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(col) for col in zip(*self.data)] if self.rows else
                         [[] for _ in range(self.cols)], self.rows)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            ot = other.transpose().data
            return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                              for row in self.data], other.cols)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(row, vec)) for row in self.data]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __repr__(self):
        return f"IntMatrix({self.data!r})"

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, row in enumerate(self.data)
                   for j, v in enumerate(row) if i != j)

    def diagonal(self) -> list[int]:
        return [self.data[i][i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [row[:] for row in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` and U, V unimodular.

    ``D`` is diagonal with nonnegative entries ``d1 | d2 | ...``.
    """
    rows, cols = m.rows, m.cols
    a = [row[:] for row in m.data]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(cols):
                ra[k] += q * rs[k]
            ua, us = u[dst], u[src]
            for k in range(rows):
                ua[k] += q * us[k]

    def add_col(dst, src, q):  # col dst += q * col src
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            for i in range(t + 1, rows):
                add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, cols):
                add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(u, rows), IntMatrix(a, cols), IntMatrix(v, cols)


def _diagonal_factors(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a small dense matrix (no transforms)."""
    if not rows or not rows[0]:
        return []
    _, d, _ = smith_normal_form(IntMatrix(rows))
    return [x for x in d.diagonal() if x]


def invariant_factors(columns: Iterable[dict[int, int]], nrows: int) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given by columns.

    Unit pivots are eliminated sparsely first; whatever survives goes through
    the dense Smith form.  Boundary matrices are almost entirely unit pivots.
    """
    cols: dict[int, dict[int, int]] = {}
    row_index: dict[int, set[int]] = {}
    for j, col in enumerate(columns):
        col = {r: v for r, v in col.items() if v}
        if not col:
            continue
        cols[j] = col
        for r in col:
            if not 0 <= r < nrows:
                raise ValueError(f"row index {r} out of range")
            row_index.setdefault(r, set()).add(j)
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda c: len(cols[c])):
            col = cols.get(c)
            if col is None:
                continue
            pivots = [r for r, x in col.items() if x == 1 or x == -1]
            if not pivots:
                continue
            r = min(pivots, key=lambda r: len(row_index[r]))
            p = col[r]
            for j in list(row_index[r]):
                if j == c:
                    continue
                other = cols[j]
                q = other[r] * p
                for rr, x in col.items():
                    y = other.get(rr, 0) - q * x
                    if y:
                        if rr not in other:
                            row_index[rr].add(j)
                        other[rr] = y
                    elif rr in other:
                        del other[rr]
                        row_index[rr].discard(j)
                if not other:
                    del cols[j]
            for rr in col:
                row_index[rr].discard(c)
            del cols[c]
            units += 1
            progress = True
    if not cols:
        return [1] * units
    live_rows = sorted({r for col in cols.values() for r in col})
    pos = {r: i for i, r in enumerate(live_rows)}
    dense = [[0] * len(cols) for _ in live_rows]
    for j, col in enumerate(cols.values()):
        for r, x in col.items():
            dense[pos[r]][j] = x
    return [1] * units + _diagonal_factors(dense)


def in_image(m: IntMatrix, v: Sequence[int]) -> tuple[bool, list[int] | None]:
    """Decide whether ``v`` lies in the integer column span of ``m``.

    Returns ``(True, w)`` with ``m @ w == v`` or ``(False, None)``.
    """
    if len(v) != m.rows:
        raise ValueError(f"vector length {len(v)} != row count {m.rows}")
    u, d, vmat = smith_normal_form(m)
    y = u @ list(v)
    z = [0] * m.cols
    for i, yi in enumerate(y):
        di = d.data[i][i] if i < m.cols else 0
        if di == 0:
            if yi:
                return False, None
        elif yi % di:
            return False, None
        else:
            z[i] = yi // di
    return True, vmat @ z


def hermite_rows(vectors: Iterable[Sequence[int]], width: int) -> list[list[int]]:
    """Row-style Hermite normal form basis of the lattice spanned by ``vectors``.

    Pivots strictly increase, are positive, and entries above a pivot are
    reduced into ``[0, pivot)``.
    """
    m = [list(vec) for vec in vectors if any(vec)]
    r = 0
    for col in range(width):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][col]]
            if not nz:
                break
            i = min(nz, key=lambda i: abs(m[i][col]))
            m[r], m[i] = m[i], m[r]
            piv = m[r]
            clean = True
            for j in range(r + 1, len(m)):
                if m[j][col]:
                    q = m[j][col] // piv[col]
                    m[j] = [x - q * y for x, y in zip(m[j], piv)]
                    if m[j][col]:
                        clean = False
            if clean:
                break
        if r < len(m) and m[r][col]:
            if m[r][col] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][col] // m[r][col]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
    return [row for row in m[:r] if any(row)]


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group ``Z^free_rank + sum Z/t``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    @classmethod
    def from_factors(cls, free_rank: int, factors: Iterable[int]) -> "AbelianGroup":
        return cls(free_rank, tuple(sorted(f for f in factors if f > 1)))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


RINGS = ("Z", "Z2")


@dataclass(frozen=True)
class CoefficientModule:
    """``Z^rank / <relation columns>`` over the integers or ``Z/2``."""

    ring: str = "Z"
    rank: int = 1
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.ring not in RINGS:
            raise ValueError(f"unsupported base ring {self.ring!r}")
        if self.rank < 0:
            raise ValueError("negative rank")
        rels = tuple(tuple(int(x) for x in col) for col in self.relations)
        for col in rels:
            if len(col) != self.rank:
                raise ValueError(f"relation {col} does not have length {self.rank}")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def integers(cls, rank: int = 1) -> "CoefficientModule":
        return cls("Z", rank)

    @classmethod
    def mod2(cls, rank: int = 1) -> "CoefficientModule":
        return cls("Z2", rank)

    @cached_property
    def lattice_basis(self) -> tuple[tuple[int, ...], ...]:
        gens = list(self.relations)
        if self.ring == "Z2":
            gens += [tuple(2 * int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        return tuple(tuple(row) for row in hermite_rows(gens, self.rank))

    @cached_property
    def structure(self) -> AbelianGroup:
        basis = self.lattice_basis
        if not basis:
            return AbelianGroup(self.rank)
        factors = _diagonal_factors([list(row) for row in basis])
        return AbelianGroup.from_factors(self.rank - len(factors), factors)

    @property
    def all_two_torsion(self) -> bool:
        s = self.structure
        return s.free_rank == 0 and all(t == 2 for t in s.torsion)

    @property
    def is_zero(self) -> bool:
        return self.structure.is_zero

    def order(self) -> int | None:
        s = self.structure
        return None if s.free_rank else math.prod(s.torsion)

    def canonical(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        e = [int(x) for x in coords]
        for row in self.lattice_basis:
            p = next(i for i, x in enumerate(row) if x)
            q = e[p] // row[p]
            if q:
                e = [x - q * y for x, y in zip(e, row)]
        return tuple(e)

    def element(self, coords: Sequence[int] | int) -> "ModuleElement":
        if isinstance(coords, int):
            coords = (coords,)
        return ModuleElement(self, self.canonical(coords))

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, (0,) * self.rank)

    def generators(self) -> list["ModuleElement"]:
        return [self.element([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def elements(self) -> list["ModuleElement"]:
        """All elements of a finite module (used for exhaustive checks)."""
        if self.order() is None:
            raise ValueError("module is infinite")
        out = {self.zero()}
        frontier = list(out)
        gens = self.generators()
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x + g
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(out, key=lambda e: e.coords)

    def presentation_text(self) -> str:
        lines = [f"module {self.ring} rank={self.rank}"]
        lines += ["rel " + " ".join(map(str, col)) for col in self.relations]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return str(self.structure)


@dataclass(frozen=True)
class ModuleElement:
    """An element of a CoefficientModule in canonical coordinates."""

    module: CoefficientModule = field(repr=False)
    coords: tuple[int, ...]

    def _check(self, other):
        if not isinstance(other, ModuleElement) or other.module != self.module:
            raise TypeError("elements of different modules")

    def __add__(self, other):
        self._check(other)
        return self.module.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return self.module.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return self.module.element([-a for a in self.coords])

    def __mul__(self, k: int):
        return self.module.element([k * a for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return " ".join(map(str, self.coords))


def canonical(coords: Sequence[int], module: CoefficientModule) -> ModuleElement:
    return module.element(coords)


@dataclass(frozen=True)
class QuotientLabelModule:
    """Free module on named fiber types modulo user-declared relations.

    Relations are mappings from generator name to coefficient.
    """

    generators: tuple[str, ...]
    relations: tuple[tuple[tuple[str, int], ...], ...] = ()
    ring: str = "Z"

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a label module needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        known = set(self.generators)
        for rel in self.relations:
            for name, _ in rel:
                if name not in known:
                    raise ValueError(f"relation references unknown generator {name!r}")

    def relation_columns(self) -> list[tuple[int, ...]]:
        idx = {g: i for i, g in enumerate(self.generators)}
        cols = []
        for rel in self.relations:
            col = [0] * len(self.generators)
            for name, c in rel:
                col[idx[name]] += c
            cols.append(tuple(col))
        return cols

    def coords(self, expr: dict[str, int]) -> list[int]:
        idx = {g: i for i, g in enumerate(self.generators)}
        out = [0] * len(self.generators)
        for name, c in expr.items():
            if name not in idx:
                raise ValueError(f"unknown generator {name!r}")
            out[idx[name]] += c
        return out


def quotient_module(q: QuotientLabelModule) -> CoefficientModule:
    return CoefficientModule(q.ring, len(q.generators), tuple(q.relation_columns()))
