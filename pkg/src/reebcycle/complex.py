"""Abstract simplicial complexes, orientation, subdivision and homology."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .algebra import (AbelianGroup, CoefficientModule, IntMatrix, ModuleElement,
                      invariant_factors)
from .errors import PreconditionError

Simplex = tuple[int, ...]


class NotPseudomanifold(PreconditionError):
    def __init__(self, face: Simplex, count: int):
        super().__init__(f"face {face} lies in {count} top simplices")
        self.face = face
        self.count = count


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


def facets(s: Simplex) -> list[tuple[int, Simplex]]:
    """``(i, face)`` pairs where face drops vertex ``i``; boundary sign is ``(-1)**i``."""
    return [(i, s[:i] + s[i + 1:]) for i in range(len(s))]


def simplex_key(s: Simplex) -> tuple:
    return (len(s), s)


@dataclass(frozen=True)
class SimplicialComplex:
    num_vertices: int
    simplices: tuple[tuple[Simplex, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def __getitem__(self, k: int) -> tuple[Simplex, ...]:
        return self.simplices[k] if 0 <= k <= self.dim else ()

    @cached_property
    def _index(self) -> dict[Simplex, int]:
        return {s: i for layer in self.simplices for i, s in enumerate(layer)}

    def index(self, s: Simplex) -> int:
        return self._index[s]

    def __contains__(self, s) -> bool:
        return tuple(s) in self._index

    def all_simplices(self) -> list[Simplex]:
        return [s for layer in self.simplices for s in layer]

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self[0]]

    def counts(self) -> list[int]:
        return [len(layer) for layer in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    @cached_property
    def cofaces(self) -> dict[Simplex, list[Simplex]]:
        """Codimension-one cofaces of every simplex."""
        out: dict[Simplex, list[Simplex]] = {s: [] for s in self.all_simplices()}
        for layer in self.simplices[1:]:
            for s in layer:
                for _, f in facets(s):
                    out[f].append(s)
        return out

    @cached_property
    def maximal_simplices(self) -> tuple[Simplex, ...]:
        return tuple(s for s in self.all_simplices() if not self.cofaces[s])

    def is_pure(self) -> bool:
        return all(len(s) == self.dim + 1 for s in self.maximal_simplices)

    def boundary_columns(self, k: int) -> list[dict[int, int]]:
        if not 1 <= k <= self.dim:
            return []
        idx = self._index
        return [{idx[f]: (-1) ** i for i, f in facets(s)} for s in self[k]]

    def boundary_matrix(self, k: int) -> IntMatrix:
        if not 1 <= k <= self.dim:
            raise PreconditionError(f"boundary degree {k} outside 1..{self.dim}")
        return IntMatrix.from_columns(
            [[col.get(i, 0) for i in range(len(self[k - 1]))] for col in self.boundary_columns(k)],
            len(self[k - 1])) if self[k] else IntMatrix.zeros(len(self[k - 1]), 0)

    def pseudomanifold_faces(self) -> dict[Simplex, int]:
        """Number of top simplices containing each codimension-one face."""
        d = self.dim
        return {f: sum(1 for c in self.cofaces[f] if len(c) == d + 1) for f in self[d - 1]}

    def check_pseudomanifold(self, closed: bool = False) -> None:
        for f, c in self.pseudomanifold_faces().items():
            if c > 2 or (closed and c != 2):
                raise NotPseudomanifold(f, c)

    def is_closed_pseudomanifold(self) -> bool:
        try:
            self.check_pseudomanifold(closed=True)
        except NotPseudomanifold:
            return False
        return self.is_pure()

    def to_text(self) -> str:
        lines = [f"complex dim={self.dim} vertices={self.num_vertices}"]
        lines += ["simplex " + " ".join(map(str, s)) for s in self.maximal_simplices]
        return "\n".join(lines) + "\n"


def build_complex(maximal: Iterable[Iterable[int]], num_vertices: int | None = None) -> SimplicialComplex:
    """Closure of a list of simplices."""
    tops = {tuple(sorted(set(map(int, s)))) for s in maximal}
    tops.discard(())
    if not tops:
        raise PreconditionError("empty complex")
    if any(v < 0 for s in tops for v in s):
        raise PreconditionError("negative vertex index")
    dim = max(len(s) for s in tops) - 1
    layers: list[set[Simplex]] = [set() for _ in range(dim + 1)]
    for s in tops:
        for k in range(1, len(s) + 1):
            layers[k - 1].update(itertools.combinations(s, k))
    nv = max(v for s in tops for v in s) + 1
    if num_vertices is not None:
        if num_vertices < nv:
            raise PreconditionError(f"vertex index {nv - 1} exceeds declared count {num_vertices}")
        nv = num_vertices
    return SimplicialComplex(nv, tuple(tuple(sorted(layer)) for layer in layers))


def chain_complex_dims(K: SimplicialComplex) -> list[int]:
    return K.counts()


def _cone_boundary(K: SimplicialComplex, A: CoefficientModule, k: int) -> tuple[list[dict[int, int]], int]:
    """Boundary ``D_k -> D_{k-1}`` of the integer cone complex computing ``H(K; A)``.

    ``D_k = C_k (x) Z^s  +  C_{k-1} (x) Z^r`` where the relation lattice of A has
    basis ``B`` (s x r) and ``d(x, y) = (dx + B y, -dy)``.
    """
    s = A.rank
    basis = A.lattice_basis
    r = len(basis)

    def size(j):
        return len(K[j]) * s + len(K[j - 1]) * r if j >= 0 else 0

    rows = size(k - 1)
    if k < 0:
        return [], 0
    off_lo = len(K[k - 1]) * s  # start of y-part inside D_{k-1}
    cols: list[dict[int, int]] = []
    bk = K.boundary_columns(k) if k >= 1 else [{} for _ in K[k]]
    for bcol in bk:
        for a in range(s):
            cols.append({f * s + a: sgn for f, sgn in bcol.items()})
    bk1 = K.boundary_columns(k - 1) if k - 1 >= 1 else [{} for _ in K[k - 1]]
    for fidx, bcol in enumerate(bk1):
        for b in range(r):
            col: dict[int, int] = {}
            for a in range(s):
                if basis[b][a]:
                    col[fidx * s + a] = basis[b][a]
            for g, sgn in bcol.items():
                col[off_lo + g * r + b] = -sgn
            cols.append(col)
    return cols, rows


def homology(K: SimplicialComplex, k: int, A: CoefficientModule | None = None) -> AbelianGroup:
    """``H_k(K; A)`` as an abelian group, via invariant factors of the cone complex."""
    if A is None:
        A = CoefficientModule.integers()
    if k < 0:
        raise PreconditionError(f"negative degree {k}")
    if A.rank == 0 or k > K.dim:
        return AbelianGroup(0)
    dk, rows_k = _cone_boundary(K, A, k)
    dk1, _ = _cone_boundary(K, A, k + 1)
    size_k = len(dk)
    rank_k = len(invariant_factors(dk, rows_k))
    f1 = invariant_factors(dk1, size_k)
    free = size_k - rank_k - len(f1)
    return AbelianGroup.from_factors(free, f1)


def homology_all(K: SimplicialComplex, A: CoefficientModule | None = None) -> list[AbelianGroup]:
    return [homology(K, k, A) for k in range(K.dim + 1)]


@dataclass(frozen=True)
class Orientation:
    """Sign of each top simplex relative to its sorted vertex order."""

    signs: Mapping[Simplex, int]

    def __getitem__(self, s: Simplex) -> int:
        return self.signs[s]

    def flipped(self) -> "Orientation":
        return Orientation({s: -v for s, v in self.signs.items()})


@dataclass(frozen=True)
class NonOrientable:
    """Certificate: a closed walk of adjacent top simplices with a sign clash."""

    cycle: tuple[Simplex, ...]


def induced_sign(top: Simplex, face: Simplex) -> int:
    i = next(i for i, (a, b) in enumerate(itertools.zip_longest(top, face)) if a != b)
    return (-1) ** i


def orient_coherently(K: SimplicialComplex) -> Orientation | NonOrientable:
    """Coherently orient a pseudomanifold, or certify that it cannot be done."""
    K.check_pseudomanifold()
    d = K.dim
    tops = K[d]
    if d == 0:
        return Orientation({s: 1 for s in tops})
    adj: dict[Simplex, list[tuple[Simplex, Simplex]]] = {s: [] for s in tops}
    for f in K[d - 1]:
        cs = [c for c in K.cofaces[f] if len(c) == d + 1]
        if len(cs) == 2:
            a, b = cs
            adj[a].append((b, f))
            adj[b].append((a, f))
    sign: dict[Simplex, int] = {}
    parent: dict[Simplex, Simplex | None] = {}
    for root in tops:
        if root in sign:
            continue
        sign[root] = 1
        parent[root] = None
        queue = [root]
        while queue:
            a = queue.pop(0)
            for b, f in adj[a]:
                want = -sign[a] * induced_sign(a, f) * induced_sign(b, f)
                if b not in sign:
                    sign[b] = want
                    parent[b] = a
                    queue.append(b)
                elif sign[b] != want:
                    return NonOrientable(_clash_cycle(parent, a, b))
    return Orientation(sign)


def _clash_cycle(parent, a, b) -> tuple[Simplex, ...]:
    def path(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out

    pa, pb = path(a), path(b)
    common = next(x for x in pa if x in set(pb))
    left = pa[:pa.index(common) + 1]
    right = pb[:pb.index(common)]
    return tuple(left + right[::-1])


def fundamental_chain(K: SimplicialComplex, orientation: Orientation) -> dict[Simplex, int]:
    return {s: orientation[s] for s in K[K.dim]}


def chain_boundary(K: SimplicialComplex, chain: Mapping[Simplex, int]) -> dict[Simplex, int]:
    out: dict[Simplex, int] = {}
    for s, c in chain.items():
        for i, f in facets(s):
            out[f] = out.get(f, 0) + (-1) ** i * c
    return {f: c for f, c in out.items() if c}


@dataclass(frozen=True)
class Subdivision:
    complex: SimplicialComplex
    carriers: tuple[Simplex, ...]  # new vertex -> original simplex

    @cached_property
    def vertex_of(self) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.carriers)}


def barycentric_subdivide(K: SimplicialComplex) -> Subdivision:
    """Barycentric subdivision; new vertices are numbered by (dim, lex) of carrier."""
    carriers = tuple(s for layer in K.simplices for s in layer)
    vid = {s: i for i, s in enumerate(carriers)}
    flags = []
    for top in K.maximal_simplices:
        for perm in itertools.permutations(top):
            flags.append([vid[tuple(sorted(perm[:j + 1]))] for j in range(len(perm))])
    return Subdivision(build_complex(flags, len(carriers)), carriers)


def flag_sign(flag: Sequence[Simplex]) -> int:
    """Orientation of the flag simplex ``b(s0) < ... < b(sk)`` relative to ``sk``."""
    order = [flag[0][0]] + [next(v for v in b if v not in a) for a, b in zip(flag, flag[1:])]
    return perm_sign(order)


def subdivided_orientation(sd: Subdivision, orientation: Orientation) -> Orientation:
    signs = {}
    for s in sd.complex[sd.complex.dim]:
        flag = [sd.carriers[v] for v in s]
        signs[s] = orientation[flag[-1]] * flag_sign(flag)
    return Orientation(signs)


def stellar_subdivide(K: SimplicialComplex, phi: Simplex) -> tuple[SimplicialComplex, int]:
    """Star ``phi`` at a new vertex; returns the new complex and the new vertex."""
    phi = tuple(phi)
    if phi not in K:
        raise PreconditionError(f"{phi} not in complex")
    v = K.num_vertices
    pset = set(phi)
    tops = []
    for m in K.maximal_simplices:
        if pset <= set(m):
            rest = [x for x in m if x not in pset]
            for _, f in facets(phi):
                tops.append(list(f) + rest + [v])
        else:
            tops.append(list(m))
    return build_complex(tops, v + 1), v


@dataclass(frozen=True)
class Chain:
    degree: int
    module: CoefficientModule
    coeffs: Mapping[Simplex, ModuleElement] = field(default_factory=dict)

    def boundary(self) -> "Chain":
        acc: dict[Simplex, ModuleElement] = {}
        for s, c in self.coeffs.items():
            for i, f in facets(s):
                term = c if i % 2 == 0 else -c
                acc[f] = acc[f] + term if f in acc else term
        return Chain(self.degree - 1, self.module, {f: c for f, c in acc.items() if c})

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())


@dataclass(frozen=True)
class Cochain:
    """Module-valued cochain on sorted simplices; reorienting by an odd
    permutation negates the value."""

    degree: int
    module: CoefficientModule
    values: Mapping[Simplex, ModuleElement] = field(default_factory=dict)

    def __call__(self, simplex: Sequence[int]) -> ModuleElement:
        s = tuple(sorted(simplex))
        if len(set(s)) != len(s):
            return self.module.zero()
        val = self.values.get(s)
        if val is None:
            return self.module.zero()
        return val if perm_sign(simplex) == 1 else -val

    def coboundary(self, K: SimplicialComplex) -> "Cochain":
        out = {}
        for s in K[self.degree + 1]:
            acc = self.module.zero()
            for i, f in facets(s):
                v = self.values.get(f)
                if v is not None:
                    acc = acc + v if i % 2 == 0 else acc - v
            if acc:
                out[s] = acc
        return Cochain(self.degree + 1, self.module, out)

    def is_cocycle(self, K: SimplicialComplex) -> bool:
        return not self.coboundary(K).values

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree or other.module != self.module:
            raise ValueError("incompatible cochains")
        out = dict(self.values)
        for s, v in other.values.items():
            out[s] = out[s] + v if s in out else v
        return Cochain(self.degree, self.module, {s: v for s, v in out.items() if v})

    def scaled(self, k: int) -> "Cochain":
        return Cochain(self.degree, self.module,
                       {s: v * k for s, v in self.values.items() if v * k})

    def evaluate(self, chain: Mapping[Simplex, int]) -> ModuleElement:
        acc = self.module.zero()
        for s, c in chain.items():
            acc = acc + self(s) * c
        return acc
