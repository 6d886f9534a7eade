"""Reeb space of a simplicial map as a graded cell poset, plus a level-set
sweep that recomputes Reeb graphs independently when the target is 1-dimensional.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from networkx.utils import UnionFind

from .algebra import AbelianGroup, CoefficientModule
from .complex import (PreconditionError, Simplex, facets, flag_sign, homology,
                      simplex_key)
from .maps import SimplicialMap, require_valid
from .poset import CellPoset


@dataclass(frozen=True)
class ReebCell:
    target: Simplex
    component: int
    pieces: tuple[Simplex, ...]
    boundary: bool = False

    @property
    def dim(self) -> int:
        return len(self.target) - 1


@dataclass(frozen=True)
class ReebComplex:
    map: SimplicialMap
    cells: tuple[ReebCell, ...]
    poset: CellPoset
    components: Mapping[Simplex, Mapping[Simplex, int]]  # target simplex -> piece -> component
    warnings: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def dim(self) -> int:
        return self.poset.dimension

    @cached_property
    def cell_index(self) -> dict[tuple[Simplex, int], int]:
        return {(c.target, c.component): i for i, c in enumerate(self.cells)}

    def cell_of(self, sigma: Simplex, phi: Simplex) -> int:
        return self.cell_index[(sigma, self.components[sigma][phi])]

    @property
    def order_complex(self):
        return self.poset.order_complex

    @property
    def top_cells(self) -> list[int]:
        return self.poset.top_cells

    @property
    def walls(self) -> list[int]:
        return self.poset.walls

    @cached_property
    def pushforward(self) -> dict[int, tuple[tuple[tuple[int, ...], int], ...]]:
        """Order-complex top simplices refining each top cell, with the sign of
        the flag relative to the sorted orientation of the target simplex."""
        out = {}
        for c in self.top_cells:
            out[c] = tuple((ch, flag_sign([self.cells[x].target for x in ch]))
                           for ch in self.poset.chains_ending(c))
        return out


def _components(pieces: list[Simplex]) -> list[list[Simplex]]:
    pset = set(pieces)
    uf = UnionFind(pieces)
    for phi in pieces:
        for _, face in facets(phi):
            if face in pset:
                uf.union(phi, face)
    groups = [sorted(g, key=simplex_key) for g in uf.to_sets()]
    return sorted(groups, key=lambda g: simplex_key(g[0]))


def build_reeb(f: SimplicialMap) -> ReebComplex:
    """Cells are connected components of the preimages of open target simplices."""
    require_valid(f)
    f.source.check_pseudomanifold(closed=True)
    pieces: dict[Simplex, list[Simplex]] = defaultdict(list)
    for phi, img in f.images.items():
        for k in range(1, len(img) + 1):
            for sigma in itertools.combinations(img, k):
                pieces[sigma].append(phi)
    components: dict[Simplex, dict[Simplex, int]] = {}
    raw_cells = []
    for sigma, plist in pieces.items():
        groups = _components(plist)
        components[sigma] = {phi: i for i, g in enumerate(groups) for phi in g}
        raw_cells += [(sigma, i, tuple(g)) for i, g in enumerate(groups)]
    raw_cells.sort(key=lambda c: (len(c[0]), c[0], simplex_key(c[2][0])))
    index = {(s, i): j for j, (s, i, _) in enumerate(raw_cells)}

    relation = set()
    for phi, img in f.images.items():
        faces = [sg for k in range(1, len(img) + 1) for sg in itertools.combinations(img, k)]
        ids = {sg: index[(sg, components[sg][phi])] for sg in faces}
        for sigma in faces:
            for tau in faces:
                if len(tau) < len(sigma) and set(tau) <= set(sigma):
                    relation.add((ids[tau], ids[sigma]))
    dims = tuple(len(s) - 1 for s, _, _ in raw_cells)
    poset = CellPoset(dims, frozenset(relation), f.target.dim)

    warnings = []
    for j, (sigma, i, _) in enumerate(raw_cells):
        per_face = defaultdict(set)
        for lo in poset.below[j]:
            per_face[raw_cells[lo][0]].add(lo)
        expected = 2 ** len(sigma) - 2
        if len(per_face) != expected or any(len(v) != 1 for v in per_face.values()):
            warnings.append(f"cell {j} over {sigma}: faces are not cone-like")
    boundary = {w for w in poset.walls if len(poset.top_cofaces(w)) < 2}
    cells = tuple(ReebCell(s, i, p, j in boundary) for j, (s, i, p) in enumerate(raw_cells))
    return ReebComplex(f, cells, poset, components, tuple(warnings))


def reeb_homology(W: ReebComplex, k: int, A: CoefficientModule | None = None) -> AbelianGroup:
    return homology(W.order_complex, k, A)


@dataclass(frozen=True)
class ReebGraph:
    nodes: tuple[tuple[int, frozenset[int]], ...]
    arcs: tuple[tuple[Simplex, frozenset[Simplex]], ...]
    incidence: frozenset[tuple[int, int]]  # (arc, node)

    @property
    def betti(self) -> tuple[int, int]:
        uf = UnionFind(range(len(self.nodes)))
        ends = defaultdict(list)
        for a, v in self.incidence:
            ends[a].append(v)
        for vs in ends.values():
            uf.union(*vs)
        b0 = len(list(uf.to_sets())) if self.nodes else 0
        return b0, len(self.arcs) - len(self.nodes) + b0


def _sweep_order(target) -> list[int]:
    deg = defaultdict(int)
    nbrs = defaultdict(list)
    for a, b in target[1]:
        deg[a] += 1
        deg[b] += 1
        nbrs[a].append(b)
        nbrs[b].append(a)
    if any(d > 2 for d in deg.values()):
        raise PreconditionError("sweep needs a path or circle target")
    verts = target.vertices
    ends = [v for v in verts if deg[v] < 2]
    start = ends[0] if ends else verts[0]
    order, cur = [start], start
    while True:
        nxt = [w for w in sorted(nbrs[cur]) if w not in order]
        if not nxt:
            break
        cur = nxt[0]
        order.append(cur)
    if len(order) != len(verts):
        raise PreconditionError("sweep needs a connected 1-dimensional target")
    return order


def sweep_oracle(f: SimplicialMap) -> ReebGraph:
    """Reeb graph by sweeping target vertices: level sets are unions of source
    vertices joined by flat edges; open-edge fibers are crossing edges joined
    through triangles."""
    if f.target.dim != 1:
        raise PreconditionError(f"sweep needs a 1-dimensional target, got {f.target.dim}")
    order = _sweep_order(f.target)
    pos = {v: i for i, v in enumerate(order)}
    level = defaultdict(list)
    for v in f.source.vertices:
        level[f(v)].append(v)
    flat = defaultdict(list)
    crossing = defaultdict(list)
    for u, v in f.source[1]:
        a, b = f(u), f(v)
        if a == b:
            flat[a].append((u, v))
        else:
            crossing[tuple(sorted((a, b)))].append((u, v))
    tri_links = defaultdict(list)
    for tri in f.source[2]:
        img = f.image(tri)
        if len(img) == 2:
            es = [e for e in itertools.combinations(tri, 2) if f(e[0]) != f(e[1])]
            tri_links[img].append(es)

    nodes: list[tuple[int, frozenset[int]]] = []
    node_of: dict[int, int] = {}
    for a in order:
        uf = UnionFind(level[a])
        for u, v in flat[a]:
            uf.union(u, v)
        for g in sorted((sorted(g) for g in uf.to_sets()), key=lambda g: g[0]):
            for v in g:
                node_of[v] = len(nodes)
            nodes.append((a, frozenset(g)))
    edges = sorted(f.target[1], key=lambda e: sorted((pos[e[0]], pos[e[1]])))
    arcs: list[tuple[Simplex, frozenset[Simplex]]] = []
    incidence = set()
    for e in edges:
        uf = UnionFind(crossing[e])
        for pair in tri_links[e]:
            uf.union(*pair)
        for g in sorted((sorted(g) for g in uf.to_sets()), key=lambda g: g[0]):
            arc = len(arcs)
            arcs.append((e, frozenset(g)))
            for u, v in g:
                incidence.add((arc, node_of[u]))
                incidence.add((arc, node_of[v]))
    return ReebGraph(tuple(nodes), tuple(arcs), frozenset(incidence))


def compare_with_sweep(W: ReebComplex, G: ReebGraph) -> bool:
    """Graph isomorphism check with components matched by their source labels."""
    if W.n != 1:
        raise PreconditionError("sweep comparison needs a 1-dimensional target")
    key = {}
    for j, cell in enumerate(W.cells):
        if cell.dim == 0:
            key[j] = ("node", cell.target[0], frozenset(p[0] for p in cell.pieces if len(p) == 1))
        else:
            key[j] = ("arc", cell.target,
                      frozenset(p for p in cell.pieces if len(p) == 2 and W.map.image(p) == cell.target))
    gkey = {("node", a, s): i for i, (a, s) in enumerate(G.nodes)}
    akey = {("arc", e, s): i for i, (e, s) in enumerate(G.arcs)}
    if len(gkey) + len(akey) != len(W.cells):
        return False
    w_inc = set()
    for lo, hi in W.poset.relation:
        if key[hi] not in akey or key[lo] not in gkey:
            return False
        w_inc.add((akey[key[hi]], gkey[key[lo]]))
    return w_inc == set(G.incidence)
