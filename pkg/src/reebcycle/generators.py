"""Deterministic fixture complexes, maps, cocycles and pseudo-quotient models."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .algebra import CoefficientModule
from .complex import (Cochain, PreconditionError, SimplicialComplex, build_complex)
from .maps import (SimplicialMap, compose, pullback_cochain, stellar_subdivide_map,
                   subdivide_map, subdivision_retraction)


def circle(k: int) -> SimplicialComplex:
    if k < 3:
        raise PreconditionError("circle needs at least 3 vertices")
    return build_complex([(i, (i + 1) % k) for i in range(k)])


def path(k: int) -> SimplicialComplex:
    if k < 2:
        raise PreconditionError("path needs at least 2 vertices")
    return build_complex([(i, i + 1) for i in range(k - 1)])


def sphere_octahedron() -> SimplicialComplex:
    """North pole 0, equator 1-2-3-4, south pole 5."""
    eq = [1, 2, 3, 4]
    tris = []
    for i in range(4):
        a, b = eq[i], eq[(i + 1) % 4]
        tris += [(0, a, b), (5, a, b)]
    return build_complex(tris)


RP2_TRIANGLES = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
                 (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5)]


def rp2_6() -> SimplicialComplex:
    return build_complex(RP2_TRIANGLES)


def sphere3() -> SimplicialComplex:
    """Suspension of the octahedron: a 3-sphere with poles 6 and 7."""
    tris = sphere_octahedron().maximal_simplices
    return build_complex([t + (6,) for t in tris] + [t + (7,) for t in tris])


def klein(a: int = 4, b: int = 4) -> SimplicialComplex:
    """Grid triangulation of the Klein bottle: row ``b`` glues to row 0 reflected."""
    if a < 4 or b < 3:
        raise PreconditionError("klein needs a >= 4, b >= 3")

    def vid(i, j):
        if j == b:
            i, j = (-i) % a, 0
        return (i % a) * b + j

    tris = []
    for i in range(a):
        for j in range(b):
            p, q, r, s = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris += [(p, q, s), (p, r, s)]
    return build_complex(tris)


@dataclass(frozen=True)
class Product:
    complex: SimplicialComplex
    first: SimplicialMap
    second: SimplicialMap


def _shuffles(p: int, q: int):
    for rights in itertools.combinations(range(p + q), p):
        i = j = 0
        pts = [(0, 0)]
        for step in range(p + q):
            if step in rights:
                i += 1
            else:
                j += 1
            pts.append((i, j))
        yield pts


def product(K: SimplicialComplex, L: SimplicialComplex) -> Product:
    """Staircase triangulation of ``K x L``; vertex ``(u, v)`` is ``u * |V(L)| + v``."""
    w = L.num_vertices
    tops = []
    for s in K.maximal_simplices:
        for t in L.maximal_simplices:
            for pts in _shuffles(len(s) - 1, len(t) - 1):
                tops.append([s[i] * w + t[j] for i, j in pts])
    P = build_complex(tops, K.num_vertices * w)
    verts = P.vertices
    first = SimplicialMap(P, K, {v: v // w for v in verts})
    second = SimplicialMap(P, L, {v: v % w for v in verts})
    return Product(P, first, second)


def torus(a: int = 3, b: int = 3) -> Product:
    return product(circle(a), circle(b))


def height(C: SimplicialComplex, levels: Sequence[int] | dict[int, int]) -> SimplicialMap:
    """Map to a path by vertex levels; adjacent vertices may differ by one level."""
    lv = dict(enumerate(levels)) if not isinstance(levels, dict) else dict(levels)
    if set(lv) != set(C.vertices):
        raise PreconditionError("levels must cover exactly the complex's vertices")
    for u, v in C[1]:
        if abs(lv[u] - lv[v]) > 1:
            raise PreconditionError(f"edge {(u, v)} jumps levels {lv[u]} -> {lv[v]}")
    lo, hi = min(lv.values()), max(lv.values())
    if lo < 0:
        raise PreconditionError("levels must be nonnegative")
    return SimplicialMap(C, path(max(hi + 1, 2)), lv)


def octahedron_height() -> SimplicialMap:
    return height(sphere_octahedron(), [2, 1, 1, 1, 1, 0])


def torus_height(a: int = 3) -> SimplicialMap:
    """Upright torus: single minimum and maximum, two saddle levels, loop Reeb graph."""
    T = torus(a, 6).complex
    g = {0: 1, 1: 1, 2: 2, 3: 2, 4: 2, 5: 1}
    levels = {}
    for v in T.vertices:
        i, j = divmod(v, 6)
        levels[v] = g[j]
    levels[0 * 6 + 0] = 0
    levels[0 * 6 + 3] = 3
    return height(T, levels)


def two_bump_sphere() -> SimplicialMap:
    """Annulus capped by two cones; two maxima on the upper ring."""
    ann = product(circle(6), path(2)).complex  # vertex 2*i + j
    lo_apex, hi_apex = 12, 13
    tops = list(ann.maximal_simplices)
    for i in range(6):
        k = (i + 1) % 6
        tops += [(lo_apex, 2 * i, 2 * k), (hi_apex, 2 * i + 1, 2 * k + 1)]
    S = build_complex(tops)
    levels = {v: 1 for v in S.vertices}
    levels[lo_apex] = 0
    levels[2 * 0 + 1] = 2
    levels[2 * 3 + 1] = 2
    return height(S, levels)


def sphere3_height() -> SimplicialMap:
    S = sphere3()
    return height(S, {v: (0 if v == 6 else 2 if v == 7 else 1) for v in S.vertices})


def rp2xS1(k: int = 3) -> Product:
    return product(rp2_6(), circle(k))


def t3(a: int = 3, b: int = 3, c: int = 3) -> Product:
    return product(torus(a, b).complex, circle(c))


def circle_generator_cocycle(k: int, module: CoefficientModule | None = None) -> Cochain:
    """Generator of ``H^1`` of ``circle(k)``: +1 on the oriented edge ``k-1 -> 0``."""
    A = module or CoefficientModule.integers()
    return Cochain(1, A, {(0, k - 1): -A.generators()[0]})


def dual_cocycle_torus(a: int = 3, b: int = 3, module: CoefficientModule | None = None) -> Cochain:
    """Cocycle on ``torus(a, b)`` pairing to +-1 with the fibers of the first
    projection: signed indicator of edges crossing the meridian ``j = b-1 | 0``."""
    return pullback_cochain(torus(a, b).second, circle_generator_cocycle(b, module))


@dataclass
class Generated:
    name: str
    complex: SimplicialComplex | None = None
    map: SimplicialMap | None = None
    cocycle: Cochain | None = None
    pq: Any = None
    extras: dict = field(default_factory=dict)


def _ints(params, count, defaults):
    vals = list(defaults)
    for i, p in enumerate(params[:count]):
        try:
            vals[i] = int(p)
        except ValueError:
            raise PreconditionError(f"expected an integer parameter, got {p!r}") from None
    if len(params) > count:
        raise PreconditionError(f"too many parameters: {params}")
    return vals


COMPLEXES: dict[str, Callable[..., SimplicialComplex]] = {
    "circle": lambda k=3: circle(int(k)),
    "path": lambda k=2: path(int(k)),
    "sphere-octahedron": sphere_octahedron,
    "rp2-6": rp2_6,
    "klein": lambda a=4, b=4: klein(int(a), int(b)),
    "sphere3": sphere3,
    "torus": lambda a=3, b=3: torus(int(a), int(b)).complex,
}


def complex_by_name(desc: str) -> SimplicialComplex:
    """``name`` or ``name:p1:p2`` from the complex catalog."""
    name, *params = desc.split(":")
    if name not in COMPLEXES:
        raise PreconditionError(f"unknown complex {name!r}")
    return COMPLEXES[name](*params)


def generate(name: str, *params: str) -> Generated:
    params = list(params)
    if name in ("circle", "path", "sphere-octahedron", "rp2-6", "klein", "sphere3"):
        return Generated(name, complex=complex_by_name(":".join([name] + params)))
    if name == "torus":
        a, b = _ints(params, 2, (3, 3))
        if a < 3 or b < 3:
            raise PreconditionError("torus needs a, b >= 3")
        P = torus(a, b)
        return Generated(name, complex=P.complex, map=P.first, cocycle=dual_cocycle_torus(a, b))
    if name == "product":
        if len(params) != 2:
            raise PreconditionError("product needs two complex names")
        P = product(complex_by_name(params[0]), complex_by_name(params[1]))
        return Generated(name, complex=P.complex, map=P.second, extras={"first": P.first})
    if name == "height":
        if len(params) != 2:
            raise PreconditionError("height needs a complex name and a level list")
        C = complex_by_name(params[0])
        f = height(C, [int(x) for x in params[1].split(",")])
        return Generated(name, complex=C, map=f)
    if name == "octahedron-height":
        return Generated(name, map=octahedron_height())
    if name == "torus-height":
        (a,) = _ints(params, 1, (3,))
        return Generated(name, map=torus_height(a))
    if name == "two-bump-sphere":
        return Generated(name, map=two_bump_sphere())
    if name == "sphere3-height":
        return Generated(name, map=sphere3_height())
    if name == "rp2xS1":
        (k,) = _ints(params, 1, (3,))
        P = rp2xS1(k)
        return Generated(name, complex=P.complex, map=P.second)
    if name == "t3":
        a, b, c = _ints(params, 3, (3, 3, 3))
        P = t3(a, b, c)
        return Generated(name, complex=P.complex, map=P.second)
    if name == "dual-cocycle":
        if not params or params[0] != "torus":
            raise PreconditionError("usage: dual-cocycle torus a b")
        a, b = _ints(params[1:], 2, (3, 3))
        P = torus(a, b)
        return Generated(name, complex=P.complex, map=P.first, cocycle=dual_cocycle_torus(a, b))
    if name == "round-fold-s2xs2":
        from .pq import round_fold_s2xs2
        return Generated(name, pq=round_fold_s2xs2())
    if name == "special-generic-disc":
        from .pq import special_generic_disc
        return Generated(name, pq=special_generic_disc())
    raise PreconditionError(f"unknown generator {name!r}")


CATALOG = ("circle", "path", "sphere-octahedron", "rp2-6", "klein", "sphere3", "torus",
           "product", "height", "octahedron-height", "torus-height", "two-bump-sphere",
           "sphere3-height", "rp2xS1", "t3", "dual-cocycle", "round-fold-s2xs2",
           "special-generic-disc")


@dataclass(frozen=True)
class Variant:
    map: SimplicialMap
    retraction: SimplicialMap  # variant source -> original source

    def pull(self, z: Cochain) -> Cochain:
        return pullback_cochain(self.retraction, z)


def random_variant(f: SimplicialMap, seed: int, moves: int = 3,
                   barycentric: bool | None = None) -> Variant:
    """Random stellar moves on the source (new vertex sent to a random vertex
    of the starred simplex's image), optionally followed by one barycentric
    subdivision of source and target."""
    rng = random.Random(seed)
    if barycentric is None:
        barycentric = rng.random() < 0.3
    g = f
    back = SimplicialMap(f.source, f.source, {v: v for v in f.source.vertices})
    for _ in range(moves):
        cands = [s for s in g.source.all_simplices() if len(s) >= 2]
        phi = rng.choice(cands)
        move = stellar_subdivide_map(g, phi, rng.choice(g.image(phi)))
        back = compose(back, move.retraction)
        g = move.map
    if barycentric:
        sd = subdivide_map(g)
        back = compose(back, subdivision_retraction(sd.source, g.source))
        g = sd.map
    return Variant(g, back)
