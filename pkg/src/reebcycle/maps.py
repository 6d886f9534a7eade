"""Simplicial maps given by vertex assignments."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .complex import (Cochain, PreconditionError, Simplex, SimplicialComplex,
                      Subdivision, barycentric_subdivide, perm_sign, stellar_subdivide)


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    assignment: Mapping[int, int]

    def __post_init__(self):
        missing = [v for v in self.source.vertices if v not in self.assignment]
        if missing:
            raise PreconditionError(f"assignment missing source vertices {missing[:5]}")
        extra = [v for v in self.assignment if (v,) not in self.source]
        if extra:
            raise PreconditionError(f"assignment references unknown source vertices {extra[:5]}")
        bad = sorted({t for t in self.assignment.values() if (t,) not in self.target})
        if bad:
            raise PreconditionError(f"assignment references unknown target vertices {bad[:5]}")
        object.__setattr__(self, "assignment", dict(sorted(self.assignment.items())))

    def __call__(self, v: int) -> int:
        return self.assignment[v]

    def image(self, phi: Sequence[int]) -> Simplex:
        return tuple(sorted({self.assignment[v] for v in phi}))

    @cached_property
    def images(self) -> dict[Simplex, Simplex]:
        return {phi: self.image(phi) for phi in self.source.all_simplices()}

    def is_degenerate(self, phi: Simplex) -> bool:
        return len(self.images[phi]) < len(phi)

    def to_text(self) -> str:
        return "map\n" + "".join(f"assign {s} {t}\n" for s, t in self.assignment.items())


@dataclass(frozen=True)
class MapReport:
    ok: bool
    violations: tuple[Simplex, ...]
    degenerate: int


def validate_map(f: SimplicialMap) -> MapReport:
    bad = tuple(phi for phi, img in f.images.items() if img not in f.target)
    degenerate = sum(1 for phi in f.images if f.is_degenerate(phi))
    return MapReport(not bad, bad, degenerate)


def require_valid(f: SimplicialMap) -> None:
    report = validate_map(f)
    if not report.ok:
        raise PreconditionError(f"not simplicial: {report.violations[0]} has no image simplex")


def image_simplex(f: SimplicialMap, phi: Sequence[int],
                  query: Sequence[int] | None = None) -> tuple[Simplex, bool]:
    phi = tuple(sorted(phi))
    if phi not in f.source:
        raise PreconditionError(f"{phi} is not a source simplex")
    img = f.image(phi)
    return img, query is not None and img == tuple(sorted(query))


def identity_map(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, {v: v for v in K.vertices})


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    return SimplicialMap(f.source, g.target, {v: g(f(v)) for v in f.source.vertices})


@dataclass(frozen=True)
class SubdividedMap:
    map: SimplicialMap
    source: Subdivision
    target: Subdivision


def subdivide_map(f: SimplicialMap) -> SubdividedMap:
    """The induced map ``Sd M -> Sd N`` (barycenter of phi to barycenter of f(phi))."""
    sd_src = barycentric_subdivide(f.source)
    sd_tgt = barycentric_subdivide(f.target)
    tv = sd_tgt.vertex_of
    assign = {v: tv[f.image(phi)] for v, phi in enumerate(sd_src.carriers)}
    return SubdividedMap(SimplicialMap(sd_src.complex, sd_tgt.complex, assign), sd_src, sd_tgt)


def subdivision_retraction(sd: Subdivision, original: SimplicialComplex,
                           rule: str = "min") -> SimplicialMap:
    """Simplicial approximation ``Sd K -> K`` of the identity (barycenter to a vertex)."""
    pick = min if rule == "min" else max
    return SimplicialMap(sd.complex, original, {v: pick(c) for v, c in enumerate(sd.carriers)})


def pullback_cochain(g: SimplicialMap, z: Cochain) -> Cochain:
    out = {}
    for s in g.source[z.degree]:
        img = [g(v) for v in s]
        if len(set(img)) < len(img):
            continue
        val = z.values.get(tuple(sorted(img)))
        if val is None or not val:
            continue
        out[s] = val if perm_sign(img) == 1 else -val
    return Cochain(z.degree, z.module, out)


@dataclass(frozen=True)
class StellarMove:
    map: SimplicialMap
    retraction: SimplicialMap  # new source -> old source


def stellar_subdivide_map(f: SimplicialMap, phi: Simplex, image_vertex: int) -> StellarMove:
    """Star the source simplex ``phi``; the new vertex goes to ``image_vertex``,
    which must be a vertex of ``f(phi)`` so the map stays simplicial."""
    if image_vertex not in f.image(phi):
        raise PreconditionError(f"{image_vertex} not a vertex of f({phi})")
    K2, v = stellar_subdivide(f.source, phi)
    assign = dict(f.assignment)
    assign[v] = image_vertex
    back = {u: u for u in f.source.vertices}
    back[v] = min(phi)
    return StellarMove(SimplicialMap(K2, f.target, assign), SimplicialMap(K2, f.source, back))
