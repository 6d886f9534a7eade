"""Fibers over barycenters of top target simplices.

The fiber of a simplicial map over the barycenter ``b`` of a top simplex
``sigma`` has one convex cell ``phi ∩ f^{-1}(b)`` of dimension ``dim phi - n``
for every source simplex ``phi`` mapping onto ``sigma``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algebra import ModuleElement
from .complex import (Cochain, NonOrientable, Orientation, PreconditionError, Simplex,
                      orient_coherently)
from .maps import SimplicialMap
from .reeb import _components


class NotACircle(PreconditionError):
    pass


@dataclass(frozen=True)
class FiberComplex:
    sigma: Simplex
    n: int
    cells: tuple[tuple[Simplex, int], ...]
    components: tuple[tuple[Simplex, ...], ...]

    @cached_property
    def component_of(self) -> dict[Simplex, int]:
        return {phi: i for i, comp in enumerate(self.components) for phi in comp}

    def census(self, component: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for phi in self.components[component]:
            k = len(phi) - 1 - self.n
            out[k] = out.get(k, 0) + 1
        return dict(sorted(out.items()))


def fiber_over(f: SimplicialMap, sigma: Sequence[int]) -> FiberComplex:
    sigma = tuple(sorted(sigma))
    n = f.target.dim
    if sigma not in f.target or len(sigma) != n + 1:
        raise PreconditionError(f"{sigma} is not a top simplex of the target")
    cells = [phi for phi, img in f.images.items() if img == sigma]
    comps = _components(cells) if cells else []
    ordered = tuple((phi, len(phi) - 1 - n) for comp in comps for phi in comp)
    return FiberComplex(sigma, n, ordered, tuple(tuple(c) for c in comps))


def fiber_euler_char(F: FiberComplex, component: int) -> int:
    if not 0 <= component < len(F.components):
        raise PreconditionError(f"no fiber component {component}")
    return sum((-1) ** (len(phi) - 1 - F.n) for phi in F.components[component])


def fiber_euler_char_mod2(F: FiberComplex, component: int) -> int:
    return fiber_euler_char(F, component) % 2


@dataclass(frozen=True)
class OrientedLoop:
    """Edge-loop approximation of a fiber circle."""

    edges: tuple[tuple[int, int], ...]
    crossings: tuple[tuple[Simplex, Simplex, Simplex], ...]  # (simplex, entry face, exit face)
    oriented: bool

    def vertices(self) -> list[int]:
        return [u for u, _ in self.edges]

    def reversed(self) -> "OrientedLoop":
        return OrientedLoop(tuple((v, u) for u, v in reversed(self.edges)),
                            tuple((d, b, a) for d, a, b in reversed(self.crossings)),
                            self.oriented)


def _det(rows: list[list[Fraction]]) -> Fraction:
    a = [r[:] for r in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            q = a[i][k] / a[k][k]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[k])]
    return det


def _fiber_point(delta: Simplex, face: Simplex) -> list[Fraction]:
    """Barycentric coordinates (in ``delta``) of the fiber point on ``face``."""
    w = Fraction(1, len(face))
    return [w if v in face else Fraction(0) for v in delta]


def crossing_sign(f: SimplicialMap, delta: Simplex, entry: Simplex, exit: Simplex,
                  orientation: Orientation, sigma_sign: int = 1) -> int:
    """Sign of the frame (fiber direction entry->exit, lifts of sigma's edges)
    against the source orientation of ``delta``."""
    sigma = f.image(delta)
    u = [b - a for a, b in zip(_fiber_point(delta, entry), _fiber_point(delta, exit))]
    pos = {v: i for i, v in enumerate(delta)}
    rep = {}
    for v in delta:
        rep.setdefault(f(v), v)
    frame = [u]
    for a in sigma[1:]:
        t = [Fraction(0)] * len(delta)
        t[pos[rep[a]]] += 1
        t[pos[rep[sigma[0]]]] -= 1
        frame.append(t)
    det = _det([row[1:] for row in frame])
    if det == 0:
        raise PreconditionError(f"degenerate fiber frame in {delta}")
    return (1 if det > 0 else -1) * orientation[delta] * sigma_sign


def fiber_loop(f: SimplicialMap, sigma: Sequence[int], component: int,
               orientation: Orientation | None = None, rep: str = "min",
               sigma_sign: int = 1, require_orientation: bool = False,
               fiber: FiberComplex | None = None) -> OrientedLoop:
    """Traverse a circle fiber component as a loop of source edges.

    Each crossed codimension-one face is represented by its smallest (or
    largest) vertex; within each top simplex the fiber segment becomes the edge
    between consecutive representatives.
    """
    m, n = f.source.dim, f.target.dim
    if m - n != 1:
        raise PreconditionError(f"fiber loops need codimension 1, got {m - n}")
    F = fiber or fiber_over(f, sigma)
    if not 0 <= component < len(F.components):
        raise PreconditionError(f"no fiber component {component}")
    comp = F.components[component]
    points = [phi for phi in comp if len(phi) == n + 1]
    segments = [phi for phi in comp if len(phi) == n + 2]
    ends = {d: [x for x in points if set(x) <= set(d)] for d in segments}
    touching: dict[Simplex, list[Simplex]] = {p: [] for p in points}
    for d, ps in ends.items():
        if len(ps) != 2:
            raise NotACircle(f"segment {d} has {len(ps)} endpoints")
        for p in ps:
            touching[p].append(d)
    if any(len(v) != 2 for v in touching.values()):
        raise NotACircle(f"fiber component {component} over {F.sigma} is not a circle")

    if orientation is None:
        o = orient_coherently(f.source)
        if isinstance(o, NonOrientable):
            if require_orientation:
                raise PreconditionError("source is not orientable")
            o = None
        orientation = o
    pick = min if rep == "min" else max

    start = min(points)
    walk: list[tuple[Simplex, Simplex, Simplex]] = []
    if orientation is not None:
        forward = {}
        for d, (p, q) in ends.items():
            s = crossing_sign(f, d, p, q, orientation, sigma_sign)
            forward[d] = (p, q) if s > 0 else (q, p)
        outgoing = {}
        for d, (p, q) in forward.items():
            if p in outgoing:
                raise PreconditionError(f"incoherent fiber orientation at {p}")
            outgoing[p] = (d, q)
        cur = start
        while True:
            d, nxt = outgoing[cur]
            walk.append((d, cur, nxt))
            cur = nxt
            if cur == start:
                break
    else:
        cur, prev_seg = start, None
        while True:
            d = min(x for x in touching[cur] if x != prev_seg)
            nxt = next(x for x in ends[d] if x != cur)
            walk.append((d, cur, nxt))
            cur, prev_seg = nxt, d
            if cur == start:
                break
    if len(walk) != len(segments):
        raise NotACircle("fiber component is not a single circle")
    edges = tuple((pick(a), pick(b)) for _, a, b in walk if pick(a) != pick(b))
    return OrientedLoop(edges, tuple(walk), orientation is not None)


def evaluate_cocycle_on_loop(z: Cochain, loop: OrientedLoop, K=None) -> ModuleElement:
    if z.degree != 1:
        raise PreconditionError("loop evaluation needs a degree-1 cochain")
    if K is not None and not z.is_cocycle(K):
        raise PreconditionError("cochain is not a cocycle")
    acc = z.module.zero()
    for e in loop.edges:
        acc = acc + z(e)
    return acc
