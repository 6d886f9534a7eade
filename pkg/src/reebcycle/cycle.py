"""Top-dimensional labelled chains on Reeb spaces: build, check, decide.

A label is attached to every top cell from its fiber component (cocycle
evaluation on the fiber circle, Euler characteristic mod 2 of a surface fiber,
or a user table).  Labels are taken relative to the sorted orientation of the
target simplex, which is also the orientation used by the push-forward to the
order complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .algebra import (AbelianGroup, CoefficientModule, ModuleElement, QuotientLabelModule,
                      quotient_module)
from .complex import (Cochain, NonOrientable, Orientation, PreconditionError, Simplex,
                      facets, homology, orient_coherently)
from .fiber import evaluate_cocycle_on_loop, fiber_euler_char, fiber_loop, fiber_over
from .maps import SimplicialMap

COCYCLE, CHI2, TABLE = "cocycle-evaluation", "chi-mod-2", "user-label"


@dataclass(frozen=True)
class LabelTable:
    """User labels keyed by ``(target simplex, component)``, as generator expressions."""

    module: QuotientLabelModule
    labels: Mapping[tuple[Simplex, int], Mapping[str, int]] = field(default_factory=dict)
    default: Mapping[str, int] | None = None

    def expression(self, key: tuple[Simplex, int]) -> Mapping[str, int]:
        if key in self.labels:
            return self.labels[key]
        if self.default is None:
            raise PreconditionError(f"label table has no entry for cell {key}")
        return self.default


@dataclass(frozen=True)
class Labeler:
    kind: str
    cocycle: Cochain | None = None
    table: LabelTable | None = None
    rep: str = "min"

    @classmethod
    def from_cocycle(cls, z: Cochain, rep: str = "min") -> "Labeler":
        return cls(COCYCLE, cocycle=z, rep=rep)

    @classmethod
    def chi2(cls) -> "Labeler":
        return cls(CHI2)

    @classmethod
    def from_table(cls, table: LabelTable) -> "Labeler":
        return cls(TABLE, table=table)


@dataclass(frozen=True)
class LabeledTopChain:
    module: CoefficientModule
    coeffs: Mapping[int, ModuleElement]
    provenance: str
    normalized: Mapping[int, ModuleElement] | None = None
    contract_violations: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coeffs.values())

    def support(self) -> list[int]:
        return sorted(c for c, x in self.coeffs.items() if x)

    def perturbed(self, cell: int, delta: ModuleElement | None = None) -> "LabeledTopChain":
        delta = delta if delta is not None else self.module.generators()[0]
        coeffs = dict(self.coeffs)
        coeffs[cell] = coeffs[cell] + delta
        return replace(self, coeffs=coeffs, normalized=None)

    def __add__(self, other: "LabeledTopChain") -> "LabeledTopChain":
        keys = set(self.coeffs) | set(other.coeffs)
        zero = self.module.zero()
        return replace(self, coeffs={k: self.coeffs.get(k, zero) + other.coeffs.get(k, zero)
                                     for k in sorted(keys)}, normalized=None)


def _source_orientation(f: SimplicialMap, given: Orientation | None, required: bool):
    if given is not None:
        return given
    o = orient_coherently(f.source)
    if isinstance(o, NonOrientable):
        if required:
            raise PreconditionError(
                "coefficients have elements with 2a != 0 but the source is not orientable")
        return None
    return o


def _target_orientation(f: SimplicialMap) -> Orientation | None:
    o = orient_coherently(f.target)
    return None if isinstance(o, NonOrientable) else o


def _nonzero_element(A: CoefficientModule) -> ModuleElement:
    return next(g for g in A.generators() if g)


def build_cycle(f: SimplicialMap, W, labeler: Labeler, module: CoefficientModule | None = None,
                orientation: Orientation | None = None) -> LabeledTopChain:
    m, n = f.source.dim, f.target.dim
    if labeler.kind == COCYCLE:
        z = labeler.cocycle
        if m - n != 1:
            raise PreconditionError(f"cocycle labels need codimension 1, got {m - n}")
        if z is None or z.degree != 1:
            raise PreconditionError("cocycle labeler needs a degree-1 cochain")
        if not z.is_cocycle(f.source):
            raise PreconditionError("cochain is not a cocycle")
        A = z.module
    elif labeler.kind == CHI2:
        if m - n != 2:
            raise PreconditionError(f"chi-mod-2 labels need codimension 2, got {m - n}")
        A = module or CoefficientModule.mod2()
        if A.structure != AbelianGroup(0, (2,)):
            raise PreconditionError(f"chi-mod-2 labels need coefficients Z/2, got {A}")
    elif labeler.kind == TABLE:
        if labeler.table is None:
            raise PreconditionError("table labeler needs a table")
        A = quotient_module(labeler.table.module)
    else:
        raise PreconditionError(f"unknown labeler {labeler.kind!r}")

    needs_signs = not A.all_two_torsion
    src_o = _source_orientation(f, orientation, needs_signs)
    tgt_o = _target_orientation(f)
    if labeler.kind == TABLE and needs_signs and tgt_o is None:
        raise PreconditionError("user labels over non-2-torsion coefficients need an oriented target")

    fibers = {}
    coeffs: dict[int, ModuleElement] = {}
    for c in W.top_cells:
        cell = W.cells[c]
        sigma = cell.target
        if labeler.kind == TABLE:
            expr = labeler.table.expression((sigma, cell.component))
            x = A.element(labeler.table.module.coords(dict(expr)))
            if needs_signs:
                x = x * tgt_o[sigma]
        else:
            if sigma not in fibers:
                fibers[sigma] = fiber_over(f, sigma)
            F = fibers[sigma]
            if labeler.kind == COCYCLE:
                loop = fiber_loop(f, sigma, cell.component, orientation=src_o,
                                  rep=labeler.rep, fiber=F)
                x = evaluate_cocycle_on_loop(labeler.cocycle, loop)
            else:
                x = _nonzero_element(A) * fiber_euler_char(F, cell.component)
        coeffs[c] = x
    normalized = None
    if tgt_o is not None:
        normalized = {c: x * tgt_o[W.cells[c].target] for c, x in coeffs.items()}
    boundary_walls = {w for w in W.walls if len(W.poset.top_cofaces(w)) < 2}
    violations = tuple(c for c, x in coeffs.items()
                       if x and boundary_walls & W.poset.below[c])
    return LabeledTopChain(A, coeffs, labeler.kind, normalized, violations)


@dataclass(frozen=True)
class CycleCheck:
    walls: Mapping[int, tuple[tuple[tuple[int, ...], ModuleElement], ...]]
    internal: tuple[tuple[tuple[int, ...], ModuleElement], ...]
    wall_ids: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not self.internal and not any(self.walls.values())

    def nonzero_walls(self) -> list[int]:
        return sorted(w for w, r in self.walls.items() if r)

    def residual(self, wall: int) -> ModuleElement | None:
        """Residual on the wall's first subdivision simplex (None when zero everywhere)."""
        entries = self.walls.get(wall, ())
        return entries[0][1] if entries else None


def check_cycle(c: LabeledTopChain, W) -> CycleCheck:
    """Boundary of the pushed-forward chain, aggregated per wall."""
    A = c.module
    acc: dict[tuple[int, ...], list[int]] = {}
    for cell, x in c.coeffs.items():
        if not x:
            continue
        for chain, sign in W.pushforward[cell]:
            for i, face in facets(chain):
                k = sign * (-1) ** i
                vec = acc.setdefault(face, [0] * A.rank)
                for j, v in enumerate(x.coords):
                    vec[j] += k * v
    dims = W.poset.dims
    n = W.poset.n
    walls: dict[int, list] = {w: [] for w in W.walls}
    internal = []
    for face in sorted(acc):
        val = A.element(acc[face])
        if not val:
            continue
        top = face[-1]
        if dims[top] == n - 1:
            walls.setdefault(top, []).append((face, val))
        else:
            internal.append((face, val))
    return CycleCheck({w: tuple(v) for w, v in walls.items()}, tuple(internal), tuple(W.walls))


def wall_incidence(W, wall: int) -> dict[int, int]:
    """Signed incidence of each top coface on the wall's reference subdivision face."""
    ref = W.poset.chains_ending(wall)[0]
    n = W.poset.n
    out = {}
    for c in W.poset.top_cofaces(wall):
        sign = dict(W.pushforward[c])[ref + (c,)]
        out[c] = sign * (-1) ** n
    return out


@dataclass(frozen=True)
class Verdict:
    nontrivial: bool
    homology: AbelianGroup
    coordinates: tuple[tuple[int, ModuleElement], ...]


def nontriviality(c: LabeledTopChain, W, A: CoefficientModule | None = None,
                  check: CycleCheck | None = None) -> Verdict:
    """A nonzero top-dimensional cycle is a nonzero class: nothing bounds in the top degree."""
    check = check or check_cycle(c, W)
    if not check.passed:
        raise PreconditionError("chain is not a cycle")
    A = A or c.module
    H = homology(W.poset.order_complex, W.poset.n, A)
    coords = tuple((k, x) for k, x in sorted(c.coeffs.items()) if x)
    return Verdict(bool(coords), H, coords)


MODES = {
    "lagrangian": (2, "free rank of H_n(W; Z) (rational coefficients)",
                   "each fiber component is Lagrangian (the symplectic form restricts to zero)"),
    "spin": (1, "H_n(W; Z/2)",
             "each fiber circle with the restricted spin structure bounds D^2 as a spin manifold"),
    "spin-c": (2, "H_n(W; Z)",
               "each fiber surface with the restricted spin^c structure bounds a handlebody"),
}


@dataclass(frozen=True)
class CorollaryReport:
    mode: str
    coefficients: str
    homology: AbelianGroup
    status: str
    conclusion: str

    def text(self) -> str:
        return (f"mode {self.mode}\ncoefficients {self.coefficients}\n"
                f"homology {self.homology}\nstatus {self.status}\nconclusion {self.conclusion}\n")


def corollary_report(f: SimplicialMap, W, mode: str) -> CorollaryReport:
    if mode not in MODES:
        raise PreconditionError(f"unknown corollary mode {mode!r}")
    codim, coeff, conclusion = MODES[mode]
    if f.source.dim - f.target.dim != codim:
        raise PreconditionError(f"mode {mode} needs codimension {codim}")
    K, n = W.poset.order_complex, W.poset.n
    if mode == "lagrangian":
        H = AbelianGroup(homology(K, n, CoefficientModule.integers()).free_rank)
    elif mode == "spin":
        H = homology(K, n, CoefficientModule.mod2())
    else:
        H = homology(K, n, CoefficientModule.integers())
    status = "FORCED" if H.is_zero else "NOT DETERMINED"
    return CorollaryReport(mode, coeff, H, status, conclusion)
