"""Abstract pseudo-quotient spaces: graded cell posets with top-cell labels
and walls tagged by fold-type local models.

Each top cell carries a reference orientation: the coherent orientation of the
flags of its closed cell in which the first flag (flags compared from the top
cell downward) is positive.  A wall's transition rule says that the signed sum
of the labels of its incident top cells vanishes, the sign being the incidence
of each top cell on the wall's first flag.  For a fold-birth wall this forces
the label to be zero; for a fold-merge wall it reads ``a = b + c`` once the
three cells are oriented compatibly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from networkx.utils import UnionFind

from .algebra import AbelianGroup, CoefficientModule, ModuleElement
from .complex import NonOrientable, build_complex, facets, homology, orient_coherently
from .cycle import (CycleCheck, LabeledTopChain, Verdict, check_cycle, nontriviality,
                    wall_incidence)
from .errors import ParseError, PreconditionError
from .poset import CellPoset, transitive_closure

FORMAT_VERSION = 1


@dataclass(frozen=True)
class LocalModel:
    name: str
    arity: int | None  # None: any number of incident top cells
    description: str


LOCAL_MODELS: dict[str, LocalModel] = {m.name: m for m in (
    LocalModel("fold-birth", 1, "a fiber component dies across the wall; the label must vanish"),
    LocalModel("regular", 2, "no singular point; the two sides carry the same label"),
    LocalModel("fold-merge", 3, "one component splits into two: a = b + c"),
    LocalModel("II3", 4, "two singular points in one fiber: two-vs-two with matched sums"),
    LocalModel("junction", None, "generic signed-sum balance for any other arity"),
)}

_BY_ARITY = {1: "fold-birth", 2: "regular", 3: "fold-merge", 4: "II3"}


def model_for_arity(k: int) -> str:
    return _BY_ARITY.get(k, "junction")


class PQValidationError(PreconditionError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def reference_signs(poset: CellPoset, c: int) -> dict[tuple[int, ...], int]:
    """Sign of each flag of the closed cell ``c`` under its reference orientation."""
    n = poset.dims[c]
    chains = poset.chains_ending(c)
    if any(len(ch) != n + 1 for ch in chains):
        raise PQValidationError(f"cell {c} has flags that skip a dimension")
    if n == 0:
        return {chains[0]: 1}
    star = build_complex(chains, len(poset))
    orient = orient_coherently(star)
    if isinstance(orient, NonOrientable):
        raise PQValidationError(f"closed cell {c} is not orientable")
    uf = UnionFind(chains)
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for ch in chains:
        for _, face in facets(ch):
            if face and face[-1] == c:
                if face in seen:
                    uf.union(seen[face], ch)
                else:
                    seen[face] = ch
    if len(list(uf.to_sets())) != 1:
        raise PQValidationError(f"closed cell {c} is not connected through its interior")
    ref = orient[chains[0]]
    return {ch: orient[ch] * ref for ch in chains}


@dataclass(frozen=True)
class PseudoQuotient:
    n: int
    ids: tuple[str, ...]
    poset: CellPoset
    module: CoefficientModule
    labels: Mapping[int, ModuleElement]
    models: Mapping[int, str]
    inferred: frozenset[int] = frozenset()
    gleams: Mapping[int, Fraction] = field(default_factory=dict)

    @property
    def top_cells(self) -> list[int]:
        return self.poset.top_cells

    @property
    def walls(self) -> list[int]:
        return self.poset.walls

    @cached_property
    def pushforward(self) -> dict[int, tuple[tuple[tuple[int, ...], int], ...]]:
        return {c: tuple(sorted(reference_signs(self.poset, c).items()))
                for c in self.top_cells}

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.ids)}

    def label_chain(self, labels: Mapping[int, ModuleElement] | None = None) -> LabeledTopChain:
        labels = self.labels if labels is None else labels
        bnd = {w for w in self.walls if len(self.poset.top_cofaces(w)) < 2}
        bad = tuple(c for c, x in sorted(labels.items()) if x and bnd & self.poset.below[c])
        return LabeledTopChain(self.module, dict(labels), "user-label", None, bad)

    def with_labels(self, labels: Mapping[str, ModuleElement]) -> "PseudoQuotient":
        new = dict(self.labels)
        for name, x in labels.items():
            new[self.index[name]] = x
        return PseudoQuotient(self.n, self.ids, self.poset, self.module, new, self.models,
                              self.inferred, self.gleams)

    def to_text(self) -> str:
        lines = [f"pq dim={self.n} version={FORMAT_VERSION}", self.module.presentation_text().rstrip("\n")]
        for i, name in enumerate(self.ids):
            lines.append(f"cell {name} dim={self.poset.dims[i]}")
        for c, low in enumerate(self.poset.covers):
            for d in low:
                lines.append(f"face {self.ids[d]} {self.ids[c]}")
        for c in self.top_cells:
            coords = " ".join(map(str, self.labels[c].coords))
            lines.append(f"label {self.ids[c]} {coords}")
        for w in self.walls:
            if w not in self.inferred:
                lines.append(f"wall {self.ids[w]} model={self.models[w]}")
        for c, g in sorted(self.gleams.items()):
            lines.append(f"gleam {self.ids[c]} {g.numerator}/{g.denominator}")
        return "\n".join(lines) + "\n"


def _int(tok: str, source: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError("expected an integer", source, line, tok) from None


def _keyval(tok: str, key: str, source: str, line: int) -> int:
    if not tok.startswith(key + "="):
        raise ParseError(f"expected {key}=<int>", source, line, tok)
    return _int(tok[len(key) + 1:], source, line)


def load_pq(text: str, module: CoefficientModule | None = None,
            source: str = "<text>") -> PseudoQuotient:
    """Parse and validate the line-oriented pseudo-quotient format."""
    n = None
    ring, rank, rels, module_line = None, None, [], 0
    cells: list[tuple[str, int, int]] = []
    faces: list[tuple[str, str, int]] = []
    labels: list[tuple[str, list[int], int]] = []
    walls: list[tuple[str, str, int]] = []
    gleams: list[tuple[str, Fraction, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kw, args = toks[0], toks[1:]
        if n is None:
            if kw != "pq" or len(args) not in (1, 2):
                raise ParseError("expected header 'pq dim=<n> [version=<v>]'", source, lineno, kw)
            n = _keyval(args[0], "dim", source, lineno)
            if len(args) == 2:
                version = _keyval(args[1], "version", source, lineno)
                if not 1 <= version <= FORMAT_VERSION:
                    raise ParseError(f"unsupported format version, expected 1..{FORMAT_VERSION}",
                                     source, lineno, args[1])
            continue
        if kw == "module":
            if len(args) != 2 or args[0] not in ("Z", "Z2"):
                raise ParseError("expected 'module <Z|Z2> rank=<s>'", source, lineno, raw.strip())
            ring, rank, module_line = args[0], _keyval(args[1], "rank", source, lineno), lineno
        elif kw == "rel":
            if ring is None:
                raise ParseError("'rel' before 'module'", source, lineno, kw)
            if len(args) != rank:
                raise ParseError(f"relation needs {rank} integers", source, lineno, raw.strip())
            rels.append(tuple(_int(a, source, lineno) for a in args))
        elif kw == "cell":
            if len(args) != 2:
                raise ParseError("expected 'cell <id> dim=<k>'", source, lineno, raw.strip())
            cells.append((args[0], _keyval(args[1], "dim", source, lineno), lineno))
        elif kw == "face":
            if len(args) != 2:
                raise ParseError("expected 'face <face-id> <coface-id>'", source, lineno, raw.strip())
            faces.append((args[0], args[1], lineno))
        elif kw == "label":
            if len(args) < 2:
                raise ParseError("expected 'label <top-id> <coordinates>'", source, lineno, raw.strip())
            labels.append((args[0], [_int(a, source, lineno) for a in args[1:]], lineno))
        elif kw == "wall":
            if len(args) != 2 or not args[1].startswith("model="):
                raise ParseError("expected 'wall <id> model=<name>'", source, lineno, raw.strip())
            walls.append((args[0], args[1][len("model="):], lineno))
        elif kw == "gleam":
            if len(args) != 2:
                raise ParseError("expected 'gleam <id> <p>/<q>'", source, lineno, raw.strip())
            try:
                g = Fraction(args[1])
            except (ValueError, ZeroDivisionError):
                raise ParseError("expected a rational p/q", source, lineno, args[1]) from None
            gleams.append((args[0], g, lineno))
        else:
            raise ParseError("unknown keyword", source, lineno, kw)
    if n is None:
        raise ParseError("empty pseudo-quotient description", source)

    if ring is not None:
        try:
            A = CoefficientModule(ring, rank, tuple(rels))
        except ValueError as e:
            raise PQValidationError(str(e), module_line) from None
    else:
        A = module or CoefficientModule.integers()

    seen: dict[str, int] = {}
    for name, k, line in cells:
        if name in seen:
            raise PQValidationError(f"duplicate cell {name!r}", line)
        if not 0 <= k <= n:
            raise PQValidationError(f"cell {name!r} has dimension {k} outside 0..{n}", line)
        seen[name] = line
    order = sorted(range(len(cells)), key=lambda i: (cells[i][1], i))
    ids = tuple(cells[i][0] for i in order)
    dims = tuple(cells[i][1] for i in order)
    idx = {name: i for i, name in enumerate(ids)}

    def lookup(name: str, line: int) -> int:
        if name not in idx:
            raise PQValidationError(f"unknown cell {name!r}", line)
        return idx[name]

    pairs = []
    for lo, hi, line in faces:
        a, b = lookup(lo, line), lookup(hi, line)
        if dims[a] >= dims[b]:
            raise PQValidationError(f"face {lo!r} of {hi!r} is not of lower dimension", line)
        pairs.append((a, b))
    poset = CellPoset(dims, transitive_closure(pairs, len(ids)), n)

    label_map: dict[int, ModuleElement] = {}
    for name, coords, line in labels:
        c = lookup(name, line)
        if dims[c] != n:
            raise PQValidationError(f"label on {name!r}, which is not a top cell", line)
        if c in label_map:
            raise PQValidationError(f"second label for {name!r}", line)
        if len(coords) != A.rank:
            raise PQValidationError(f"label has {len(coords)} coordinates, module rank {A.rank}", line)
        label_map[c] = A.element(coords)
    for c in poset.top_cells:
        if c not in label_map:
            raise PQValidationError(f"missing label for top cell {ids[c]!r}", seen[ids[c]])

    models: dict[int, str] = {}
    for name, model, line in walls:
        w = lookup(name, line)
        if dims[w] != n - 1:
            raise PQValidationError(f"wall {name!r} is not an (n-1)-cell", line)
        if model not in LOCAL_MODELS:
            raise PQValidationError(f"unknown local model {model!r}", line)
        if w in models:
            raise PQValidationError(f"second model for wall {name!r}", line)
        arity = len(poset.top_cofaces(w))
        want = LOCAL_MODELS[model].arity
        if want is not None and arity != want:
            raise PQValidationError(
                f"wall {name!r} declares {model} (arity {want}) but has {arity} top cells", line)
        models[w] = model
    inferred = frozenset(w for w in poset.walls if w not in models)
    for w in inferred:
        models[w] = model_for_arity(len(poset.top_cofaces(w)))

    gleam_map: dict[int, Fraction] = {}
    for name, g, line in gleams:
        c = lookup(name, line)
        if dims[c] != 2:
            raise PQValidationError(f"gleam on {name!r}, which is not a 2-cell", line)
        if (2 * g).denominator != 1:
            raise PQValidationError(f"gleam {g} is not a half-integer", line)
        gleam_map[c] = g

    P = PseudoQuotient(n, ids, poset, A, label_map, dict(sorted(models.items())), inferred,
                       gleam_map)
    for c in P.top_cells:
        try:
            reference_signs(poset, c)
        except PQValidationError as e:
            raise PQValidationError(f"top cell {ids[c]!r}: {e}", seen[ids[c]]) from None
    return P


@dataclass(frozen=True)
class WallResult:
    wall: int
    name: str
    model: str
    inferred: bool
    incidence: tuple[tuple[int, int], ...]
    residual: ModuleElement

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


@dataclass(frozen=True)
class PQReport:
    walls: tuple[WallResult, ...]
    check: CycleCheck
    verdict: Verdict | None
    homology: AbelianGroup
    contract_violations: tuple[int, ...]

    @property
    def consistent(self) -> bool:
        return all(w.ok for w in self.walls)

    @property
    def passed(self) -> bool:
        return self.consistent and self.check.passed


def wall_rule(P: PseudoQuotient, wall: int, labels: Mapping[int, ModuleElement]) -> WallResult:
    inc = wall_incidence(P, wall)
    acc = P.module.zero()
    for c, s in inc.items():
        acc = acc + labels[c] * s
    return WallResult(wall, P.ids[wall], P.models[wall], wall in P.inferred,
                      tuple(sorted(inc.items())), acc)


def pq_verify(P: PseudoQuotient) -> PQReport:
    chain = P.label_chain()
    results = tuple(wall_rule(P, w, P.labels) for w in P.walls)
    check = check_cycle(chain, P)
    verdict = nontriviality(chain, P, check=check) if check.passed else None
    H = homology(P.poset.order_complex, P.n, P.module)
    return PQReport(results, check, verdict, H, chain.contract_violations)


def consistent_labelings(P: PseudoQuotient, max_cells: int = 12,
                         max_order: int = 4) -> list[dict[int, ModuleElement]]:
    """All labelings that pass every wall rule and the full cycle check, by
    backtracking over a small finite module."""
    order = P.module.order()
    tops = P.top_cells
    if order is None or order > max_order or len(tops) > max_cells:
        raise PreconditionError("exhaustive enumeration needs |A| <= 4 and at most 12 top cells")
    elems = P.module.elements()
    pos = {c: i for i, c in enumerate(tops)}
    ready: dict[int, list[int]] = {i: [] for i in range(len(tops))}
    for w in P.walls:
        cof = P.poset.top_cofaces(w)
        ready[max(pos[c] for c in cof) if cof else 0].append(w)
    out = []
    labels: dict[int, ModuleElement] = {}

    def rec(i: int):
        if i == len(tops):
            if check_cycle(P.label_chain(labels), P).passed:
                out.append(dict(labels))
            return
        for x in elems:
            labels[tops[i]] = x
            if all(wall_rule(P, w, labels).ok for w in ready[i]):
                rec(i + 1)
        del labels[tops[i]]

    rec(0)
    return out


def reeb_to_pq(W, chain: LabeledTopChain) -> PseudoQuotient:
    """Export a Reeb complex with its labels; labels move from the sorted
    target orientation to the reference orientation of each top cell."""
    ids = tuple(f"c{i}" for i in range(len(W.cells)))
    labels = {}
    for c in W.top_cells:
        first = W.poset.chains_ending(c)[0]
        s = dict(W.pushforward[c])[first]
        labels[c] = chain.coeffs[c] * s
    models = {w: model_for_arity(len(W.poset.top_cofaces(w))) for w in W.walls}
    return PseudoQuotient(W.n, ids, W.poset, chain.module, labels, models, frozenset(), {})


ROUND_FOLD_S2XS2 = """\
pq dim=2
# Reeb space of a round fold map S^2 x S^2 -> R^2: an outer annulus Q1+Q2
# whose outer edge is a definite fold, and two discs D1, D2 glued along the
# inner fold circle.  Every regular fiber is a union of 2-spheres, so each
# label is chi(S^2) mod 2 = 0.
module Z2 rank=1
cell o0 dim=0
cell o1 dim=0
cell i0 dim=0
cell i1 dim=0
cell oa dim=1
cell ob dim=1
cell ia dim=1
cell ib dim=1
cell r0 dim=1
cell r1 dim=1
cell Q1 dim=2
cell Q2 dim=2
cell D1 dim=2
cell D2 dim=2
face o0 oa
face o1 oa
face o0 ob
face o1 ob
face i0 ia
face i1 ia
face i0 ib
face i1 ib
face o0 r0
face i0 r0
face o1 r1
face i1 r1
face oa Q1
face r0 Q1
face ia Q1
face r1 Q1
face ob Q2
face r0 Q2
face ib Q2
face r1 Q2
face ia D1
face ib D1
face ia D2
face ib D2
label Q1 0
label Q2 0
label D1 0
label D2 0
wall oa model=fold-birth
wall ob model=fold-birth
wall ia model=fold-merge
wall ib model=fold-merge
wall r0 model=regular
wall r1 model=regular
"""

SPECIAL_GENERIC_DISC = """\
pq dim=2
# Special generic map onto a disc: the boundary circle is a definite fold.
module Z2 rank=1
cell a dim=0
cell b dim=0
cell c dim=0
cell d dim=0
cell ab dim=1
cell bc dim=1
cell cd dim=1
cell da dim=1
cell ac dim=1
cell T1 dim=2
cell T2 dim=2
face a ab
face b ab
face b bc
face c bc
face c cd
face d cd
face d da
face a da
face a ac
face c ac
face ab T1
face bc T1
face ac T1
face cd T2
face da T2
face ac T2
label T1 0
label T2 0
wall ab model=fold-birth
wall bc model=fold-birth
wall cd model=fold-birth
wall da model=fold-birth
wall ac model=regular
"""


def round_fold_s2xs2() -> PseudoQuotient:
    return load_pq(ROUND_FOLD_S2XS2, source="round-fold-s2xs2")


def special_generic_disc() -> PseudoQuotient:
    return load_pq(SPECIAL_GENERIC_DISC, source="special-generic-disc")
