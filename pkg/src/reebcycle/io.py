"""Plain-text formats for complexes, maps, modules, cochains and label tables.

All formats are whitespace-delimited, one record per line, ``#`` starts a
comment.  Parsers raise :class:`ParseError` naming the source, line and token.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import Iterator

from .algebra import CoefficientModule, QuotientLabelModule
from .complex import Cochain, SimplicialComplex, build_complex, perm_sign
from .cycle import LabelTable
from .errors import ParseError, PreconditionError
from .maps import SimplicialMap
from .pq import PseudoQuotient, load_pq


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            yield lineno, toks


def _int(tok: str, source: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError("expected an integer", source, line, tok) from None


def _keyval(tok: str, key: str, source: str, line: int) -> int:
    if not tok.startswith(key + "="):
        raise ParseError(f"expected {key}=<int>", source, line, tok)
    return _int(tok[len(key) + 1:], source, line)


def _header(recs: list[tuple[int, list[str]]], keyword: str, source: str) -> list[str]:
    if not recs:
        raise ParseError(f"empty input, expected '{keyword}' header", source)
    line, toks = recs[0]
    if toks[0] != keyword:
        raise ParseError(f"expected '{keyword}' header", source, line, toks[0])
    return toks[1:]


# complexes

def parse_complex(text: str, source: str = "<text>") -> SimplicialComplex:
    recs = list(_records(text))
    args = _header(recs, "complex", source)
    line = recs[0][0]
    if len(args) != 2:
        raise ParseError("expected 'complex dim=<d> vertices=<V>'", source, line, " ".join(args))
    dim = _keyval(args[0], "dim", source, line)
    nv = _keyval(args[1], "vertices", source, line)
    simplices = []
    for line, toks in recs[1:]:
        if toks[0] != "simplex":
            raise ParseError("expected 'simplex'", source, line, toks[0])
        verts = [_int(t, source, line) for t in toks[1:]]
        if not verts:
            raise ParseError("simplex with no vertices", source, line, toks[0])
        bad = next((v for v in verts if not 0 <= v < nv), None)
        if bad is not None:
            raise ParseError(f"vertex out of range 0..{nv - 1}", source, line, str(bad))
        if len(set(verts)) != len(verts):
            raise ParseError("repeated vertex in simplex", source, line, " ".join(toks[1:]))
        simplices.append(verts)
    if not simplices:
        raise ParseError("complex has no simplices", source)
    K = build_complex(simplices, nv)
    if K.dim != dim:
        raise ParseError(f"declared dim={dim} but simplices have dimension {K.dim}", source,
                         recs[0][0], f"dim={dim}")
    return K


def write_complex(K: SimplicialComplex) -> str:
    return K.to_text()


# maps

def parse_map(text: str, source_complex: SimplicialComplex, target: SimplicialComplex,
              source: str = "<text>") -> SimplicialMap:
    recs = list(_records(text))
    args = _header(recs, "map", source)
    if args:
        raise ParseError("unexpected token after 'map'", source, recs[0][0], args[0])
    assignment: dict[int, int] = {}
    for line, toks in recs[1:]:
        if toks[0] != "assign" or len(toks) != 3:
            raise ParseError("expected 'assign <source-vertex> <target-vertex>'", source, line,
                             toks[0])
        s, t = _int(toks[1], source, line), _int(toks[2], source, line)
        if s in assignment:
            raise ParseError("vertex assigned twice", source, line, toks[1])
        assignment[s] = t
    return SimplicialMap(source_complex, target, assignment)


def write_map(f: SimplicialMap) -> str:
    return f.to_text()


# modules

def _module_from(recs, source: str) -> tuple[CoefficientModule, list]:
    """Consume a leading ``module``/``rel`` block; return the rest."""
    line, toks = recs[0]
    if len(toks) != 3 or toks[1] not in ("Z", "Z2"):
        raise ParseError("expected 'module <Z|Z2> rank=<s>'", source, line, " ".join(toks))
    ring, rank = toks[1], _keyval(toks[2], "rank", source, line)
    if rank < 0:
        raise ParseError("negative rank", source, line, toks[2])
    rels = []
    i = 1
    while i < len(recs) and recs[i][1][0] == "rel":
        line, toks = recs[i]
        if len(toks) - 1 != rank:
            raise ParseError(f"relation needs {rank} integers", source, line, " ".join(toks))
        rels.append(tuple(_int(t, source, line) for t in toks[1:]))
        i += 1
    return CoefficientModule(ring, rank, tuple(rels)), recs[i:]


def parse_module(text: str, source: str = "<text>") -> CoefficientModule:
    recs = list(_records(text))
    _header(recs, "module", source)
    A, rest = _module_from(recs, source)
    if rest:
        line, toks = rest[0]
        raise ParseError("unexpected record after module", source, line, toks[0])
    return A


def write_module(A: CoefficientModule) -> str:
    return A.presentation_text()


def coefficient_module(name: str) -> CoefficientModule:
    """``Z``, ``Z2`` or the path of a module file."""
    if name == "Z":
        return CoefficientModule.integers()
    if name == "Z2":
        return CoefficientModule.mod2()
    return parse_module(read_text(name), source=name)


# cochains

def parse_cochain(text: str, module: CoefficientModule | None = None,
                  source: str = "<text>") -> Cochain:
    recs = list(_records(text))
    args = _header(recs, "cochain", source)
    if len(args) != 1:
        raise ParseError("expected 'cochain deg=<k>'", source, recs[0][0], " ".join(args))
    deg = _keyval(args[0], "deg", source, recs[0][0])
    rest = recs[1:]
    if rest and rest[0][1][0] == "module":
        module, rest = _module_from(rest, source)
    A = module or CoefficientModule.integers()
    values = {}
    for line, toks in rest:
        if toks[0] != "val" or len(toks) != 1 + deg + 1 + A.rank:
            raise ParseError(f"expected 'val' with {deg + 1} vertices and {A.rank} coordinates",
                             source, line, toks[0])
        nums = [_int(t, source, line) for t in toks[1:]]
        verts, coords = nums[:deg + 1], nums[deg + 1:]
        if len(set(verts)) != len(verts):
            raise ParseError("repeated vertex", source, line, " ".join(toks[1:deg + 2]))
        key = tuple(sorted(verts))
        if key in values:
            raise ParseError("simplex given twice", source, line, " ".join(toks[1:deg + 2]))
        x = A.element(coords)
        values[key] = x if perm_sign(verts) == 1 else -x
    return Cochain(deg, A, values)


def write_cochain(z: Cochain) -> str:
    lines = [f"cochain deg={z.degree}", z.module.presentation_text().rstrip("\n")]
    for s in sorted(z.values):
        lines.append("val " + " ".join(map(str, s)) + " " + " ".join(map(str, z.values[s].coords)))
    return "\n".join(lines) + "\n"


# label tables

_TERM = re.compile(r"^([+-]?\d*)\*?([A-Za-z_][\w.-]*)$")


def _expr(tokens: list[str], source: str, line: int) -> dict[str, int]:
    out: dict[str, int] = {}
    for tok in tokens:
        if re.fullmatch(r"[+-]?0", tok):
            continue
        m = _TERM.match(tok)
        if not m:
            raise ParseError("expected a term like g, -g or 2*g", source, line, tok)
        c = m.group(1)
        coef = int(c) if c not in ("", "+", "-") else (-1 if c == "-" else 1)
        out[m.group(2)] = out.get(m.group(2), 0) + coef
    return out


def parse_label_table(text: str, source: str = "<text>") -> LabelTable:
    """Label table for user labels.

    ``labels [ring=Z|Z2]`` header, then ``generator <name>`` lines, ``rel <terms>``
    lines, an optional ``default <terms>`` line and ``label <v0,v1,...>/<component> <terms>``
    lines.  Labels refer to the coherent orientation of the target.
    """
    recs = list(_records(text))
    args = _header(recs, "labels", source)
    ring = "Z"
    for a in args:
        if a not in ("ring=Z", "ring=Z2"):
            raise ParseError("expected ring=Z or ring=Z2", source, recs[0][0], a)
        ring = a.split("=")[1]
    gens, rels, labels, default = [], [], {}, None
    where: dict = {}
    for line, toks in recs[1:]:
        kw = toks[0]
        if kw == "generator":
            if len(toks) != 2 or not _TERM.match(toks[1]) or toks[1][0] in "+-0123456789":
                raise ParseError("expected 'generator <name>'", source, line, " ".join(toks))
            gens.append(toks[1])
            where[toks[1]] = line
        elif kw == "rel":
            rels.append((_expr(toks[1:], source, line), line))
        elif kw == "default":
            default = _expr(toks[1:], source, line)
            where["default"] = line
        elif kw == "label":
            if len(toks) < 2 or "/" not in toks[1]:
                raise ParseError("expected 'label <v0,v1,...>/<component> <terms>'", source, line,
                                 toks[1] if len(toks) > 1 else kw)
            simp, comp = toks[1].split("/", 1)
            verts = tuple(sorted(_int(v, source, line) for v in simp.split(",")))
            key = (verts, _int(comp, source, line))
            if key in labels:
                raise ParseError("cell labelled twice", source, line, toks[1])
            labels[key] = _expr(toks[2:], source, line)
            where[key] = line
        else:
            raise ParseError("unknown keyword", source, line, kw)
    if not gens:
        raise ParseError("label table declares no generators", source)
    known = set(gens)
    for expr, line in rels:
        for name in expr:
            if name not in known:
                raise ParseError("unknown generator", source, line, name)
    for key, expr in labels.items():
        for name in expr:
            if name not in known:
                raise ParseError("unknown generator", source, where[key], name)
    for name in default or {}:
        if name not in known:
            raise ParseError("unknown generator", source, where["default"], name)
    try:
        q = QuotientLabelModule(tuple(gens), tuple(tuple(sorted(e.items())) for e, _ in rels), ring)
    except ValueError as e:
        raise ParseError(str(e), source) from None
    return LabelTable(q, labels, default)


def _terms(expr) -> str:
    parts = [f"{c}*{g}" for g, c in sorted(expr.items()) if c]
    return " ".join(parts) if parts else "0"


def write_label_table(t: LabelTable) -> str:
    q = t.module
    lines = [f"labels ring={q.ring}"]
    lines += [f"generator {g}" for g in q.generators]
    lines += ["rel " + _terms(dict(rel)) for rel in q.relations]
    if t.default is not None:
        lines.append("default " + _terms(t.default))
    for (verts, comp), expr in sorted(t.labels.items()):
        lines.append(f"label {','.join(map(str, verts))}/{comp} {_terms(expr)}")
    return "\n".join(lines) + "\n"


# pseudo-quotients

def parse_pq(text: str, module: CoefficientModule | None = None,
             source: str = "<text>") -> PseudoQuotient:
    return load_pq(text, module, source)


def write_pq(P: PseudoQuotient) -> str:
    return P.to_text()


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise PreconditionError(f"cannot read {path}: {e.strerror}") from None
