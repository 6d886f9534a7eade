"""Command-line front end.

Every command prints a line-oriented ``key value`` report (byte-stable for
identical inputs).  Exit codes: 0 success, 2 contract residual or oracle
mismatch, 3 precondition rejection, 4 parse error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .algebra import CoefficientModule
from .complex import NonOrientable, homology, orient_coherently
from .cycle import (LabelTable, Labeler, build_cycle, check_cycle, corollary_report,
                    nontriviality)
from .errors import ParseError, PreconditionError
from .fiber import evaluate_cocycle_on_loop, fiber_euler_char, fiber_loop, fiber_over
from .generators import CATALOG, generate
from .maps import (SimplicialMap, pullback_cochain, subdivide_map, subdivision_retraction,
                   validate_map)
from .pq import pq_verify, reeb_to_pq
from .reeb import build_reeb, compare_with_sweep, sweep_oracle

EXIT_OK, EXIT_RESIDUAL, EXIT_PRECONDITION, EXIT_PARSE = 0, 2, 3, 4


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    code: int = EXIT_OK

    def add(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        self.lines.append(f"{key} {value}")

    def fail(self, code: int) -> None:
        self.code = max(self.code, code)

    def text(self) -> str:
        return "\n".join(self.lines + [f"exit {self.code}"]) + "\n"


@dataclass
class Inputs:
    map: SimplicialMap
    cocycle: object = None
    table: LabelTable | None = None
    subdivided: int = 0


def _simplex(s) -> str:
    return ",".join(map(str, s))


def threads() -> int:
    """Parallelism cap from ``REEBCYCLE_THREADS`` (0 = auto); computations here
    are single-threaded, so the value is validated and otherwise unused."""
    raw = os.environ.get("REEBCYCLE_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        raise PreconditionError(f"REEBCYCLE_THREADS must be an integer, got {raw!r}") from None
    if k < 0:
        raise PreconditionError("REEBCYCLE_THREADS must be nonnegative")
    return k


def _coeff(args) -> CoefficientModule | None:
    return io.coefficient_module(args.coeff) if args.coeff else None


def _load_map(args) -> Inputs:
    cocycle = None
    if args.gen:
        name, *params = args.gen.split()
        g = generate(name, *params)
        if g.map is None:
            raise PreconditionError(f"generator {name!r} does not produce a map")
        f, cocycle = g.map, g.cocycle
    else:
        if args.dir:
            d = Path(args.dir)
            src, tgt, mp = d / "source.cx", d / "target.cx", d / "map.map"
            if args.cocycle is None and (d / "dual.coc").exists():
                args.cocycle = str(d / "dual.coc")
        else:
            if not (args.source and args.target and args.map):
                raise PreconditionError("need --gen, --dir, or all of --source --target --map")
            src, tgt, mp = Path(args.source), Path(args.target), Path(args.map)
        S = io.parse_complex(io.read_text(src), str(src))
        T = io.parse_complex(io.read_text(tgt), str(tgt))
        f = io.parse_map(io.read_text(mp), S, T, str(mp))
    if getattr(args, "cocycle", None):
        cocycle = io.parse_cochain(io.read_text(args.cocycle), _coeff(args), args.cocycle)
    elif cocycle is not None and args.coeff:
        A = _coeff(args)
        if A.rank != cocycle.module.rank:
            raise PreconditionError("--coeff rank differs from the generated cocycle's module")
        cocycle = type(cocycle)(cocycle.degree, A,
                                {s: A.element(v.coords) for s, v in cocycle.values.items()})
    table = None
    lab = getattr(args, "labeler", None) or ""
    if lab.startswith("table:"):
        path = lab[len("table:"):]
        table = io.parse_label_table(io.read_text(path), path)
    inputs = Inputs(f, cocycle, table)
    for _ in range(getattr(args, "subdivide", 0) or 0):
        inputs = _subdivide(inputs)
    return inputs


def _subdivide(inp: Inputs) -> Inputs:
    f = inp.map
    sd = subdivide_map(f)
    z = inp.cocycle
    if z is not None:
        z = pullback_cochain(subdivision_retraction(sd.source, f.source), z)
    table = inp.table
    if table is not None:
        table = _lift_table(table, f, sd)
    return Inputs(sd.map, z, table, inp.subdivided + 1)


def _lift_table(table: LabelTable, f: SimplicialMap, sd) -> LabelTable:
    """Re-key user labels onto the subdivided target: each new top simplex lies
    in one old top simplex, and each new fiber component lies in one old one
    (found through the carrier of any of its pieces)."""
    W = build_reeb(f)
    g = sd.map
    tcar, scar = sd.target.carriers, sd.source.carriers
    out = {}
    for sigma2 in g.target[g.target.dim]:
        sigma = max((tcar[v] for v in sigma2), key=len)
        F = fiber_over(g, sigma2)
        for i, comp in enumerate(F.components):
            big = max((scar[v] for v in comp[0]), key=len)
            out[(sigma2, i)] = table.expression((sigma, W.components[sigma][big]))
    return LabelTable(table.module, out, None)


def _labeler(args, inp: Inputs) -> Labeler:
    kind = args.labeler or "cocycle"
    if kind == "cocycle":
        if inp.cocycle is None:
            raise PreconditionError("cocycle labeler needs --cocycle or a generator that supplies one")
        return Labeler.from_cocycle(inp.cocycle, rep=args.rep)
    if kind == "chi2":
        return Labeler.chi2()
    if kind.startswith("table:"):
        return Labeler.from_table(inp.table)
    raise PreconditionError(f"unknown labeler {kind!r}")


def _complex_lines(rep: Report, prefix: str, K) -> None:
    rep.add(f"{prefix}.dim", K.dim)
    rep.add(f"{prefix}.counts", " ".join(map(str, K.counts())))
    rep.add(f"{prefix}.euler", K.euler_characteristic())


def _map_lines(rep: Report, inp: Inputs) -> bool:
    f = inp.map
    _complex_lines(rep, "source", f.source)
    _complex_lines(rep, "target", f.target)
    rep.add("subdivide", inp.subdivided)
    mr = validate_map(f)
    rep.add("map.valid", mr.ok)
    rep.add("map.degenerate", mr.degenerate)
    for phi in mr.violations:
        rep.add("map.violation", _simplex(phi))
    if not mr.ok:
        rep.fail(EXIT_PRECONDITION)
    return mr.ok


def _reeb_lines(rep: Report, W, A, oracle: bool) -> None:
    counts = [0] * (W.n + 1)
    for c in W.cells:
        counts[c.dim] += 1
    rep.add("reeb.cells", " ".join(map(str, counts)))
    for j, c in enumerate(W.cells):
        rep.add("reeb.cell", f"c{j} dim={c.dim} target={_simplex(c.target)} "
                f"component={c.component} pieces={len(c.pieces)}")
    for lo, hi in sorted(W.poset.relation):
        rep.add("reeb.face", f"c{lo} c{hi}")
    for j, c in enumerate(W.cells):
        if c.boundary:
            rep.add("reeb.boundary", f"c{j}")
    for w in W.warnings:
        rep.add("reeb.warning", w)
    for k in range(W.n + 1):
        rep.add(f"reeb.H{k}", homology(W.order_complex, k, A))
    if oracle:
        if W.n != 1:
            rep.add("oracle", "skipped (target dimension is not 1)")
        else:
            G = sweep_oracle(W.map)
            ok = compare_with_sweep(W, G)
            rep.add("oracle.nodes", len(G.nodes))
            rep.add("oracle.arcs", len(G.arcs))
            rep.add("oracle.betti", " ".join(map(str, G.betti)))
            rep.add("oracle.match", ok)
            if not ok:
                rep.fail(EXIT_RESIDUAL)


def _cycle_lines(rep: Report, f, W, labeler: Labeler, A, decide: bool):
    c = build_cycle(f, W, labeler, module=A)
    rep.add("labeler", c.provenance)
    rep.add("coeff", c.module)
    for cell, x in sorted(c.coeffs.items()):
        info = W.cells[cell]
        norm = c.normalized[cell] if c.normalized is not None else "n/a"
        rep.add("label", f"c{cell} target={_simplex(info.target)} component={info.component} "
                f"value={x} normalized={norm}")
    chk = check_cycle(c, W)
    for w in chk.nonzero_walls():
        rep.add("residual", f"c{w} {chk.residual(w)}")
    for face, val in chk.internal:
        rep.add("residual.internal", f"{' '.join(f'c{x}' for x in face)} {val}")
    rep.add("residual.nonzero", len(chk.nonzero_walls()) + len(chk.internal))
    rep.add("cycle.passed", chk.passed)
    for cell in c.contract_violations:
        rep.add("contract.violation", f"c{cell}")
    if not chk.passed or c.contract_violations:
        rep.fail(EXIT_RESIDUAL)
    if decide and chk.passed:
        v = nontriviality(c, W, check=chk)
        rep.add(f"homology.H{W.n}", v.homology)
        rep.add("verdict", "nontrivial" if v.nontrivial else "trivial")
        rep.add("class", " ".join(f"c{k}:{x}" for k, x in v.coordinates) or "0")
    return c


# commands

def cmd_generate(args, rep: Report) -> None:
    g = generate(args.name, *args.params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    if g.map is not None:
        files["source.cx"] = io.write_complex(g.map.source)
        files["target.cx"] = io.write_complex(g.map.target)
        files["map.map"] = io.write_map(g.map)
    elif g.complex is not None:
        files["complex.cx"] = io.write_complex(g.complex)
    if g.cocycle is not None:
        files["dual.coc"] = io.write_cochain(g.cocycle)
    if g.pq is not None:
        files["model.pq"] = io.write_pq(g.pq)
    rep.add("generator", " ".join([args.name] + list(args.params)))
    for name, text in files.items():
        (out / name).write_text(text)
        rep.add("wrote", name)


def cmd_validate(args, rep: Report) -> None:
    inp = _load_map(args)
    if not _map_lines(rep, inp):
        return
    for name, K in (("source", inp.map.source), ("target", inp.map.target)):
        rep.add(f"{name}.closed", K.is_closed_pseudomanifold())
        o = orient_coherently(K) if _is_pm(K) else None
        rep.add(f"{name}.orientable", "n/a" if o is None else not isinstance(o, NonOrientable))
    if inp.cocycle is not None:
        ok = inp.cocycle.is_cocycle(inp.map.source)
        rep.add("cocycle.valid", ok)
        if not ok:
            rep.fail(EXIT_PRECONDITION)


def _is_pm(K) -> bool:
    try:
        K.check_pseudomanifold()
        return True
    except PreconditionError:
        return False


def cmd_reeb(args, rep: Report) -> None:
    inp = _load_map(args)
    if not _map_lines(rep, inp):
        return
    W = build_reeb(inp.map)
    _reeb_lines(rep, W, _coeff(args), args.oracle)


def cmd_fiber(args, rep: Report) -> None:
    inp = _load_map(args)
    if not _map_lines(rep, inp):
        return
    f = inp.map
    m, n = f.source.dim, f.target.dim
    o = orient_coherently(f.source) if m - n == 1 else None
    if isinstance(o, NonOrientable):
        o = None
    z = inp.cocycle
    if z is not None and not z.is_cocycle(f.source):
        raise PreconditionError("cochain is not a cocycle")
    for sigma in f.target[n]:
        F = fiber_over(f, sigma)
        rep.add("fiber", f"target={_simplex(sigma)} components={len(F.components)}")
        for i in range(len(F.components)):
            chi = fiber_euler_char(F, i)
            census = " ".join(f"d{k}={v}" for k, v in F.census(i).items())
            rep.add("fiber.component", f"target={_simplex(sigma)} component={i} {census} "
                    f"chi={chi} chi2={chi % 2}")
            if m - n == 1:
                loop = fiber_loop(f, sigma, i, orientation=o, rep=args.rep, fiber=F)
                edges = " ".join(f"{u}>{v}" for u, v in loop.edges) or "-"
                rep.add("fiber.loop", f"target={_simplex(sigma)} component={i} "
                        f"oriented={'true' if loop.oriented else 'false'} edges={edges}")
                if z is not None:
                    # the first cohomology of a circle with coefficients A is A itself,
                    # so the restriction is a coboundary exactly when the value is zero
                    val = evaluate_cocycle_on_loop(z, loop)
                    rep.add("fiber.eval", f"target={_simplex(sigma)} component={i} value={val} "
                            f"restriction-coboundary={'true' if val.is_zero() else 'false'}")


def cmd_cycle(args, rep: Report, decide: bool = False) -> None:
    inp = _load_map(args)
    if not _map_lines(rep, inp):
        return
    f = inp.map
    W = build_reeb(f)
    rep.add("reeb.cells", " ".join(str(sum(1 for c in W.cells if c.dim == k))
                                   for k in range(W.n + 1)))
    for w in W.warnings:
        rep.add("reeb.warning", w)
    if args.oracle and W.n == 1:
        ok = compare_with_sweep(W, sweep_oracle(f))
        rep.add("oracle.match", ok)
        if not ok:
            rep.fail(EXIT_RESIDUAL)
    c = _cycle_lines(rep, f, W, _labeler(args, inp), _coeff(args), decide)
    if decide and getattr(args, "export_pq", None):
        Path(args.export_pq).write_text(io.write_pq(reeb_to_pq(W, c)))
        rep.add("exported", Path(args.export_pq).name)
    if decide and getattr(args, "corollary", None):
        cr = corollary_report(f, W, args.corollary)
        rep.add("corollary.mode", cr.mode)
        rep.add("corollary.homology", cr.homology)
        rep.add("corollary.status", cr.status)


def cmd_verify(args, rep: Report) -> None:
    cmd_cycle(args, rep, decide=True)


def cmd_pq_verify(args, rep: Report) -> None:
    P = io.parse_pq(io.read_text(args.file), _coeff(args), args.file)
    r = pq_verify(P)
    rep.add("pq.dim", P.n)
    rep.add("pq.cells", " ".join(str(sum(1 for d in P.poset.dims if d == k))
                                 for k in range(P.n + 1)))
    rep.add("coeff", P.module)
    for c in P.top_cells:
        rep.add("label", f"{P.ids[c]} {P.labels[c]}")
    for w in r.walls:
        inc = " ".join(f"{P.ids[c]}:{'+' if s > 0 else '-'}" for c, s in w.incidence)
        rep.add("wall", f"{w.name} model={w.model}{' (inferred)' if w.inferred else ''} "
                f"incidence={inc or '-'} residual={w.residual} ok={'true' if w.ok else 'false'}")
    rep.add("walls.consistent", r.consistent)
    rep.add("cycle.passed", r.check.passed)
    for c in r.contract_violations:
        rep.add("contract.violation", P.ids[c])
    for c, g in sorted(P.gleams.items()):
        rep.add("gleam", f"{P.ids[c]} {g}")
    rep.add(f"homology.H{P.n}", r.homology)
    if r.verdict is not None:
        rep.add("verdict", "nontrivial" if r.verdict.nontrivial else "trivial")
    if not r.passed or r.contract_violations:
        rep.fail(EXIT_RESIDUAL)


def cmd_homology(args, rep: Report) -> None:
    A = _coeff(args)
    if args.complex:
        K = io.parse_complex(io.read_text(args.complex), args.complex)
        _complex_lines(rep, "complex", K)
        for k in range(K.dim + 1):
            rep.add(f"H{k}", homology(K, k, A))
        return
    inp = _load_map(args)
    if not _map_lines(rep, inp):
        return
    K = inp.map.source
    for k in range(K.dim + 1):
        rep.add(f"source.H{k}", homology(K, k, A))
    W = build_reeb(inp.map)
    for k in range(W.n + 1):
        rep.add(f"reeb.H{k}", homology(W.order_complex, k, A))


def _map_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gen", help="generator name and parameters, e.g. 'torus 3 3'")
    p.add_argument("--dir", help="directory holding source.cx, target.cx, map.map")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--map")
    p.add_argument("--cocycle")
    p.add_argument("--coeff", help="Z, Z2 or a module file")
    p.add_argument("--subdivide", type=int, default=0, metavar="R")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--rep", choices=("min", "max"), default="min",
                   help="representative vertex rule for fiber loops")
    p.add_argument("--report")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reebcycle")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write fixture files")
    g.add_argument("name", choices=CATALOG)
    g.add_argument("params", nargs="*")
    g.add_argument("--out", required=True)
    g.add_argument("--report")

    for name in ("validate", "reeb", "fiber", "cycle", "verify", "homology"):
        sp = sub.add_parser(name)
        _map_options(sp)
        if name in ("cycle", "verify"):
            sp.add_argument("--labeler", default="cocycle",
                            help="cocycle, chi2 or table:<file>")
        if name == "verify":
            sp.add_argument("--export-pq", dest="export_pq")
            sp.add_argument("--corollary", choices=("lagrangian", "spin", "spin-c"))
        if name == "homology":
            sp.add_argument("--complex")

    q = sub.add_parser("pq-verify")
    q.add_argument("file")
    q.add_argument("--coeff")
    q.add_argument("--report")
    return p


COMMANDS = {
    "generate": cmd_generate, "validate": cmd_validate, "reeb": cmd_reeb, "fiber": cmd_fiber,
    "cycle": cmd_cycle, "verify": cmd_verify, "pq-verify": cmd_pq_verify,
    "homology": cmd_homology,
}


def run(argv: list[str]) -> Report:
    args = build_parser().parse_args(argv)
    rep = Report()
    rep.add("command", args.command)
    try:
        threads()
        if getattr(args, "subdivide", 0) < 0:
            raise PreconditionError("--subdivide must be nonnegative")
        COMMANDS[args.command](args, rep)
    except ParseError as e:
        rep.add("error", e)
        rep.fail(EXIT_PARSE)
    except (PreconditionError, ValueError) as e:
        rep.add("error", e)
        rep.fail(EXIT_PRECONDITION)
    if getattr(args, "report", None):
        Path(args.report).write_text(rep.text())
    return rep


def main(argv: list[str] | None = None) -> int:
    rep = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(rep.text())
    return rep.code


if __name__ == "__main__":
    raise SystemExit(main())
