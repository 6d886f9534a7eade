"""Stability sweep: apply random stellar moves (and sometimes a barycentric
subdivision) to each fixture, then check that interior walls stay balanced,
that single-label perturbations hit exactly the perturbed cell's walls, and
that the verdict and top homology do not change.

    python3 scripts/subdivision_sweep.py --variants 20
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from _common import FIXTURES, fixture, parse_config, print_table
from reebcycle.cycle import Labeler, build_cycle, check_cycle, nontriviality
from reebcycle.generators import random_variant
from reebcycle.reeb import build_reeb


@dataclass(frozen=True)
class SweepConfig:
    """Random-variant sweep over the fixture catalog."""
    fixtures: tuple = tuple(FIXTURES)
    variants: int = 20
    moves: int = 3
    seed: int = 0


def balance(f, L):
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    chk = check_cycle(c, W)
    exact = 0
    for cell in W.top_cells:
        pert = check_cycle(c.perturbed(cell), W)
        walls = sorted(w for w in W.poset.below[cell] if W.poset.dims[w] == W.n - 1)
        exact += pert.nonzero_walls() == walls and not pert.internal
    v = nontriviality(c, W, check=chk) if chk.passed else None
    return chk.passed, exact == len(W.top_cells), v


def main(argv=None) -> int:
    cfg = parse_config(SweepConfig, argv)
    rows, failures = [], 0
    for name in cfg.fixtures:
        t0 = time.perf_counter()
        f, L = fixture(name, cfg.seed)
        _, _, v0 = balance(f, L)
        balanced = localized = stable = 0
        for k in range(cfg.variants):
            var = random_variant(f, cfg.seed * 1000 + k, moves=cfg.moves)
            Lv = Labeler.from_cocycle(var.pull(L.cocycle)) if L.cocycle is not None else L
            ok, loc, v = balance(var.map, Lv)
            balanced += ok
            localized += loc
            stable += v is not None and (v.nontrivial, v.homology) == (v0.nontrivial, v0.homology)
        failures += 3 * cfg.variants - balanced - localized - stable
        rows.append([name, "nontrivial" if v0.nontrivial else "trivial", str(v0.homology),
                     f"{balanced}/{cfg.variants}", f"{localized}/{cfg.variants}",
                     f"{stable}/{cfg.variants}", f"{time.perf_counter() - t0:.1f}"])
    print_table(["fixture", "verdict", "H_n", "balanced", "perturbation", "verdict stable",
                 "seconds"], rows)
    return 0 if failures == 0 else 2


if __name__ == "__main__":
    raise SystemExit(main())
