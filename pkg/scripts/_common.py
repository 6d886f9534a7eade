"""Shared helpers for the experiment scripts: dataclass configs exposed as
command-line flags, the fixture table, and a plain-text table printer."""
from __future__ import annotations

import argparse
import dataclasses
import random
import sys
from pathlib import Path
from typing import Callable

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from reebcycle.algebra import CoefficientModule  # noqa: E402
from reebcycle.complex import Cochain  # noqa: E402
from reebcycle.cycle import Labeler  # noqa: E402
from reebcycle.generators import (circle_generator_cocycle, dual_cocycle_torus,  # noqa: E402
                                  octahedron_height, rp2xS1, sphere3_height, t3, torus,
                                  torus_height, two_bump_sphere)
from reebcycle.maps import SimplicialMap, pullback_cochain  # noqa: E402

Z = CoefficientModule.integers()


def parse_config(cls, argv=None):
    """Build an argparse parser from a dataclass; tuple fields take several values."""
    p = argparse.ArgumentParser(description=(cls.__doc__ or "").strip())
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            p.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, tuple):
            kind = type(default[0]) if default else str
            p.add_argument(flag, nargs="+", type=kind, default=default)
        else:
            p.add_argument(flag, type=type(default) if default is not None else str,
                           default=default)
    ns = p.parse_args(argv)
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in vars(ns).items()})


def random_coboundary(f: SimplicialMap, seed: int) -> Cochain:
    rng = random.Random(seed)
    K = f.source
    return Cochain(0, Z, {s: Z.element(rng.randint(-4, 4)) for s in K[0]}).coboundary(K)


def _tube(_f):
    return pullback_cochain(torus(3, 6).first, circle_generator_cocycle(3))


# name -> (map factory, labeler kind, cocycle factory or None for a random coboundary)
FIXTURES: dict[str, tuple[Callable[[], SimplicialMap], str, Callable | None]] = {
    "torus-projection": (lambda: torus(3, 3).first, "cocycle", lambda f: dual_cocycle_torus(3, 3)),
    "torus-projection-4x4": (lambda: torus(4, 4).first, "cocycle",
                             lambda f: dual_cocycle_torus(4, 4)),
    "torus-height": (torus_height, "cocycle", _tube),
    "octahedron-height": (octahedron_height, "cocycle", None),
    "two-bump-sphere": (two_bump_sphere, "cocycle", None),
    "rp2xS1-projection": (lambda: rp2xS1(3).second, "chi2", None),
    "t3-projection": (lambda: t3().second, "chi2", None),
    "sphere3-height": (sphere3_height, "chi2", None),
}


def fixture(name: str, seed: int = 0) -> tuple[SimplicialMap, Labeler]:
    make, kind, cocycle = FIXTURES[name]
    f = make()
    if kind == "chi2":
        return f, Labeler.chi2()
    z = cocycle(f) if cocycle else random_coboundary(f, seed)
    return f, Labeler.from_cocycle(z)


def print_table(header: list[str], rows: list[list]) -> None:
    cells = [header] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for k, r in enumerate(cells):
        print("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
        if k == 0:
            print("  ".join("-" * w for w in widths))
