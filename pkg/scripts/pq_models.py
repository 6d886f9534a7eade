"""Verify the bundled pseudo-quotient models (or any .pq files) and list every
labeling that passes the wall rules and the cycle check.

    python3 scripts/pq_models.py
    python3 scripts/pq_models.py --files my_model.pq
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from _common import parse_config, print_table
from reebcycle.pq import (consistent_labelings, load_pq, pq_verify, round_fold_s2xs2,
                          special_generic_disc)


@dataclass(frozen=True)
class ModelConfig:
    """Pseudo-quotient model checks."""
    files: tuple = ()
    enumerate_labels: bool = True


def main(argv=None) -> int:
    cfg = parse_config(ModelConfig, argv)
    models = {"round-fold-s2xs2": round_fold_s2xs2(), "special-generic-disc": special_generic_disc()}
    for path in cfg.files:
        models[Path(path).name] = load_pq(Path(path).read_text(), source=path)
    rows, code = [], 0
    for name, P in models.items():
        R = pq_verify(P)
        bad = [w.name for w in R.walls if not w.ok]
        rows.append([name, str(P.module), str(R.homology), R.consistent, R.check.passed,
                     ",".join(bad) or "-",
                     ("nontrivial" if R.verdict.nontrivial else "trivial") if R.verdict else "-"])
        code = code or (0 if R.passed else 2)
    print_table(["model", "coeff", "H_n", "walls ok", "cycle", "failing walls", "verdict"], rows)
    if cfg.enumerate_labels:
        for name, P in models.items():
            try:
                found = consistent_labelings(P)
            except ValueError as e:
                print(f"\n{name}: enumeration skipped ({e})")
                continue
            print(f"\n{name}: {len(found)} consistent labeling(s)")
            for L in found:
                print("  " + " ".join(f"{P.ids[c]}={x}" for c, x in sorted(L.items())))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
