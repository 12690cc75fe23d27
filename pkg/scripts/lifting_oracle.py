"""Check inductive relation lifting against the span construction for
every monotone relation between small posets.

    python3 scripts/lifting_oracle.py --max-size 2 --functor low --functor id*id
"""

import argparse
import time
from dataclasses import dataclass, field

from ordmoss.catalogue import CATALOGUE
from ordmoss.functor import lift_generic, lift_inductive
from ordmoss.poset import FinPoset, posets_up_to_iso
from ordmoss.relation import all_relations


@dataclass
class OracleConfig:
    max_size: int = 3
    functors: list = field(default_factory=list)


def run(cfg: OracleConfig) -> int:
    posets = [FinPoset([])] + [p for n in range(1, cfg.max_size + 1) for p in posets_up_to_iso(n)]
    relations = [r for a in posets for b in posets for r in all_relations(a, b)]
    chosen = [(n, f) for n, f in CATALOGUE if not cfg.functors or n in cfg.functors]
    total = 0
    for name, f in chosen:
        t0 = time.perf_counter()
        bad = sum(lift_generic(f, r) != lift_inductive(f, r) for r in relations)
        total += bad
        print(f"{name:14s} {len(relations)} relations, {bad} mismatches ({time.perf_counter() - t0:.1f}s)")
    return total


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=OracleConfig.max_size)
    ap.add_argument("--functor", action="append", default=[], choices=[n for n, _ in CATALOGUE])
    a = ap.parse_args()
    raise SystemExit(1 if run(OracleConfig(a.max_size, a.functor)) else 0)


if __name__ == "__main__":
    main()
