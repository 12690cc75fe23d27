"""Prove random sequents and check every verdict against small models.

    python3 scripts/soundness_sweep.py --per-functor 125 --seed 2024
"""

import argparse
import random
import time
from dataclasses import dataclass

from ordmoss.calculus import AssemblyError, ProofTree, Prover, check_proof
from ordmoss.functor import Const, Id, Low, Prod, Up
from ordmoss.logic import Language
from ordmoss.model import enumerate_models
from ordmoss.poset import FinPoset, chain
from ordmoss.randgen import random_sequent
from ordmoss.syntax import show_functor


@dataclass
class SweepConfig:
    per_functor: int = 125
    seed: int = 2024
    depth: int = 2
    max_states: int = 2


FUNCTORS = [Low(Id()), Up(Id()), Prod(Const(chain(2)), Id()), Low(Prod(Id(), Id()))]
ATOMS = FinPoset(["p", "q"], name="At")


def run(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    failures = 0
    for f in FUNCTORS:
        t0 = time.perf_counter()
        lang = Language(ATOMS, f)
        prover = Prover(lang)
        models = list(enumerate_models(f, cfg.max_states, ATOMS))
        width = 1 if f == Low(Prod(Id(), Id())) else 2
        proved = refuted = gaps = bad = 0
        for _ in range(cfg.per_functor):
            s = random_sequent(rng, lang, depth=cfg.depth, max_width=width)
            try:
                r = prover.prove(s)
            except AssemblyError:
                gaps += 1
                continue
            if isinstance(r, ProofTree):
                proved += 1
                refuting = any(m.refutes(x, s.lhs, s.rhs) for m in models for x in m.states())
                bad += refuting or not check_proof(lang, r)
            else:
                refuted += 1
                bad += not r.model.refutes(r.state, s.lhs, s.rhs)
        failures += bad
        print(f"{show_functor(f):20s} proved {proved:4d}  refuted {refuted:4d}  gaps {gaps}  "
              f"violations {bad}  ({time.perf_counter() - t0:.1f}s, {len(models)} models)")
    return failures


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-functor", type=int, default=SweepConfig.per_functor)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--depth", type=int, default=SweepConfig.depth)
    ap.add_argument("--max-states", type=int, default=SweepConfig.max_states)
    a = ap.parse_args()
    cfg = SweepConfig(a.per_functor, a.seed, a.depth, a.max_states)
    raise SystemExit(1 if run(cfg) else 0)


if __name__ == "__main__":
    main()
