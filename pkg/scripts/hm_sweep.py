"""Compare similarity with depth-bounded modal strength on small models.

For each pair of states, report whether "y simulates x" agrees with
"every formula of depth <= k true at x is true at y".  With --depth 0 the
depth is taken per model pair as the number of approximant stages, where
the two notions must coincide.
"""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from ordmoss.functor import Const, Id, Low, Prod
from ordmoss.model import enumerate_models
from ordmoss.poset import chain, discrete
from ordmoss.randgen import random_model
from ordmoss.simulation import (approximants, distinguishing_formula, formula_pool, greatest_simulation,
                                modally_stronger_upto)


@dataclass
class HMConfig:
    depth: int = 2
    max_states: int = 2
    random_models: int = 12
    seed: int = 5
    examples: int = 3


def pairs(cfg: HMConfig):
    atoms = discrete(["p"], name="At")
    for f in [Low(Id()), Prod(Const(chain(2)), Id())]:
        small = list(enumerate_models(f, cfg.max_states, atoms))
        yield from ((m, n) for m in small for n in small)
        rng = random.Random(cfg.seed)
        sample = [random_model(rng, f, atoms, max_states=4) for _ in range(cfg.random_models)]
        yield from ((m, n) for m in sample for n in sample)


def run(cfg: HMConfig) -> int:
    counts = Counter()
    shown = 0
    for m, n in pairs(cfg):
        k = cfg.depth or len(approximants(m, n))
        sim = greatest_simulation(m, n).pairs
        pool = formula_pool(m.lang, k, [m, n])
        for x in m.states():
            for y in n.states():
                s, h = (x, y) in sim, modally_stronger_upto(m, x, n, y, k, pool)
                counts[(s, h)] += 1
                if s != h and shown < cfg.examples:
                    shown += 1
                    a = distinguishing_formula(m, x, n, y)
                    print(f"mismatch: simulated={s}, separator of depth {m.lang.depth(a)}: {m.lang.show(a)}")
    print(f"simulated and stronger:      {counts[(True, True)]}")
    print(f"not simulated, not stronger: {counts[(False, False)]}")
    print(f"not simulated, but stronger: {counts[(False, True)]}")
    print(f"simulated, but not stronger: {counts[(True, False)]}")
    return counts[(False, True)] + counts[(True, False)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=HMConfig.depth, help="0 means per-pair stage count")
    ap.add_argument("--max-states", type=int, default=HMConfig.max_states)
    ap.add_argument("--random-models", type=int, default=HMConfig.random_models)
    ap.add_argument("--seed", type=int, default=HMConfig.seed)
    a = ap.parse_args()
    raise SystemExit(1 if run(HMConfig(a.depth, a.max_states, a.random_models, a.seed)) else 0)


if __name__ == "__main__":
    main()
