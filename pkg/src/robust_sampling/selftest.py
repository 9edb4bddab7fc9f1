"""Quick cross-checks of the fast paths against brute-force oracles."""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

from .adversaries import ordering_holds
from .advisor import RobustnessSpec, reservoir_k_continuous, reservoir_k_robust
from .game import GameConfig, play
from .oracles import bernoulli_replay, brute_force_discrepancy
from .sampling import SamplerConfig, sampler_init
from .set_systems import SetSystem, max_discrepancy


def _sweep_matches_brute_force(rng: random.Random, instances: int = 60) -> bool:
    for _ in range(instances):
        kind = rng.choice(["prefix", "intervals", "singletons", "boxes"])
        if kind == "boxes":
            system = SetSystem.boxes(rng.randint(1, 4), rng.randint(1, 2))
        else:
            system = SetSystem(kind, rng.randint(1, 30))
        N = system.universe_size
        stream = [rng.randint(1, N) for _ in range(rng.randint(1, 30))]
        sample = rng.sample(stream, rng.randint(1, len(stream)))
        if max_discrepancy(sample, stream, system)[0] != brute_force_discrepancy(sample, stream, system):
            return False
    return True


def _bernoulli_replay() -> bool:
    stream = list(range(1, 41))
    s = sampler_init(SamplerConfig.bernoulli(Fraction(1, 2), rng_seed=7))
    for x in stream:
        s.step(x)
    return s.sample() == bernoulli_replay(stream, Fraction(1, 2), 7)


def _advisor_values() -> bool:
    k = reservoir_k_robust(RobustnessSpec(Fraction(1, 5), Fraction(1, 10), 5000, 10**4))
    kc = reservoir_k_continuous(RobustnessSpec(Fraction(1, 5), Fraction(1, 5), 2000, 10**4))
    return k == 611 and kc == 2892


def _attack_sorted_prefix() -> bool:
    n = 50
    cfg = GameConfig(n, Fraction(2, 5), SetSystem.prefix(2**60), SamplerConfig.bernoulli(Fraction(1, 10)), "attack")
    for seed in range(20):
        t = play(replace(cfg, trial_seed=seed), verify=False)
        if t.aborted:
            continue
        if not ordering_holds(t.elements, t.sampled):
            return False
        if sorted(t.sample) != sorted(t.elements)[: len(t.sample)]:
            return False
    return True


def _reservoir_fill() -> bool:
    s = sampler_init(SamplerConfig.reservoir(3, rng_seed=7))
    for x in (5, 6, 7):
        s.step(x)
    return s.sample() == [5, 6, 7]


CHECKS = {
    "sweep equals brute-force enumeration": lambda: _sweep_matches_brute_force(random.Random(20240601)),
    "bernoulli sampler equals straight-line replay": _bernoulli_replay,
    "reservoir keeps the first k elements": _reservoir_fill,
    "advisor reproduces k=611 and k_cont=2892": _advisor_values,
    "attack leaves the smallest elements sampled": _attack_sorted_prefix,
}


def run_selftest() -> list[tuple[str, bool]]:
    return [(name, bool(check())) for name, check in CHECKS.items()]
