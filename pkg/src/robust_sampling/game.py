"""The adaptive sampling game, its continuous variant, and a Monte Carlo driver."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from statistics import NormalDist

from .adversaries import AdversaryContext, AttackExhausted, make_adversary
from .rng import derive_seed
from .sampling import ConfigError, SamplerConfig, SamplerKind, sampler_init
from .set_systems import Box, Interval, Range, SetSystem, SystemKind, density, is_eps_approximation


class EstimationError(RuntimeError):
    """No valid trial was available to estimate a failure probability."""


@dataclass(frozen=True)
class GameConfig:
    n: int
    eps: Fraction
    system: SetSystem
    sampler: SamplerConfig
    adversary: str = "attack"
    adversary_params: dict = field(default_factory=dict)
    continuous: bool = False
    checkpoints: bool = False
    trial_seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n: stream length must be a positive integer, got {self.n}")
        eps = Fraction(self.eps)
        if not 0 < eps < 1:
            raise ConfigError(f"eps: must lie strictly between 0 and 1, got {eps}")
        object.__setattr__(self, "eps", eps)

    def to_dict(self) -> dict:
        s = self.sampler
        return {
            "n": self.n,
            "eps": str(self.eps),
            "system": self.system.to_dict(),
            "sampler": {"kind": s.kind.value, "p": None if s.p is None else str(s.p), "k": s.k},
            "adversary": self.adversary,
            "adversary_params": self.adversary_params,
            "continuous": self.continuous,
            "checkpoints": self.checkpoints,
            "trial_seed": str(self.trial_seed),
        }


@dataclass
class GameTranscript:
    elements: list[int]
    sampled: list[bool]
    sample: list[int]
    verdict: int | None
    aborted: bool = False
    failure_round: int | None = None
    gap: Fraction | None = None
    witness: Range | None = None
    digests: list[str] | None = None
    sizes: list[int] | None = None

    @property
    def valid(self) -> bool:
        return not self.aborted

    @property
    def rounds(self) -> int:
        return len(self.elements)

    def round_lines(self) -> list[str]:
        """One JSON object per executed round."""
        lines = []
        for i, (x, s) in enumerate(zip(self.elements, self.sampled)):
            rec = {"round": i + 1, "element": str(x), "sampled": s}
            if self.sizes is not None:
                rec["sample_size"] = self.sizes[i]
            if self.digests is not None:
                rec["digest"] = self.digests[i]
            lines.append(json.dumps(rec, sort_keys=True))
        return lines

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "valid": self.valid,
            "aborted": self.aborted,
            "rounds": self.rounds,
            "failure_round": self.failure_round,
            "gap": None if self.gap is None else str(self.gap),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "sample": [str(x) for x in self.sample],
            "stream": [str(x) for x in self.elements],
            "sampled": self.sampled,
        }


def _empty_sample_witness(system: SetSystem, stream) -> tuple[Fraction, Range]:
    # an empty sample represents nothing; report the tightest range around x_1
    x = stream[0]
    if system.kind is SystemKind.BOXES:
        from .set_systems import decode_point

        c = decode_point(x, system.m, system.d)
        r = Box(c, c, system.m)
    elif system.kind is SystemKind.PREFIX:
        r = Interval(1, x)
    else:
        r = Interval(x, x)
    return density(r, stream), r


def checkpoint_rounds(start: int, n: int, beta: Fraction) -> list[int]:
    """Rounds start = i_1 < i_2 < ... <= n with i_{j+1} = floor((1 + beta) i_j).

    Steps of at least one round are enforced while ``beta * i_j < 1``.
    """
    beta = Fraction(beta)
    out = []
    i = max(1, start)
    while i < n:
        out.append(i)
        i = max(i + 1, math.floor((1 + beta) * i))
    out.append(n)
    return out


def play(cfg: GameConfig, record: bool = False, verify: bool = True) -> GameTranscript:
    """Run one game.

    With ``verify=False`` no approximation checks are made (verdict stays
    None); used by experiments that only need the stream and the sample.
    """
    sampler = sampler_init(cfg.sampler.with_seed(derive_seed(cfg.trial_seed, "sampler")))
    adversary = make_adversary(cfg.adversary, seed=derive_seed(cfg.trial_seed, "adversary"), **cfg.adversary_params)
    system, N, n = cfg.system, cfg.system.universe_size, cfg.n
    state = sampler.state
    elements: list[int] = []
    sampled: list[bool] = []
    digests = [] if record else None
    sizes = [] if record else None
    ctx = AdversaryContext(elements, state, 0, n, N, cfg.eps, cfg.sampler)

    check_at = None
    if cfg.continuous and cfg.checkpoints:
        start = cfg.sampler.k if cfg.sampler.kind is SamplerKind.RESERVOIR else 1
        check_at = set(checkpoint_rounds(min(start, n), n, cfg.eps / 4))

    step = sampler.step
    for i in range(1, n + 1):
        ctx.round = i
        try:
            x = adversary.next(ctx)
        except AttackExhausted:
            return GameTranscript(elements, sampled, list(state.held), None, aborted=True, digests=digests, sizes=sizes)
        if not (type(x) is int and 1 <= x <= N):
            raise ValueError(f"adversary submitted {x!r}, outside the universe [1, {N}]")
        elements.append(x)
        sampled.append(step(x))
        if record:
            digests.append(state.digest())
            sizes.append(len(state.held))
        if cfg.continuous and verify and (check_at is None or i in check_at):
            held = state.held
            if len(held) == i:
                continue  # S_i = X_i
            if not held:
                gap, witness = _empty_sample_witness(system, elements)
                return GameTranscript(elements, sampled, [], 0, failure_round=i, gap=gap, witness=witness, digests=digests, sizes=sizes)
            res = is_eps_approximation(held, elements, system, cfg.eps)
            if not res.ok:
                return GameTranscript(
                    elements, sampled, list(held), 0, failure_round=i, gap=res.gap, witness=res.witness, digests=digests, sizes=sizes
                )

    t = GameTranscript(elements, sampled, list(state.held), None, digests=digests, sizes=sizes)
    if not verify:
        return t
    if cfg.continuous:
        t.verdict = 1
        return t
    t.verdict, t.gap, t.witness = final_verdict(t.sample, elements, system, cfg.eps)
    return t


def final_verdict(sample, stream, system: SetSystem, eps) -> tuple[int, Fraction, Range]:
    if not sample:
        gap, witness = _empty_sample_witness(system, stream)
        return 0, gap, witness
    res = is_eps_approximation(sample, stream, system, eps)
    return int(res.ok), res.gap, res.witness


def run_adaptive_game(cfg: GameConfig, record: bool = False) -> GameTranscript:
    if cfg.continuous:
        raise ConfigError("continuous: use run_continuous_game")
    return play(cfg, record=record)


def run_continuous_game(cfg: GameConfig, record: bool = False) -> GameTranscript:
    if not cfg.continuous:
        cfg = replace(cfg, continuous=True)
    return play(cfg, record=record)


# -- Monte Carlo ---------------------------------------------------------------

_Z95 = NormalDist().inv_cdf(0.975)


def wilson_interval(failures: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("Wilson interval needs at least one trial")
    p = failures / trials
    denom = 1 + z * z / trials
    centre = p + z * z / (2 * trials)
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if failures == 0 else max(0.0, (centre - half) / denom)
    hi = 1.0 if failures == trials else min(1.0, (centre + half) / denom)
    return lo, hi


@dataclass(frozen=True)
class Summary:
    trials: int
    valid_trials: int
    failures: int
    aborts: int
    delta_hat: Fraction
    wilson_interval: tuple[float, float]


def trial_config(cfg: GameConfig, master_seed: int, index: int) -> GameConfig:
    return replace(cfg, trial_seed=derive_seed(master_seed, index))


def _trial_outcome(args) -> tuple[bool, int | None]:
    cfg, master_seed, index = args
    t = play(trial_config(cfg, master_seed, index))
    return t.aborted, t.verdict


def monte_carlo(cfg: GameConfig, trials: int, master_seed: int, workers: int = 1) -> Summary:
    """Estimate the failure probability of ``cfg`` over independent seeded games."""
    if trials < 1:
        raise ConfigError("trials: must be at least 1")
    jobs = [(cfg, master_seed, i) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_trial_outcome, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        outcomes = [_trial_outcome(j) for j in jobs]
    aborts = sum(1 for aborted, _ in outcomes if aborted)
    valid = trials - aborts
    if valid == 0:
        raise EstimationError(f"all {trials} trials were invalid (attack aborted)")
    failures = sum(1 for aborted, v in outcomes if not aborted and v == 0)
    return Summary(trials, valid, failures, aborts, Fraction(failures, valid), wilson_interval(failures, valid))
