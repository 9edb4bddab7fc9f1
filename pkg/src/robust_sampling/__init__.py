"""Bernoulli and reservoir sampling under adaptive adversaries."""

from .adversaries import AttackAdversary, AttackExhausted, AttackState, attack_step, midpoint_attack_step
from .advisor import (
    RobustnessSpec,
    application_params,
    attack_regime,
    bernoulli_p_robust,
    reservoir_k_continuous,
    reservoir_k_robust,
    single_range_bounds,
)
from .game import GameConfig, GameTranscript, monte_carlo, play, run_adaptive_game, run_continuous_game
from .sampling import ConfigError, SampleState, SamplerConfig, sampler_init
from .set_systems import Box, DomainError, Interval, SetSystem, density, is_eps_approximation, max_discrepancy

__version__ = "0.1.0"
