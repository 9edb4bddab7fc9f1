"""Command-line front end.

Exit codes: 0 success, 1 usage/configuration error, 2 experiment failure
(every trial invalid, unwritable output).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import applications as apps
from .adversaries import STRATEGIES, ordering_holds
from .advisor import (
    RobustnessSpec,
    attack_regime,
    bernoulli_p_robust,
    default_attack_universe,
    reservoir_k_continuous,
    reservoir_k_robust,
)
from .game import EstimationError, GameConfig, monte_carlo, play
from .results import emit_results, write_text
from .sampling import ConfigError, SamplerConfig
from .selftest import run_selftest
from .set_systems import Interval, SetSystem

SEED_ENV = "ROBUST_SAMPLER_SEED"

# hard defaults, applied after the JSON config file and before nothing else
DEFAULTS = {
    "sampler": "reservoir",
    "n": 1000,
    "eps": "0.2",
    "system": "prefix",
    "adversary": "attack",
    "on_exhaust": "abort",
    "const": 1,
    "trials": 100,
    "format": "json",
    "workers": 1,
    "continuous": False,
    "checkpoints": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _game_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so config-file values can fill the gaps
    p.add_argument("--config", help="JSON file with flag values (flags win)")
    p.add_argument("--sampler", choices=["bernoulli", "reservoir"])
    p.add_argument("--p", type=_rational, help="Bernoulli inclusion probability")
    p.add_argument("--k", type=int, help="reservoir capacity")
    p.add_argument("--n", type=int, help="stream length")
    p.add_argument("--N", type=int, help="universe size (default depends on the adversary)")
    p.add_argument("--eps", type=_rational)
    p.add_argument("--delta", type=_rational, help="target failure probability (reported only)")
    p.add_argument("--system", choices=["prefix", "intervals", "singletons", "boxes"])
    p.add_argument("--m", type=int, help="box side length")
    p.add_argument("--d", type=int, help="box dimension")
    p.add_argument("--adversary", choices=STRATEGIES)
    p.add_argument("--const", type=int, help="element submitted by the constant adversary")
    p.add_argument("--on-exhaust", dest="on_exhaust", choices=["abort", "saturate"])
    p.add_argument("--continuous", action="store_true", default=None)
    p.add_argument("--checkpoints", action="store_true", default=None, help="continuous mode: check only at checkpoint rounds")
    p.add_argument("--seed", type=int, help=f"master seed (falls back to ${SEED_ENV})")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["json", "csv", "jsonl"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="robust-sampling", description="Adversarially robust stream sampling experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("game", help="play one game and write its transcript")
    _game_flags(g)

    mc = sub.add_parser("mc", help="Monte Carlo estimate of the failure probability")
    _game_flags(mc)
    mc.add_argument("--trials", type=int)
    mc.add_argument("--workers", type=int)

    adv = sub.add_parser("advise", help="parameter thresholds")
    adv.add_argument("--eps", type=_rational, required=True)
    adv.add_argument("--delta", type=_rational, required=True)
    adv.add_argument("--card", type=int, required=True, help="|R|, the number of ranges")
    adv.add_argument("--n", type=int)
    adv.add_argument("--N", type=int, help="universe size for the attack regime")
    adv.add_argument("--c-continuous", type=_rational, default=Fraction(8))
    adv.add_argument("--c-attack", type=_rational, default=Fraction(1, 12))

    demo = sub.add_parser("attack-demo", help="run the binary-search attack and check the sorted-prefix property")
    _game_flags(demo)

    app = sub.add_parser("app", help="answer a query from a sample file")
    app.add_argument("query", choices=["rank", "quantile", "heavy-hitters", "range-count", "center"])
    app.add_argument("--sample", required=True, help='JSON file: a list of elements or {"sample": [...], "n": ...}')
    app.add_argument("--n", type=int, help="stream length (overrides the file)")
    app.add_argument("--target", type=int)
    app.add_argument("--q", type=_rational)
    app.add_argument("--alpha", type=_rational)
    app.add_argument("--eps", type=_rational)
    app.add_argument("--lo", type=int)
    app.add_argument("--hi", type=int)
    app.add_argument("--beta", type=_rational)

    sub.add_parser("selftest", help="cross-check fast paths against brute-force oracles")
    return parser


def _merged(args: argparse.Namespace) -> dict:
    values = {}
    if getattr(args, "config", None):
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: cannot read {args.config}: {exc}")
    for key, val in vars(args).items():
        if val is not None:
            values[key] = val
    for key, val in DEFAULTS.items():
        values.setdefault(key, val)
    if values.get("seed") is None:
        env = os.environ.get(SEED_ENV)
        try:
            values["seed"] = int(env) if env is not None else 0
        except ValueError:
            raise UsageError(f"seed: ${SEED_ENV} is not an integer: {env!r}")
    return values


def config_from(values: dict) -> GameConfig:
    def rat(key):
        try:
            return Fraction(str(values[key]))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"{key}: not a rational number: {values[key]!r}")

    n = int(values["n"])
    adversary = values["adversary"]
    system_kind = values["system"]
    if system_kind == "boxes":
        if not values.get("m") or not values.get("d"):
            raise UsageError("m: boxes need --m and --d")
        system = SetSystem.boxes(int(values["m"]), int(values["d"]))
    else:
        N = values.get("N")
        if N is None:
            if adversary == "attack":
                N = default_attack_universe(n)
            elif adversary == "midpoint-attack":
                N = 2**n
            else:
                N = max(n, 1)
        system = SetSystem(system_kind, int(N))

    if values["sampler"] == "bernoulli":
        if values.get("p") is None:
            raise UsageError("p: --sampler bernoulli needs --p")
        sampler = SamplerConfig.bernoulli(rat("p"))
    else:
        if values.get("k") is None:
            raise UsageError("k: --sampler reservoir needs --k")
        sampler = SamplerConfig.reservoir(int(values["k"]))

    params = {}
    if adversary == "attack":
        params["on_exhaust"] = values["on_exhaust"]
    elif adversary == "constant":
        params["c"] = int(values["const"])
    return GameConfig(
        n,
        rat("eps"),
        system,
        sampler,
        adversary,
        params,
        continuous=bool(values["continuous"]),
        checkpoints=bool(values["checkpoints"]),
        trial_seed=int(values["seed"]),
    )


def _cmd_game(values: dict) -> int:
    cfg = config_from(values)
    t = play(cfg, record=True)
    if values["format"] == "jsonl":
        text = "".join(line + "\n" for line in t.round_lines())
    else:
        text = json.dumps({"config": cfg.to_dict(), "transcript": t.to_dict()}, sort_keys=True) + "\n"
    write_text(text, values.get("out"))
    if values.get("out"):
        print(json.dumps({"verdict": t.verdict, "rounds": t.rounds, "aborted": t.aborted}, sort_keys=True))
    return 0


def _cmd_mc(values: dict) -> int:
    cfg = config_from(values)
    trials = int(values["trials"])
    if trials < 1:
        raise UsageError("trials: must be at least 1")
    summary = monte_carlo(cfg, trials, int(values["seed"]), workers=int(values["workers"]))
    emit_results(summary, values["format"], values.get("out"), cfg, int(values["seed"]), values.get("delta"))
    return 0


def _cmd_advise(args) -> int:
    n = args.n or 1
    spec = RobustnessSpec(args.eps, args.delta, n, args.card)
    out = {
        "p": str(bernoulli_p_robust(spec)) if args.n else None,
        "p_float": float(bernoulli_p_robust(spec)) if args.n else None,
        "k": reservoir_k_robust(spec),
        "k_continuous": reservoir_k_continuous(spec, args.c_continuous) if args.n else None,
        "attack_thresholds": None,
        "universe_ok": None,
    }
    if args.n:
        N = args.N or args.card
        reg = attack_regime(spec, N, args.c_attack)
        out["attack_thresholds"] = {
            "bernoulli_p": float(reg.bernoulli_p_threshold),
            "reservoir_k": float(reg.reservoir_k_threshold),
            "N": str(N),
        }
        out["universe_ok"] = reg.universe_ok
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_attack_demo(values: dict) -> int:
    values.setdefault("adversary", "attack")
    values["adversary"] = "attack"
    cfg = config_from(values)
    t = play(cfg)
    report = {
        "n": cfg.n,
        "N": str(cfg.system.universe_size),
        "aborted": t.aborted,
        "rounds": t.rounds,
        "sample_size": len(t.sample),
        "ever_sampled": sum(t.sampled),
        "ordering_invariant": ordering_holds(t.elements, t.sampled),
        "sample_is_smallest_prefix": sorted(t.sample) == sorted(t.elements)[: len(t.sample)],
        "verdict": t.verdict,
        "gap": None if t.gap is None else str(t.gap),
    }
    write_text(json.dumps(report, sort_keys=True) + "\n", values.get("out"))
    return 0


def _load_sample(path: str) -> tuple[list[int], int | None]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"sample: cannot read {path}: {exc}")
    n = None
    if isinstance(data, dict):
        n = data.get("n")
        data = data.get("sample")
    if not isinstance(data, list):
        raise UsageError("sample: expected a JSON list of elements")
    try:
        return [int(x) for x in data], (int(n) if n is not None else None)
    except (TypeError, ValueError):
        raise UsageError("sample: elements must be integers or decimal strings")


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{name}: required for query {args.query!r}")


def _cmd_app(args) -> int:
    sample, n = _load_sample(args.sample)
    n = args.n if args.n is not None else (n if n is not None else len(sample))
    q = args.query
    if q == "rank":
        _need(args, "target")
        out = {"rank": str(apps.estimate_rank(args.target, sample, n))}
    elif q == "quantile":
        _need(args, "q")
        out = {"quantile": str(apps.estimate_quantile(args.q, sample))}
    elif q == "heavy-hitters":
        _need(args, "alpha", "eps")
        out = {"heavy_hitters": [str(x) for x in apps.heavy_hitters(sample, args.alpha, args.eps)]}
    elif q == "range-count":
        _need(args, "lo", "hi")
        out = {"count": str(apps.answer_range_query(Interval(args.lo, args.hi), sample, n))}
    else:
        _need(args, "beta")
        out = {"center": str(apps.center_point_1d(sample, args.beta))}
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_selftest() -> int:
    results = run_selftest()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(ok for _, ok in results) else 2


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        if args.command == "advise":
            return _cmd_advise(args)
        if args.command == "app":
            return _cmd_app(args)
        if args.command == "selftest":
            return _cmd_selftest()
        values = _merged(args)
        if args.command == "game":
            return _cmd_game(values)
        if args.command == "mc":
            return _cmd_mc(values)
        return _cmd_attack_demo(values)
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
