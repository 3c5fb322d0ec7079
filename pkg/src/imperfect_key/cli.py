"""Command-line front end.

Subcommands: ``counterexample``, ``guarantee``, ``pa-scan``, ``attack-sim``.
Exit codes: 0 success, 2 argument error, 3 Monte Carlo consistency alarm.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .distributions import (
    BitString,
    conditional_on_prefix,
    counterexample_distribution,
    guessing_probability,
    point_mass,
    prefix_leak_profile,
    statistical_distance,
    uniform,
)
from .guarantee import (
    ATTACK_PRESETS,
    LEVEL_PRESETS,
    REFERENCE_LOG10,
    GuaranteeLevel,
    effective_level,
    required_d,
    rounds_budget,
)
from .otp import AttackScenario, counterexample_known_plaintext_success, simulate_attack
from .privacy_amplification import SideInformation, scan_code_family
from .reporting import distribution_to_csv, format_human, to_csv, to_json

DEFAULT_SEED = 0
SIDE_INFO_STREAM = (0, 1)  # SeedSequence spawn key for pa-scan side information

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ALARM = 3


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    results: dict[str, Any]
    csv_header: list[str]
    csv_rows: list[list[Any]]
    human: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return to_json(
                {"version": __version__, "command": self.command, "config": self.config, "results": self.results}
            )
        if fmt == "csv":
            return to_csv(self.csv_header, self.csv_rows)
        head = [f"imperfect-key {__version__} {self.command}"]
        head += [f"  {k} = {v}" for k, v in self.config.items()]
        return "\n".join(head + [""] + self.human) + "\n"


def _bits(text: str | None, length: int, name: str) -> BitString:
    if text is None:
        return BitString.zeros(length)
    b = BitString.from_str(text)
    if b.length != length:
        raise ValueError(f"--{name} must have {length} bits, got {b.length}")
    return b


def _log10(x: float) -> float | None:
    return math.log10(x) if x > 0 else None


def cmd_counterexample(args) -> Report:
    n, m = args.n, args.m
    prefix = _bits(args.target_prefix, m, "target-prefix")
    suffix = _bits(args.designated_suffix, n - m, "designated-suffix")
    p = counterexample_distribution(n, m, prefix, suffix)
    delta = statistical_distance(p, uniform(n))
    guess_p, guess = guessing_probability(p)
    profile = prefix_leak_profile(p, m)
    _, target_cond = conditional_on_prefix(p, prefix)
    target_max = guessing_probability(target_cond)[0]
    sim = simulate_attack(AttackScenario(p, m), args.trials, args.seed, workers=args.workers)
    if args.distribution_out:
        with open(args.distribution_out, "w", newline="\n") as fh:
            fh.write(distribution_to_csv(p))

    rows = list(profile)
    results = {
        "exact_delta": delta,
        "asymptotic_delta": 2.0**-m,
        "delta_gap": 2.0**-n,
        "guessing_probability": guess_p,
        "map_key": str(guess),
        "target_prefix_max_conditional": target_max,
        "known_plaintext_success": profile.average_compromise_probability,
        "known_plaintext_closed_form": counterexample_known_plaintext_success(n, m),
        "monte_carlo": _sim_results(sim),
        "prefix_profile": [
            {
                "prefix": r.prefix.hex(),
                "prefix_probability": r.prefix_probability,
                "max_conditional_suffix_probability": r.max_conditional_suffix_probability,
                "argmax_suffix": r.argmax_suffix.hex(),
                "zero_mass": r.zero_mass,
            }
            for r in rows
        ],
    }
    human = [
        f"statistical distance from uniform   {format_human(delta)}",
        f"  asymptotic value 2^-{m}            {format_human(2.0**-m)}",
        f"guessing probability (no plaintext) {format_human(guess_p)}  key {guess}",
        f"max conditional on target prefix    {format_human(target_max)}",
        f"known-plaintext success ({m} bits)    {format_human(profile.average_compromise_probability)}",
        f"  Monte Carlo ({sim.trials} trials)    {format_human(sim.empirical_success)} "
        f"+- {sim.standard_error:.3g}",
    ]
    return Report(
        "counterexample",
        _config(args),
        results,
        ["prefix", "prefix_probability", "max_conditional_suffix_probability", "argmax_suffix", "zero_mass"],
        [
            [r.prefix.hex(), r.prefix_probability, r.max_conditional_suffix_probability, r.argmax_suffix.hex(), r.zero_mass]
            for r in rows
        ],
        human,
    )


def _scenario_row(label: str, level: GuaranteeLevel, rounds: int, reference: float | None) -> dict[str, Any]:
    eff = effective_level(level)
    return {
        "label": label,
        "d": level.d,
        "layers": level.layers,
        "log10_d": _log10(level.d),
        "effective": eff,
        "log10_effective": _log10(eff),
        "reference_log10": reference,
        "rounds": rounds,
        "rounds_budget": rounds_budget(eff, rounds),
    }


def cmd_guarantee(args) -> Report:
    rounds = args.rounds
    scenarios = []
    if args.d is not None:
        scenarios.append(_scenario_row("custom", GuaranteeLevel(args.d, args.layers), rounds, None))
    else:
        levels = list(LEVEL_PRESETS) if args.level == "all" else [args.level]
        attacks = list(ATTACK_PRESETS) if args.attack == "all" else [args.attack]
        for lv in levels:
            for at in attacks:
                scenarios.append(
                    _scenario_row(
                        f"{lv}/{at}", GuaranteeLevel.preset(lv, at), rounds, REFERENCE_LOG10.get((lv, at))
                    )
                )
    need = required_d(args.target, args.target_layers)
    budget = _scenario_row("required-for-target", GuaranteeLevel(need, args.target_layers), rounds, None)

    human = []
    for s in scenarios + [budget]:
        ref = "" if s["reference_log10"] is None else f"  [quoted log10 {s['reference_log10']:g}]"
        human.append(
            f"{s['label']:<28} d={s['d']:.6g} layers={s['layers']}  "
            f"effective {format_human(s['effective'])}{ref}"
        )
        human.append(f"{'':<28} union bound over {rounds} rounds: {format_human(s['rounds_budget'])}")
    header = list(scenarios[0].keys())
    return Report(
        "guarantee",
        _config(args),
        {"scenarios": scenarios, "target": budget},
        header,
        [[("" if s[k] is None else s[k]) for k in header] for s in scenarios + [budget]],
        human,
    )


def cmd_pa_scan(args) -> Report:
    if args.positions == "first":
        side = SideInformation(tuple(range(args.t)), (0,) * args.t)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=SIDE_INFO_STREAM))
        side = SideInformation.random(args.k_raw, args.t, rng)
    scan = scan_code_family(args.k_out, args.k_raw, side, args.codes, args.seed, workers=args.workers)
    checks = [
        {
            "threshold": c.threshold,
            "fraction_exceeding": c.fraction_exceeding,
            "markov_bound": c.bound,
            "holds": c.holds,
        }
        for c in scan.markov_check
    ]
    results = {
        "side_information": {"positions": list(side.known_positions), "values": list(side.known_values)},
        "codes_sampled": scan.codes_sampled,
        "mean_delta": scan.mean_delta,
        "quantiles": {str(q): v for q, v in scan.quantiles.items()},
        "markov_check": checks,
        "markov_holds": scan.markov_holds,
        "codes": [
            {"code_index": i, "rank": int(r), "delta": float(d)}
            for i, (r, d) in enumerate(zip(scan.ranks, scan.delta_values))
        ],
    }
    human = [
        f"codes sampled        {scan.codes_sampled}",
        f"known raw positions  {list(side.known_positions)}",
        f"mean delta           {format_human(scan.mean_delta)}",
    ]
    human += [f"quantile {q:>2}          {format_human(v)}" for q, v in scan.quantiles.items()]
    for c in scan.markov_check:
        human.append(
            f"P(delta >= {c.threshold:.6g}) = {c.fraction_exceeding:.6g} <= {c.bound:.6g}  "
            f"{'holds' if c.holds else 'VIOLATED'}"
        )
    ranks, counts = np.unique(scan.ranks, return_counts=True)
    human += [f"rank {int(r):>2}: {int(c)} codes" for r, c in zip(ranks, counts)]
    return Report(
        "pa-scan",
        _config(args),
        results,
        ["code_index", "rank", "delta"],
        [[i, int(r), float(d)] for i, (r, d) in enumerate(zip(scan.ranks, scan.delta_values))],
        human,
    )


def _sim_results(sim) -> dict[str, Any]:
    return {
        "trials": sim.trials,
        "seed": sim.seed,
        "successes": sim.successes,
        "analytic_success": sim.analytic_success,
        "empirical_success": sim.empirical_success,
        "standard_error": sim.standard_error,
        "consistent": sim.consistent,
        "bit_agreement_histogram": list(sim.bit_agreement_histogram),
    }


def cmd_attack_sim(args) -> Report:
    n = args.n
    if args.key == "uniform":
        p = uniform(n)
    elif args.key == "point":
        p = point_mass(_bits(args.point_key, n, "point-key"))
    else:
        cm = args.cex_m if args.cex_m is not None else max(args.m, 1)
        if not 1 <= cm < n:
            raise ValueError(f"--cex-m must satisfy 1 <= cex-m < n, got {cm}")
        p = counterexample_distribution(
            n, cm, _bits(args.target_prefix, cm, "target-prefix"), _bits(args.designated_suffix, n - cm, "designated-suffix")
        )
    scenario = AttackScenario(p, args.m, _bits(args.plaintext, n, "plaintext"))
    sim = simulate_attack(scenario, args.trials, args.seed, workers=args.workers)
    sim_res = _sim_results(sim)
    header = ["key", "n", "m", "trials", "seed", "successes", "analytic_success", "empirical_success", "standard_error", "consistent"]
    row = [args.key, n, args.m, sim.trials, sim.seed, sim.successes, sim.analytic_success,
           sim.empirical_success, sim.standard_error, sim.consistent]
    attack = "ciphertext-only" if args.m == 0 else f"known-plaintext ({args.m} bits)"
    human = [
        f"{attack} attack on a {args.key} {n}-bit key",
        f"analytic success   {format_human(sim.analytic_success)}",
        f"empirical success  {format_human(sim.empirical_success)}  ({sim.successes}/{sim.trials})",
        f"standard error     {sim.standard_error:.6g}",
        "consistent within 4 SE" if sim.consistent else "CONSISTENCY ALARM: deviation exceeds 4 SE",
    ]
    return Report(
        "attack-sim", _config(args), sim_res, header, [row], human, EXIT_OK if sim.consistent else EXIT_ALARM
    )


# Not part of the reproducible config: output routing and worker count
# never change the numbers.
_UNREPORTED = ("func", "out", "format", "workers")


def _config(args) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _UNREPORTED}


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=_u64, default=argparse.SUPPRESS, help=f"default {DEFAULT_SEED}")

    parser = argparse.ArgumentParser(
        prog="imperfect-key", parents=[common], description="Imperfect one-time-pad key analysis."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counterexample", parents=[common], help="key whose m-bit prefix fixes the rest")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--target-prefix")
    p.add_argument("--designated-suffix")
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--distribution-out", metavar="PATH", help="also write index,probability CSV")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("guarantee", parents=[common], help="average-to-individual level conversion")
    p.add_argument("--d", type=float, help="custom average level; overrides presets")
    p.add_argument("--layers", type=int, default=0)
    p.add_argument("--level", choices=("all", *LEVEL_PRESETS), default="all")
    p.add_argument("--attack", choices=("all", *ATTACK_PRESETS), default="all")
    p.add_argument("--rounds", type=_positive_int, default=100_000)
    p.add_argument("--target", type=float, default=1e-20, help="per-trial level to reach")
    p.add_argument("--target-layers", type=int, default=ATTACK_PRESETS["known-plaintext"])
    p.set_defaults(func=cmd_guarantee)

    p = sub.add_parser("pa-scan", parents=[common], help="Toeplitz code family scan")
    p.add_argument("--k-out", type=int, required=True)
    p.add_argument("--k-raw", type=int, required=True)
    p.add_argument("--t", type=int, default=0, help="number of raw bits Eve knows")
    p.add_argument("--positions", choices=("random", "first"), default="random")
    p.add_argument("--codes", type=_positive_int, default=1000)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_pa_scan)

    p = sub.add_parser("attack-sim", parents=[common], help="Monte Carlo one-time-pad attack")
    p.add_argument("--key", choices=("uniform", "counterexample", "point"), default="counterexample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0, help="known plaintext prefix bits (0 = ciphertext-only)")
    p.add_argument("--cex-m", type=int, help="counter-example prefix length (default: --m)")
    p.add_argument("--target-prefix")
    p.add_argument("--designated-suffix")
    p.add_argument("--point-key")
    p.add_argument("--plaintext")
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_attack_sim)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("format", "human"), ("out", None), ("seed", DEFAULT_SEED)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        report = args.func(args)
    except ValueError as exc:
        print(f"imperfect-key: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.render(args.format)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
