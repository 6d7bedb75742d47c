"""Command-line interface.

Subcommands: ``test`` (run effect tests on a CSV edge list), ``diagnose``
(degeneracy check only), ``local-effects`` (per-node effect table as
CSV), and ``simulate`` (Monte Carlo rejection rates for the synthetic
settings).  Reports are JSON documents that echo every parameter needed
to reproduce them; exit status is 0 on success and 2 on input or
validation errors.  A statistical rejection never changes the exit code.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time

import numpy as np

from .errors import NetworkEffectsError
from .inference import (
    DegeneracyDiagnosis,
    TestReport,
    diagnose_degeneracy,
    local_effects,
    test_effect,
    test_effect_repeated,
)
from .network import EffectKind, read_edge_list
from .simulation import CONFIGS, SimulationSpec, monte_carlo

SCHEMA_VERSION = 1

_EFFECT_CHOICES = ["eta2", "eta3", "eta4", "eta5", "all"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neteffects",
        description="Nonparametric tests for network effects in weighted directed networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="test one or all effects on an edge-list CSV")
    _add_input_output(p_test)
    p_test.add_argument("--effect", choices=_EFFECT_CHOICES, default="all")
    p_test.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    p_test.add_argument("--lambda", dest="subsample_exponent", type=float, default=1.2,
                        help="subsample-size exponent in [1, 2) (default 1.2)")
    p_test.add_argument("--seed", type=int, default=0, help="subsampling seed (default 0)")
    p_test.add_argument("--repeats", type=int, default=1,
                        help="independent subsample draws to aggregate (default 1)")
    p_test.add_argument("--diagnostic-c", type=float, default=1.0,
                        help="degeneracy threshold constant (default 1)")
    p_test.set_defaults(func=cmd_test)

    p_diag = sub.add_parser("diagnose", help="degeneracy diagnosis for eta2 or eta5")
    _add_input_output(p_diag)
    p_diag.add_argument("--effect", choices=["eta2", "eta5", "eta3", "eta4"], required=True)
    p_diag.add_argument("--diagnostic-c", type=float, default=1.0)
    p_diag.set_defaults(func=cmd_diagnose)

    p_local = sub.add_parser("local-effects", help="per-node local effects as CSV")
    _add_input_output(p_local)
    p_local.set_defaults(func=cmd_local_effects)

    p_sim = sub.add_parser("simulate", help="Monte Carlo rejection rate for a synthetic setting")
    p_sim.add_argument("--setting", choices=["a", "b", "c"], required=True)
    p_sim.add_argument("--config", choices=list(CONFIGS), default="normal")
    p_sim.add_argument("--n", type=int, required=True, help="nodes per replicate")
    p_sim.add_argument("--c2", type=float, default=0.0, help="squared signal strength")
    case = p_sim.add_mutually_exclusive_group()
    case.add_argument("--null", dest="null_case", action="store_true", default=None,
                      help="simulate under the null (default when --c2 is 0)")
    case.add_argument("--alt", dest="null_case", action="store_false",
                      help="simulate under the alternative (default when --c2 > 0)")
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--lambda", dest="subsample_exponent", type=float, default=1.2)
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--diagnostic-c", type=float, default=1.0)
    p_sim.add_argument("--threads", type=int, default=1)
    p_sim.add_argument("--emit-stats", metavar="FILE",
                       help="write per-replicate statistics, one per line")
    p_sim.add_argument("--output", help="write the JSON report here instead of stdout")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def _add_input_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="CSV edge list with header source,target,weight")
    parser.add_argument("--output", help="write the report here instead of stdout")


def _effects(flag: str) -> list[EffectKind]:
    if flag == "all":
        return [EffectKind.RECIPROCITY, EffectKind.SAME_SENDER,
                EffectKind.SAME_RECEIVER, EffectKind.SENDER_RECEIVER]
    return [EffectKind.parse(flag)]


def _jsonable(obj):
    if isinstance(obj, (TestReport, DegeneracyDiagnosis)):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, EffectKind):
        return obj.short_name
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _write_document(results, command_echo: dict, started: float, output: str | None) -> None:
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": command_echo,
        "results": _jsonable(results),
        "timing_seconds": time.perf_counter() - started,
    }
    text = json.dumps(document, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _derive_seeds(seed: int, repeats: int) -> list[int]:
    root = np.random.SeedSequence(seed)
    return [int(child.generate_state(1)[0]) for child in root.spawn(repeats)]


def cmd_test(args) -> int:
    started = time.perf_counter()
    if args.repeats < 1:
        raise NetworkEffectsError(f"--repeats must be at least 1, got {args.repeats}")
    net = read_edge_list(args.input)
    seeds = _derive_seeds(args.seed, args.repeats)
    results = []
    for effect in _effects(args.effect):
        if args.repeats == 1:
            report = test_effect(net, effect, alpha=args.alpha,
                                 subsample_exponent=args.subsample_exponent,
                                 seed=seeds[0], c_constant=args.diagnostic_c)
        else:
            report = test_effect_repeated(net, effect, alpha=args.alpha,
                                          subsample_exponent=args.subsample_exponent,
                                          seeds=seeds, c_constant=args.diagnostic_c)
        results.append(report)
    echo = {
        "command": "test", "input": args.input, "effect": args.effect,
        "alpha": args.alpha, "lambda": args.subsample_exponent, "seed": args.seed,
        "derived_seeds": seeds, "repeats": args.repeats, "diagnostic_c": args.diagnostic_c,
    }
    _write_document(results, echo, started, args.output)
    return 0


def cmd_diagnose(args) -> int:
    started = time.perf_counter()
    effect = EffectKind.parse(args.effect)
    if effect in (EffectKind.SAME_SENDER, EffectKind.SAME_RECEIVER):
        raise NetworkEffectsError(
            f"{args.effect} has no degeneracy diagnostic: its estimator is always "
            "degenerate under the null, so its test always uses the subsampled branch"
        )
    net = read_edge_list(args.input)
    diagnosis = diagnose_degeneracy(net, effect, c_constant=args.diagnostic_c)
    echo = {"command": "diagnose", "input": args.input, "effect": args.effect,
            "diagnostic_c": args.diagnostic_c}
    _write_document(diagnosis, echo, started, args.output)
    return 0


def cmd_local_effects(args) -> int:
    net = read_edge_list(args.input)
    table = local_effects(net)
    labels = net.labels or tuple(str(i) for i in range(net.n))
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["node", "reciprocity", "same_sender", "same_receiver", "sender_receiver"])
        for i, label in enumerate(labels):
            writer.writerow([
                label,
                repr(float(table.reciprocity[i])),
                repr(float(table.same_sender[i])),
                repr(float(table.same_receiver[i])),
                repr(float(table.sender_receiver[i])),
            ])
    finally:
        if args.output:
            out.close()
    return 0


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    null_case = args.null_case if args.null_case is not None else (args.c2 <= 0.0)
    spec = SimulationSpec(
        setting=args.setting, config=args.config, n=args.n, c_squared=args.c2,
        null_case=null_case, reps=args.reps, alpha=args.alpha,
        subsample_exponent=args.subsample_exponent,
        diagnostic_constant=args.diagnostic_c, master_seed=args.seed,
    )
    summary = monte_carlo(spec, threads=args.threads, collect_statistics=bool(args.emit_stats))
    if args.emit_stats:
        with open(args.emit_stats, "w", encoding="utf-8") as fh:
            for value in summary.statistics:
                fh.write(f"{value!r}\n")
    echo = {
        "command": "simulate", "setting": args.setting, "config": args.config,
        "n": args.n, "c2": args.c2, "null": null_case, "reps": args.reps,
        "lambda": args.subsample_exponent, "alpha": args.alpha, "seed": args.seed,
        "diagnostic_c": args.diagnostic_c, "threads": args.threads,
        "effect": spec.effect.short_name,
    }
    result = {
        "rejection_rate": summary.rejection_rate,
        "reps": summary.reps,
        "standard_error": summary.standard_error,
        "branch_counts": summary.branch_counts,
        "zero_variance_count": summary.zero_variance_count,
    }
    _write_document(result, echo, started, args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NetworkEffectsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
