"""Batch command line: ``judgagg aggregate|decompose|check|bench|suite|fixture``.

JSON goes to stdout, a short human summary to stderr. Exit codes: 0 success,
1 a separability check was violated (or a mandatory suite check failed),
2 invalid input, 3 a resource limit was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import logic
from .core import Agenda, JudgmentSet, Profile
from .decomposition import (
    Decomposition,
    Kind,
    aggregate_via_decomposition,
    find_finest_independent_partition,
    find_iod,
    find_syntactic_partition,
    make_decomposition,
)
from .document import FIXTURES, ProblemDocument, load_fixture
from .errors import JudgmentAggregationError, ResourceLimitError
from .rules import AS_RULES, RuleId, apply_tiebreak, get_rule
from .separability import (
    SuiteConfig,
    Verdict,
    check_as_instance,
    check_oas_instance,
    random_decomposable_agenda,
    random_profile,
    run_property_suite,
)

EXIT_VIOLATED, EXIT_INPUT, EXIT_RESOURCE = 1, 2, 3


def _emit(payload: dict, summary: str):
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _judgment_sets(outputs):
    return [{"signs": j.sign_string(), "formulas": [logic.format_formula(f) for f in j.formulas()]}
            for j in outputs]


def cmd_aggregate(args) -> int:
    doc = ProblemDocument.load(args.file)
    rule = RuleId.parse(args.rule)
    outputs = get_rule(rule)(doc.agenda, doc.profile)
    payload = {"rule": rule.value, "outputs": _judgment_sets(outputs)}
    summary = f"{rule.value}: {len(outputs)} collective judgment set(s)"
    if args.tiebreak:
        winner = apply_tiebreak(outputs)
        payload["winner"] = _judgment_sets([winner])[0]
        summary += f"; tie-broken winner {winner}"
    _emit(payload, summary)
    return 0


def cmd_decompose(args) -> int:
    doc = ProblemDocument.load(args.file)
    a = doc.agenda
    if args.mode == "syntactic":
        d = find_syntactic_partition(a)
    elif args.mode == "partition":
        d = find_finest_independent_partition(a)
    else:
        d = find_iod(a)
    if d is None or d.trivial:
        _emit({"mode": args.mode, "result": "trivial"}, f"{args.mode}: trivial")
        return 0
    blocks = [list(b) for b in d.blocks]
    _emit({"mode": args.mode, "kind": d.kind.value, "blocks": blocks}, f"{args.mode}: blocks {blocks}")
    return 0


def cmd_check(args) -> int:
    doc = ProblemDocument.load(args.file)
    names = [s for s in args.blocks.split(",") if s]
    blocks = [doc.block(name) for name in names]
    rule = RuleId.parse(args.rule)
    a, p = doc.agenda, doc.profile
    if args.property == "as":
        d = make_decomposition(a, blocks, Kind.INDEPENDENT_PARTITION)
        report = check_as_instance(rule, a, p, d)
    else:
        d = make_decomposition(a, blocks, Kind.IOD)
        report = check_oas_instance(rule, a, p, d)
    _emit(report.to_dict(), f"{args.property.upper()} / {rule.value}: {report.verdict.value}")
    return EXIT_VIOLATED if report.verdict is Verdict.VIOLATED else 0


def _fresh(a: Agenda, p: Profile):
    # A new agenda object without any cached enumeration, so timings include it.
    b = Agenda(a.preagenda, a.constraint, validate=False)
    return b, Profile(b, tuple(JudgmentSet(b, j.signs) for j in p.members), check=False)


def bench(blocks: int, atoms: int, agents: int, rule, seed: int = 0, repeat: int = 5) -> dict:
    """Time direct aggregation against blockwise aggregation on a decomposable agenda."""
    rule = RuleId.parse(rule) if isinstance(rule, str) else rule
    a, d = random_decomposable_agenda(blocks, atoms, seed)
    p = random_profile(a, agents, seed)
    fn = get_rule(rule)
    direct_times, split_times = [], []
    for _ in range(repeat):
        fa, fp = _fresh(a, p)
        t0 = time.perf_counter()
        direct = fn(fa, fp)
        direct_times.append(time.perf_counter() - t0)

        fa, fp = _fresh(a, p)
        fd = Decomposition(fa, d.blocks, d.kind)
        t0 = time.perf_counter()
        split = aggregate_via_decomposition(rule, fa, fp, fd)
        split_times.append(time.perf_counter() - t0)
    equal = [j.signs for j in direct] == [j.signs for j in split]
    t_direct, t_split = min(direct_times), min(split_times)
    speedup = t_direct / t_split if t_split > 0 else float("inf")
    return {
        "rule": rule.value, "blocks": blocks, "atoms_per_block": atoms, "agents": agents, "seed": seed,
        "issues": a.m, "block_sizes": [len(b) for b in d.blocks],
        "direct_seconds": t_direct, "decomposed_seconds": t_split, "speedup": speedup,
        "outputs_equal": equal, "equality_required": rule in AS_RULES,
        "speedup_at_least_2x": speedup >= 2.0,
    }


def cmd_bench(args) -> int:
    result = bench(args.blocks, args.atoms, args.agents, args.rule, args.seed, args.repeat)
    summary = (f"{result['rule']}: direct {result['direct_seconds']:.4f}s, "
               f"decomposed {result['decomposed_seconds']:.4f}s, speedup {result['speedup']:.1f}x")
    if not result["speedup_at_least_2x"]:
        summary += " (below 2x)"
    _emit(result, summary)
    if result["equality_required"] and not result["outputs_equal"]:
        print("decomposed output differs from direct output", file=sys.stderr)
        return EXIT_VIOLATED
    return 0


def cmd_suite(args) -> int:
    cfg = SuiteConfig(trials=args.trials, seed=args.seed, overlap_trials=args.trials)
    report = run_property_suite(cfg)
    failed = [c.name for c in report.checks.values() if c.mandatory and not c.passed]
    summary = f"suite: {len(report.checks)} checks in {report.seconds:.1f}s, " + (
        "all mandatory checks passed" if not failed else f"FAILED: {', '.join(failed)}")
    _emit(report.to_dict(), summary)
    return 0 if report.passed else EXIT_VIOLATED


def cmd_fixture(args) -> int:
    sys.stdout.write(load_fixture(args.name).dumps())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="judgagg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    rules = [r.value for r in RuleId]

    p = sub.add_parser("aggregate", help="run a rule on a problem document")
    p.add_argument("--rule", required=True, choices=rules)
    p.add_argument("--tiebreak", action="store_true", help="also report the lexicographic winner")
    p.add_argument("file")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("decompose", help="find independent blocks of the agenda")
    p.add_argument("--mode", required=True, choices=["syntactic", "partition", "iod"])
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", help="check (overlapping) agenda separability on one instance")
    p.add_argument("--property", required=True, choices=["as", "oas"])
    p.add_argument("--rule", required=True, choices=rules)
    p.add_argument("--blocks", required=True, help="comma-separated block names from the document")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="time direct against decomposed aggregation")
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--rule", required=True, choices=rules)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("suite", help="run the randomized separability property suite")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("fixture", help="print a shipped problem document")
    p.add_argument("name", choices=list(FIXTURES))
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (JudgmentAggregationError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
