"""Command-line front end.

Exit codes: 0 computed answer, 1 usage error, 2 parse/load error,
3 internal limit reached (e.g. round limit in `materialize`).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bench as benchmod
from .analysis import dependency_info, is_recursive, relevant_rules, to_dot
from .automata import SearchBudgetExceeded, consistent
from .intervals import make
from .materialisation import materialise
from .pipeline import check_entailment
from .store import FactStore
from .syntax import (
    SyntaxFault,
    check_arities,
    parse_dataset,
    parse_fact,
    parse_program,
    print_dataset,
)

GRAMMAR_HELP = """\
file formats:
  .dmtl (programs)  one rule per line block, terminated by '.':
      Head :- Body1, Body2 .
    metric atoms: P(a,X) | TOP | BOTTOM | DIAMONDMINUS[1,2] P(X)
      | BOXPLUS(0,inf) P(X) | P(X) SINCE[0,3] Q(X) | parentheses for grouping
    operators: DIAMONDMINUS DIAMONDPLUS BOXMINUS BOXPLUS SINCE UNTIL
    intervals: [a,b] (a,b] [a,b) (a,b) with rationals 3, 1.5, 7/2, -inf, +inf
    variables start uppercase, constants lowercase or numeric; comments: #
  .dtf (datasets)   one fact per line:  P(a,b)@[0,5/2]
"""


def _load_program(path):
    with open(path) as f:
        return parse_program(f.read())


def _load_dataset(path):
    with open(path) as f:
        return parse_dataset(f.read())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="datalogmtl",
        description="DatalogMTL reasoning: materialisation plus an automata-based decision procedure.",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide fact entailment")
    p.add_argument("--program", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--fact", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--sequential", action="store_true")
    p.add_argument("--max-rounds", type=int, default=1000)

    p = sub.add_parser("materialize", help="run materialisation to fixpoint")
    p.add_argument("--program", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("consistency", help="automata-based consistency check")
    p.add_argument("--program", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--trace", default=None, help="write search trace to this file")

    p = sub.add_parser("analyze", help="dependency graph, recursion, relevance")
    p.add_argument("--program", required=True)
    p.add_argument("--predicate", default=None, help="report the relevant subprogram for this predicate")
    p.add_argument("--dot", action="store_true", help="emit the dependency graph as DOT")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("generate", help="generate a synthetic dataset")
    p.add_argument("--spec", required=True, help="JSON generator spec")
    p.add_argument("--seed", type=int, default=None, help="override the spec's seed")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("bench", help="time entailment over a query file")
    p.add_argument("--program", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--json", action="store_true")

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1

    try:
        return _dispatch(args)
    except (OSError, SyntaxFault, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (SearchBudgetExceeded, RuntimeError) as e:
        print(f"limit: {e}", file=sys.stderr)
        return 3


def _dispatch(args) -> int:
    if args.command == "check":
        program = _load_program(args.program)
        data = _load_dataset(args.data)
        check_arities(program, data)
        store = FactStore.from_facts(data)
        query = parse_fact(args.fact)
        r = check_entailment(
            program,
            store,
            query,
            sequential=args.sequential,
            round_budget=args.max_rounds,
        )
        if args.json:
            print(
                json.dumps(
                    {
                        "answer": r.answer,
                        "fact_type": r.fact_type,
                        "rounds": r.rounds,
                        "winner": r.winner,
                        "inconsistent": r.inconsistent,
                        "timings": r.timings,
                    }
                )
            )
        else:
            print("true" if r.answer else "false")
        return 0

    if args.command == "materialize":
        program = _load_program(args.program)
        data = _load_dataset(args.data)
        check_arities(program, data)
        out = materialise(program, FactStore.from_facts(data), max_rounds=args.max_rounds)
        text = out.store.dump()
        if args.output:
            with open(args.output, "w") as f:
                f.write(text)
        if args.json:
            print(
                json.dumps(
                    {
                        "status": out.status,
                        "rounds": out.rounds,
                        "facts": out.store.fact_count(),
                        "coalescing_s": out.coalescing_time,
                    }
                )
            )
        elif not args.output:
            sys.stdout.write(text)
        if out.status == "RoundLimit":
            return 3
        return 0

    if args.command == "consistency":
        program = _load_program(args.program)
        data = _load_dataset(args.data)
        check_arities(program, data)
        trace = [] if args.trace else None
        flag = consistent(program, data, trace=trace)
        if args.trace:
            with open(args.trace, "w") as f:
                f.write("\n".join(trace) + "\n")
        if args.json:
            print(json.dumps({"consistent": flag}))
        else:
            print("consistent" if flag else "inconsistent")
        return 0

    if args.command == "analyze":
        program = _load_program(args.program)
        info = dependency_info(program)
        if args.dot:
            sys.stdout.write(to_dot(info))
            return 0
        report = {
            "recursive_predicates": sorted(info.recursive),
            "recursive_program": is_recursive(program),
            "sccs": [sorted(c) for c in info.sccs],
        }
        if args.predicate:
            sub = relevant_rules(program, args.predicate)
            report["relevant_rules"] = [str(r) for r in sub.rules]
        if args.json:
            print(json.dumps(report))
        else:
            print(f"recursive: {'yes' if report['recursive_program'] else 'no'}")
            print("recursive predicates:", ", ".join(report["recursive_predicates"]) or "(none)")
            if args.predicate:
                print(f"rules relevant to {args.predicate}:")
                for r in report["relevant_rules"]:
                    print(" ", r)
        return 0

    if args.command == "generate":
        with open(args.spec) as f:
            raw = json.load(f)
        lo, hi = (Fraction(str(v)) for v in raw["endpoint_range"])
        spec = benchmod.GeneratorSpec(
            predicates=tuple((p, int(a)) for p, a in raw["predicates"]),
            constant_pool=int(raw["constant_pool"]),
            fact_count=int(raw["fact_count"]),
            endpoint_range=make(lo, hi, False, False),
            max_interval_length=Fraction(str(raw["max_interval_length"])),
            granularity=Fraction(str(raw["granularity"])),
            seed=int(raw["seed"]) if args.seed is None else args.seed,
        )
        facts = benchmod.generate_dataset(spec)
        text = print_dataset(facts)
        if args.output:
            with open(args.output, "w") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
        return 0

    if args.command == "bench":
        program = _load_program(args.program)
        data = _load_dataset(args.data)
        queries = _load_dataset(args.queries)
        store = FactStore.from_facts(data)
        report = benchmod.bench_report(program, store, queries)
        if args.json:
            print(json.dumps(report))
        else:
            for row in report["queries"]:
                print(
                    f"{row['query']}\t{row['answer']}\t{row['fact_type']}\t"
                    f"rounds={row['rounds']}\ttotal={row['total_s']:.3f}s"
                )
            print("census:", report["census"])
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
