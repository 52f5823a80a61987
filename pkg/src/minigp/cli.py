"""Command-line front end.

Subcommands: `exec` runs the reference machine, `run` the compiled
simulator, `verify` checks them against each other in lockstep, `gen`
prints the generated program and rule library, `bench` times matching
on growing hosts, and `space` tabulates run metrics over several inputs.
Exit status is 0 on success, 1 on divergence or a failed run, 2 on
parse or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import graphs
from .compiler import gen_sim
from .harness import (Trace, bench_matching, lockstep_verify, measure,
                      metrics_lines, metrics_table, run_sim)
from .lang import BudgetExceeded, NullFailureViolation
from .rules import rules_to_text
from .turing import (ParseError, TMConfiguration, TMError, TuringMachine,
                     parse_tm, tm_run)

REPAIR_NOTE = ("# The restart check sits inside the outer loop so a flagged"
               " pass retries\n# the whole simulation at the next capacity;"
               " an unflagged pass ends the run.")


def _load(path: str) -> TuringMachine:
    return parse_tm(Path(path).read_text())


def _binary(s: str) -> str:
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"input must be a nonempty string over 0/1, got {s!r}")
    return s


def _config_line(s: TMConfiguration) -> str:
    return (f"state={s.state} input_head={s.input_head} "
            f"work='{s.work}' work_head={s.work_head}")


def _tracer(enabled: bool) -> Optional[Trace]:
    if not enabled:
        return None
    return lambda i, s: print(f"step {i}: {_config_line(s)}")


def _cmd_exec(args: argparse.Namespace) -> int:
    m = _load(args.tm_file)
    final, steps, squares = tm_run(m, _binary(args.input), args.max_steps)
    print(_config_line(final))
    print(f"steps={steps}")
    print(f"squares={squares}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    m = _load(args.tm_file)
    metrics, final, g = run_sim(m, _binary(args.input), args.max_steps,
                                mode=args.mode, trace=_tracer(args.trace),
                                max_rule_calls=args.max_rule_calls)
    print(_config_line(final))
    for line in metrics_lines(metrics):
        print(line)
    if args.dump_graph:
        Path(args.dump_graph).write_text(graphs.to_text(g))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    m = _load(args.tm_file)
    report = lockstep_verify(m, _binary(args.input), args.max_steps,
                             mode=args.mode, trace=_tracer(args.trace),
                             max_rule_calls=args.max_rule_calls)
    print(f"steps_checked={report.steps_checked}")
    print(f"restarts={report.restarts}")
    print(f"null_failure_ok={report.null_failure_ok}")
    print(f"unique_match_ok={report.unique_match_ok}")
    for entry in report.errors:
        print(f"error: {entry}")
    if report.first_divergence is not None:
        step, got, expected = report.first_divergence
        print(f"divergence at step {step}")
        print(f"  decoded:  {_config_line(got)}")
        print(f"  machine:  {_config_line(expected)}")
        return 1
    if not report.ok:
        print("verification failed")
        return 1
    print("no divergence")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    sim = gen_sim(_load(args.tm_file))
    print(sim.listing.rstrip("\n"))
    print()
    print(REPAIR_NOTE)
    print()
    print(rules_to_text([r for rules in sim.library.values() for r in rules])
          .rstrip("\n"))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    sim = gen_sim(_load(args.tm_file))
    by_name = {r.name: r for rules in sim.library.values() for r in rules}
    name = args.rule or f"SetFlag_{sim.machine.start}"
    if name not in by_name:
        raise ValueError(f"no rule named {name!r}; try one of "
                         f"{sorted(by_name)[:8]} ...")
    sizes = [int(tok) for tok in args.sizes.split(",") if tok]
    header = "graph_space,extensions,seconds"
    print(header + (",brute_seconds" if args.brute else ""))
    for row in bench_matching(by_name[name], sizes, reps=args.reps,
                              brute=args.brute):
        cells = [str(row.graph_space), str(row.extensions), f"{row.seconds:.6f}"]
        if args.brute:
            cells.append(f"{row.brute_seconds:.6f}")
        print(",".join(cells))
    return 0


def _cmd_space(args: argparse.Namespace) -> int:
    m = _load(args.tm_file)
    rows = []
    for input in args.inputs.split(","):
        rows.append((input, measure(m, _binary(input), args.max_steps,
                                    mode=args.mode)))
    print(metrics_table(rows), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minigp",
        description="Simulate Turing machines by rooted graph rewriting.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, *, input_flag: bool = True,
               run_flags: bool = False) -> None:
        p.add_argument("tm_file", help="machine description file")
        if input_flag:
            p.add_argument("--input", required=True,
                           help="input string over 0/1")
            p.add_argument("--max-steps", type=int, default=10_000,
                           help="machine step budget (default 10000)")
        if run_flags:
            p.add_argument("--mode", choices=("semantic", "efficient"),
                           default="semantic",
                           help="interpreter mode (default semantic)")
            p.add_argument("--trace", action="store_true",
                           help="stream decoded configurations per step")
            p.add_argument("--max-rule-calls", type=int, default=None,
                           help="abort after this many rule calls")

    p = sub.add_parser("exec", help="run the reference machine")
    common(p)
    p.set_defaults(func=_cmd_exec)

    p = sub.add_parser("run", help="run the compiled simulator")
    common(p, run_flags=True)
    p.add_argument("--dump-graph", metavar="PATH",
                   help="write the final graph in the text format")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("verify", help="check simulator against machine")
    common(p, run_flags=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="print the generated program and rules")
    common(p, input_flag=False)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="time matching on growing hosts")
    common(p, input_flag=False)
    p.add_argument("--rule", default=None,
                   help="rule name to match (default: the start state flag)")
    p.add_argument("--sizes", default="100,1000,10000",
                   help="comma-separated host graph_space targets")
    p.add_argument("--reps", type=int, default=5, help="timing repetitions")
    p.add_argument("--brute", action="store_true",
                   help="also time the brute-force enumerator")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("space", help="tabulate run metrics over inputs")
    common(p, input_flag=False)
    p.add_argument("--inputs", required=True,
                   help="comma-separated input strings")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--mode", choices=("semantic", "efficient"),
                   default="semantic")
    p.set_defaults(func=_cmd_space)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (OSError, ParseError, graphs.ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (TMError, BudgetExceeded, NullFailureViolation) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
