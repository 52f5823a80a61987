"""Lockstep verification, run measurement, and matching benchmarks.

`lockstep_verify` replays a machine against its compiled simulator one
simulated transition at a time, decoding the host graph after every
completed step.  `measure` collects size and time counters from a full
run, `compare_modes` checks that both interpreter modes agree, and
`bench_matching` times root-driven matching on configuration-graph hosts
of growing size.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

from .compiler import gen_sim, initial_graph
from .encoding import MalformedConfigGraph, dec, enc
from .graphs import Graph, graph_space
from .lang import (BudgetExceeded, Done, ExecStats, Interp, Loop,
                   NullFailureViolation)
from .matching import match_all, match_bruteforce
from .rules import Rule
from .turing import (TMConfiguration, TMError, TuringMachine,
                     initial_configuration, tm_run, tm_step)

Trace = Callable[[int, TMConfiguration], None]


@dataclass
class Metrics:
    """Counters from one full simulation run.

    uniform_space charges one unit per node and per edge at the peak;
    log_space charges each of the peak_nodes nodes ceil(log2(peak_nodes))
    bits.  per_step_rule_calls has one entry per completed simulated step,
    replayed steps included, so its length can exceed tm_steps.
    """

    rule_calls: int
    tm_steps: int
    restarts: int
    peak_graph_space: int
    tape_squares_used: int
    final_c: int
    final_b: int
    uniform_space: int
    log_space: int
    peak_nodes: int
    per_step_rule_calls: list[int] = field(default_factory=list)


_METRIC_KEYS = ("rule_calls", "tm_steps", "restarts", "peak_graph_space",
                "tape_squares_used", "final_c", "final_b", "uniform_space",
                "log_space", "peak_nodes")


def metrics_lines(mx: Metrics) -> list[str]:
    """The scalar counters as key=value lines."""
    return [f"{key}={getattr(mx, key)}" for key in _METRIC_KEYS]


def metrics_table(rows: Sequence[tuple[str, Metrics]]) -> str:
    """Labelled runs as a comma-separated table, one line per run."""
    out = ["input," + ",".join(_METRIC_KEYS)]
    for label, mx in rows:
        out.append(label + "," + ",".join(str(getattr(mx, key))
                                          for key in _METRIC_KEYS))
    return "\n".join(out) + "\n"


@dataclass
class VerifyReport:
    """Outcome of one lockstep run.

    first_divergence is None iff the simulation matched the reference
    machine at every checked step; the assertion flags track that failing
    subruns never mutated the graph and that no rule-set call ever saw
    more than one match.
    """

    steps_checked: int = 0
    first_divergence: Optional[tuple[int, TMConfiguration, TMConfiguration]] = None
    null_failure_ok: bool = True
    unique_match_ok: bool = True
    restarts: int = 0
    errors: list[str] = field(default_factory=list)
    final_config: Optional[TMConfiguration] = None

    @property
    def ok(self) -> bool:
        return (self.first_divergence is None and self.null_failure_ok
                and self.unique_match_ok and not self.errors)


class _Abort(Exception):
    """Stops the interpreter once the report is settled."""


def lockstep_verify(m: TuringMachine, input: str, max_steps: int = 10_000, *,
                    mode: str = "efficient",
                    max_rule_calls: Optional[int] = None,
                    trace: Optional[Trace] = None) -> VerifyReport:
    """Run the compiled simulator and the machine side by side.

    After every completed step of the simulation loop the host graph is
    decoded and compared against the stepped reference configuration; a
    completed restart must reproduce the initial configuration one
    capacity level up, after which the reference replays from the start.
    Checking stops cleanly once max_steps steps have been compared.  The
    in-place mode is the default because only it can detect a failing
    subrun that mutated the graph.
    """
    sim = gen_sim(m)
    report = VerifyReport()
    oracle = initial_configuration(m, input)
    level = 0

    def decode(g: Graph, where: str) -> tuple[TMConfiguration, int]:
        try:
            return dec(g)
        except MalformedConfigGraph as e:
            report.errors.append(f"{where}: undecodable graph: {e}")
            raise _Abort() from None

    def step_checked(g: Graph) -> None:
        nonlocal oracle
        got, got_k = decode(g, f"step {report.steps_checked + 1}")
        nxt = tm_step(m, oracle)
        if nxt is None:
            report.first_divergence = (report.steps_checked + 1, got, oracle)
            report.errors.append("simulation stepped past the machine's halt")
            raise _Abort()
        oracle = nxt
        report.steps_checked += 1
        if trace is not None:
            trace(report.steps_checked, got)
        if got != oracle or got_k != level:
            report.first_divergence = (report.steps_checked, got, oracle)
            raise _Abort()
        if report.steps_checked >= max_steps:
            raise _Abort()

    def restarted(g: Graph, stats: ExecStats) -> None:
        nonlocal oracle, level
        stats.restarts += 1
        report.restarts += 1
        level += 1
        got, got_k = decode(g, f"restart to level {level}")
        fresh = initial_configuration(m, input)
        if got != fresh or got_k != level:
            report.first_divergence = (report.steps_checked, got, fresh)
            report.errors.append("restart did not reproduce the initial "
                                 "configuration at the next level")
            raise _Abort()
        oracle = fresh

    def hook(loop: Loop, g: Graph, stats: ExecStats) -> None:
        if loop is sim.simulate_loop:
            step_checked(g)
        elif loop is sim.outer_loop:
            restarted(g, stats)

    interp = Interp(mode=mode, max_rule_calls=max_rule_calls, loop_hook=hook)
    try:
        cfg = interp.run(sim.program, initial_graph(input, m.start))
        if isinstance(cfg, Done):
            got, got_k = decode(cfg.graph, "final graph")
            report.final_config = got
            if got != oracle or got_k != level:
                report.first_divergence = (report.steps_checked, got, oracle)
            else:
                nxt = tm_step(m, oracle)
                if nxt is not None:
                    report.first_divergence = (report.steps_checked + 1, got, nxt)
                    report.errors.append("simulation halted before the machine")
        else:
            report.errors.append("simulator program run failed")
    except _Abort:
        pass
    except NullFailureViolation as e:
        report.null_failure_ok = False
        report.errors.append(f"null failure: {e}")
    except (TMError, BudgetExceeded, MalformedConfigGraph) as e:
        report.errors.append(f"{type(e).__name__}: {e}")
    report.unique_match_ok = interp.stats.match_multiplicity_max <= 1
    return report


def run_sim(m: TuringMachine, input: str, max_steps: int = 10_000, *,
            mode: str = "efficient", max_rule_calls: Optional[int] = None,
            trace: Optional[Trace] = None
            ) -> tuple[Metrics, TMConfiguration, Graph]:
    """Run the simulator to completion; also returns the decoded final
    configuration and the final host graph.

    The reference machine runs alongside to supply tm_steps and
    tape_squares_used.  Defaults to the in-place interpreter mode; the
    test suite separately checks that both modes produce the same final
    graph and rule-call count.
    """
    final, tm_steps, squares = tm_run(m, input, max_steps)
    sim = gen_sim(m)
    per_step: list[int] = []
    last_mark = [0]

    def hook(loop: Loop, g: Graph, stats: ExecStats) -> None:
        if loop is sim.simulate_loop:
            per_step.append(stats.rule_calls - last_mark[0])
            last_mark[0] = stats.rule_calls
            if trace is not None:
                trace(len(per_step), dec(g)[0])
        elif loop is sim.outer_loop:
            stats.restarts += 1

    interp = Interp(mode=mode, max_rule_calls=max_rule_calls, loop_hook=hook)
    cfg = interp.run(sim.program, initial_graph(input, m.start))
    assert isinstance(cfg, Done), "simulator run cannot fail"
    got, k = dec(cfg.graph)
    assert got == final, "simulated final configuration diverged"
    st = interp.stats
    c = k + 2
    assert st.restarts == c - 2, "levels climbed and restarts disagree"
    bits = math.ceil(math.log2(st.peak_nodes)) if st.peak_nodes > 1 else 0
    metrics = Metrics(
        rule_calls=st.rule_calls,
        tm_steps=tm_steps,
        restarts=st.restarts,
        peak_graph_space=st.peak_graph_space,
        tape_squares_used=squares,
        final_c=c,
        final_b=3 ** c,
        uniform_space=st.peak_graph_space,
        log_space=st.peak_nodes * bits,
        peak_nodes=st.peak_nodes,
        per_step_rule_calls=per_step,
    )
    return metrics, got, cfg.graph


def measure(m: TuringMachine, input: str, max_steps: int = 10_000, *,
            mode: str = "efficient", max_rule_calls: Optional[int] = None,
            trace: Optional[Trace] = None) -> Metrics:
    """The counters of a full simulation run; see run_sim."""
    metrics, _, _ = run_sim(m, input, max_steps, mode=mode,
                            max_rule_calls=max_rule_calls, trace=trace)
    return metrics


class ModeAgreement(NamedTuple):
    graphs_equal: bool
    semantic_rule_calls: int
    efficient_rule_calls: int

    @property
    def ok(self) -> bool:
        return self.graphs_equal and \
            self.semantic_rule_calls == self.efficient_rule_calls


def compare_modes(m: TuringMachine, input: str, *,
                  max_rule_calls: Optional[int] = None) -> ModeAgreement:
    """Run both interpreter modes to completion and compare the outcomes."""
    results = []
    sim = gen_sim(m)
    for mode in ("semantic", "efficient"):
        interp = Interp(mode=mode, max_rule_calls=max_rule_calls)
        cfg = interp.run(sim.program, initial_graph(input, m.start))
        assert isinstance(cfg, Done), "simulator run cannot fail"
        results.append((cfg.graph, interp.stats.rule_calls))
    (g_sem, n_sem), (g_eff, n_eff) = results
    return ModeAgreement(g_sem == g_eff, n_sem, n_eff)


class BenchRow(NamedTuple):
    graph_space: int
    extensions: int
    seconds: float
    matches: int
    brute_seconds: Optional[float] = None


def bench_host(target_space: int, input: str = "1" + "0" * 19) -> Graph:
    """Smallest configuration graph of the benchmark family whose
    graph_space reaches the target: a fixed fresh configuration encoded
    at growing capacity levels."""
    s = TMConfiguration(0, input, 0, "", 0)
    for k in range(16):
        g = enc(s, k)
        if graph_space(g) >= target_space:
            return g
    raise ValueError(f"no benchmark host reaches graph_space {target_space}")


def _best_of(f: Callable[[], object], reps: int) -> float:
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        f()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_matching(rule: Rule, host_sizes: Sequence[int], *, reps: int = 5,
                   brute: bool = False,
                   input: str = "1" + "0" * 19) -> list[BenchRow]:
    """Time match_all for one rule over hosts of growing size.

    Each row records the host's graph_space, the extension counter (which
    stays flat for fast rules), and the best-of-reps wall time.  With
    brute=True the brute-force oracle is timed alongside; only sensible
    for single-node left-hand sides, where its cost is linear in the host.
    """
    rows = []
    for target in host_sizes:
        g = bench_host(target, input)
        found = match_all(rule.left, g)
        seconds = _best_of(lambda: match_all(rule.left, g), reps)
        brute_seconds = None
        if brute:
            brute_seconds = _best_of(lambda: match_bruteforce(rule.left, g),
                                     reps)
        rows.append(BenchRow(graph_space(g), found.extensions, seconds,
                             len(found.matches), brute_seconds))
    return rows
