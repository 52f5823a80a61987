"""Parser and interpreter checks: grammar shapes, inlining, and one test per
inference rule of the step relation."""

from __future__ import annotations

import pytest

from minigp.graphs import Graph, Label, to_text
from minigp.lang import (
    Break,
    BreakOutsideLoop,
    BudgetExceeded,
    Done,
    Fail,
    If,
    Interp,
    Loop,
    NullFailureViolation,
    ParseError,
    RecursiveProcedure,
    RuleCall,
    Running,
    Seq,
    Try,
    UnknownRule,
    is_terminal,
    parse_program,
    run_program,
)
from minigp.rules import Rule


def node_rule(name, before, after, extra=0):
    """Relabel the root from `before` to `after`, adding `extra` new nodes."""
    left = Graph()
    left.add_node(Label(before), root=True)
    right = Graph()
    right.add_node(Label(after), root=True)
    for _ in range(extra):
        right.add_node(Label(7))
    return Rule(name, left, right, {0: 0})


LIB = {
    "a": node_rule("a", 0, 1),
    "b": node_rule("b", 1, 2),
    "c": node_rule("c", 2, 3),
    "back": node_rule("back", 1, 0),
    "never": node_rule("never", 99, 99),
    "probe": node_rule("probe", 0, 0),
    "grow": node_rule("grow", 0, 0, extra=1),
}


def host(label=0):
    g = Graph()
    g.add_node(Label(label), root=True)
    return g


def parse(text, entry="Main"):
    return parse_program(text, LIB, entry=entry)


class TestParse:
    def test_loop_over_rule(self):
        p = parse("Main = a!")
        (loop,) = p.main
        assert isinstance(loop, Loop)
        assert isinstance(loop.body, RuleCall)
        assert loop.body.names == ("a",)

    def test_set_call_and_try(self):
        p = parse("Main = {a,b}; try c then a else b")
        call, tr = p.main
        assert isinstance(call, RuleCall)
        assert call.names == ("a", "b")
        assert len(call.rules) == 2
        assert isinstance(tr, Try)
        assert tr.cond.names == ("c",)
        assert tr.then.names == ("a",)
        assert tr.els.names == ("b",)

    def test_loop_binds_tighter_than_seq(self):
        p = parse("Main = a; b!")
        first, second = p.main
        assert isinstance(first, RuleCall)
        assert isinstance(second, Loop)

    def test_grouping(self):
        p = parse("Main = (a; b)!")
        (loop,) = p.main
        assert isinstance(loop.body, Seq)
        assert [c.names for c in loop.body.parts] == [("a",), ("b",)]

    def test_missing_branches_become_skip(self):
        p = parse("Main = if a then b\nOther = try a")
        (iff,) = p.main
        assert iff.els.names == ("skip",)
        (tr,) = p.procedures["Other"]
        assert tr.then.names == ("skip",)
        assert tr.els.names == ("skip",)

    def test_if_requires_then(self):
        with pytest.raises(ParseError):
            parse("Main = if a")

    def test_procedure_inlining(self):
        p = parse("Main = P; a\nP = b; c")
        seq, call = p.main
        assert isinstance(seq, Seq)
        assert [c.names for c in seq.parts] == [("b",), ("c",)]
        assert call.names == ("a",)

    def test_single_command_procedure_inlines_bare(self):
        p = parse("Main = P!\nP = a")
        (loop,) = p.main
        assert isinstance(loop.body, RuleCall)

    def test_forward_reference(self):
        p = parse("Main = Later\nLater = a")
        (call,) = p.main
        assert call.names == ("a",)

    def test_recursion_rejected(self):
        with pytest.raises(RecursiveProcedure):
            parse("Main = P\nP = Q\nQ = P")
        with pytest.raises(RecursiveProcedure):
            parse("Main = a; Main")

    def test_unknown_name(self):
        with pytest.raises(UnknownRule):
            parse("Main = zzz")
        with pytest.raises(UnknownRule):
            parse("Main = {a, zzz}")

    def test_procedure_not_allowed_in_set(self):
        with pytest.raises(ParseError):
            parse("Main = {a, P}\nP = b")

    def test_break_placement(self):
        parse("Main = (a; break)!")
        parse("Main = (if a then break)!")
        parse("Main = (try a then b else break)!")
        with pytest.raises(BreakOutsideLoop):
            parse("Main = break")
        with pytest.raises(BreakOutsideLoop):
            parse("Main = if a then break")
        with pytest.raises(BreakOutsideLoop):
            parse("Main = (if break then a)!")

    def test_break_in_procedure_checked_at_call_site(self):
        parse("Main = (P)!\nP = a; break")
        with pytest.raises(BreakOutsideLoop):
            parse("Main = P\nP = a; break")

    def test_declaration_errors(self):
        with pytest.raises(ParseError):
            parse("Main = a\nMain = b")
        with pytest.raises(ParseError):
            parse("Main = a\na = b")
        with pytest.raises(ParseError):
            parse("Other = a")
        with pytest.raises(ParseError):
            parse("Main = a)")
        with pytest.raises(ParseError):
            parse("Main = a $ b")
        with pytest.raises(ParseError):
            parse("Main = (a; b")

    def test_entry_selection(self):
        p = parse("Main = a\nAux = b", entry="Aux")
        assert p.main[0].names == ("b",)

    def test_comments_and_blanks(self):
        p = parse("# header\n\nMain = a  # trailing\n")
        assert p.main[0].names == ("a",)


def step_once(text, g, mode="semantic"):
    p = parse(text)
    interp = Interp(mode=mode)
    return interp, interp.step(Running(p.main, g))


class TestStep:
    def test_call_success(self):
        interp, cfg = step_once("Main = a", host())
        assert isinstance(cfg, Done)
        assert cfg.graph.nodes[0] == Label(1)
        assert interp.stats.rule_calls == 1

    def test_call_failure(self):
        interp, cfg = step_once("Main = never", host())
        assert cfg == Fail()

    def test_seq_advances(self):
        p = parse("Main = a; b")
        interp = Interp()
        cfg = interp.step(Running(p.main, host()))
        assert isinstance(cfg, Running)
        assert cfg.prog == (p.main[1],)
        assert cfg.graph.nodes[0] == Label(1)

    def test_if_success_discards_condition_graph(self):
        g = host()
        interp, cfg = step_once("Main = if grow then b else c", g)
        assert isinstance(cfg, Running)
        assert cfg.prog[0].names == ("b",)
        assert cfg.graph is g
        assert len(g.nodes) == 1

    def test_if_failure_takes_else(self):
        g = host()
        interp, cfg = step_once("Main = if never then b else c", g)
        assert cfg.prog[0].names == ("c",)
        assert cfg.graph is g

    def test_try_success_keeps_condition_graph(self):
        g = host()
        interp, cfg = step_once("Main = try a then b else c", g)
        assert cfg.prog[0].names == ("b",)
        assert cfg.graph.nodes[0] == Label(1)

    def test_try_failure_restores(self):
        g = host()
        snapshot = g.copy()
        interp, cfg = step_once("Main = try (grow; never) then b else c", g)
        assert cfg.prog[0].names == ("c",)
        assert cfg.graph is g
        assert g == snapshot
        assert interp.stats.mutations == 1

    def test_loop_iteration_continues(self):
        p = parse("Main = (a; back)!")
        interp = Interp()
        start = Running(p.main, host())
        cfg = interp.step(start)
        assert isinstance(cfg, Running)
        assert cfg.prog == start.prog
        assert cfg.graph.nodes[0] == Label(0)

    def test_loop_failure_restores_pre_iteration_graph(self):
        g = host()
        snapshot = g.copy()
        interp, cfg = step_once("Main = (grow; never)!", g)
        assert isinstance(cfg, Done)
        assert cfg.graph is g
        assert g == snapshot

    def test_loop_body_break_ends_loop_with_break_graph(self):
        interp, cfg = step_once("Main = (a; break)!", host())
        assert isinstance(cfg, Done)
        assert cfg.graph.nodes[0] == Label(1)

    def test_break_discards_continuation(self):
        p = parse("Main = (break; a; b)!")
        (loop,) = p.main
        interp = Interp()
        body = loop.body
        cfg = interp.step(Running((body.parts), host()))
        assert isinstance(cfg, Running)
        assert len(cfg.prog) == 1 and isinstance(cfg.prog[0], Break)
        assert is_terminal(cfg)

    def test_step_rejects_terminals(self):
        interp = Interp()
        with pytest.raises(ValueError):
            interp.step(Done(host()))
        with pytest.raises(ValueError):
            interp.step(Running((Break(),), host()))

    def test_loop_hook_skips_break_iterations(self):
        seen = []
        p = parse("Main = (a; break)!")
        interp = Interp(loop_hook=lambda node, g, st: seen.append(g.nodes[0].atom))
        cfg = interp.run(p, host())
        assert isinstance(cfg, Done)
        assert cfg.graph.nodes[0] == Label(1)
        assert seen == []

    def test_loop_hook_counts_iterations(self):
        seen = []
        text = "Main = (a; back)!"
        interp = Interp(max_rule_calls=10, loop_hook=lambda n, g, s: seen.append(1))
        with pytest.raises(BudgetExceeded):
            interp.run(parse(text), host())
        assert len(seen) == 5


class TestRun:
    def test_sequence(self):
        cfg, stats = run_program(parse("Main = a; b; c"), host())
        assert isinstance(cfg, Done)
        assert cfg.graph.nodes[0] == Label(3)
        assert stats.rule_calls == 3
        assert stats.mutations == 3
        assert stats.rule_applications == {"a": 1, "b": 1, "c": 1}

    def test_failure_propagates(self):
        cfg, stats = run_program(parse("Main = a; never; b"), host())
        assert cfg == Fail()
        assert stats.rule_calls == 2

    def test_failed_loop_counts_one_call(self):
        cfg, stats = run_program(parse("Main = never!"), host())
        assert isinstance(cfg, Done)
        assert stats.rule_calls == 1
        assert cfg.graph == host()

    def test_skip_applies_without_mutating(self):
        cfg, stats = run_program(parse("Main = if never then a"), host())
        assert isinstance(cfg, Done)
        assert stats.rule_calls == 2
        assert stats.mutations == 0
        assert stats.rule_applications["skip"] == 1

    def test_nested_loops(self):
        text = "Main = ((a; break)!; (b; break)!; c)!"
        cfg, stats = run_program(parse(text), host(), max_rule_calls=50)
        assert isinstance(cfg, Done)
        assert cfg.graph.nodes[0] == Label(3)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            run_program(parse("Main = probe!"), host(), max_rule_calls=10)

    def test_match_multiplicity(self):
        two = Graph()
        r = two.add_node(Label(0), root=True)
        for _ in range(2):
            v = two.add_node(Label(1))
            two.add_edge(r, v, Label(None))
        left = Graph()
        lr = left.add_node(Label(0), root=True)
        lv = left.add_node(Label(1))
        left.add_edge(lr, lv, Label(None))
        pick = Rule("pick", left, left.copy(), {lr: lr, lv: lv})
        prog = parse_program("Main = pick", {"pick": pick})
        cfg, stats = run_program(prog, two)
        assert isinstance(cfg, Done)
        assert stats.match_multiplicity_max == 2

    def test_peak_space_counts_condition_copies(self):
        cfg, stats = run_program(parse("Main = try (grow; grow; never) then a"), host())
        assert isinstance(cfg, Done)
        assert stats.peak_graph_space == 3
        assert stats.peak_nodes == 3
        assert cfg.graph == host()


class TestModes:
    def test_modes_agree_on_infinite_clean_loop(self):
        text = "Main = (if probe then (a; back) else never)!"
        sem = Interp(mode="semantic", max_rule_calls=40)
        eff = Interp(mode="efficient", max_rule_calls=40)
        with pytest.raises(BudgetExceeded):
            sem.run(parse(text), host())
        with pytest.raises(BudgetExceeded):
            eff.run(parse(text), host())
        assert sem.stats.rule_calls == eff.stats.rule_calls == 40
        assert sem.stats.mutations == eff.stats.mutations

    def test_modes_agree_end_to_end(self):
        text = "Main = try a then (b; c) else never; probe!"
        cfg1, st1 = run_program(parse(text), host(), mode="semantic")
        g2 = host()
        cfg2, st2 = run_program(parse(text), g2, mode="efficient")
        assert isinstance(cfg1, Done) and isinstance(cfg2, Done)
        assert cfg1.graph == cfg2.graph
        assert cfg1.graph.nodes[0] == Label(3)
        assert cfg2.graph is g2
        assert (st1.rule_calls, st1.mutations) == (st2.rule_calls, st2.mutations)

    def test_efficient_flags_mutating_failed_loop_body(self):
        with pytest.raises(NullFailureViolation):
            run_program(parse("Main = (grow; never)!"), host(), mode="efficient")

    def test_efficient_flags_mutating_failed_condition(self):
        with pytest.raises(NullFailureViolation):
            run_program(parse("Main = try (grow; never) then a"), host(), mode="efficient")

    def test_efficient_flags_mutating_if_condition_success(self):
        with pytest.raises(NullFailureViolation):
            run_program(parse("Main = if grow then a"), host(), mode="efficient")

    def test_efficient_allows_kept_try_condition(self):
        cfg, stats = run_program(parse("Main = try grow then probe"), host(), mode="efficient")
        assert isinstance(cfg, Done)
        assert len(cfg.graph.nodes) == 2

    def test_efficient_allows_noop_if_condition(self):
        cfg, stats = run_program(parse("Main = if probe then a else b"), host(), mode="efficient")
        assert isinstance(cfg, Done)
        assert cfg.graph.nodes[0] == Label(1)

    def test_semantic_restore_is_id_level(self):
        g = host()
        g.add_node(Label(5))
        before = to_text(g)
        cfg, _ = run_program(parse("Main = (grow; grow; never)!"), g)
        assert cfg.graph is g
        assert to_text(g) == before
