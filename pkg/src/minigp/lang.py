"""Programs built from rule-set calls: parser, procedure inlining, and a
small-step interpreter.

Commands are rule-set calls, sequencing, if/try branching, as-long-as-
possible loops (`!`), grouping, and break.  Conditions and loop bodies are
critical subprograms: semantic mode snapshots the graph before entering
them, efficient mode runs in place and insists the snapshot would have been
pointless (no mutation on any path whose result gets discarded).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

from .graphs import Graph, graph_space
from .rules import Rule, RuleSet, apply_ruleset


class ParseError(ValueError):
    pass


class UnknownRule(ParseError):
    pass


class RecursiveProcedure(ParseError):
    pass


class BreakOutsideLoop(ParseError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class NullFailureViolation(RuntimeError):
    """Efficient mode found a discarded-result subprogram that mutated."""


class Com:
    """Base class for commands; instances compare by identity."""


@dataclass(eq=False, frozen=True)
class RuleCall(Com):
    names: tuple[str, ...]
    rules: RuleSet = field(repr=False)


@dataclass(eq=False, frozen=True)
class Seq(Com):
    parts: tuple[Com, ...]


@dataclass(eq=False, frozen=True)
class If(Com):
    cond: Com
    then: Com
    els: Com


@dataclass(eq=False, frozen=True)
class Try(Com):
    cond: Com
    then: Com
    els: Com


@dataclass(eq=False, frozen=True)
class Loop(Com):
    body: Com


@dataclass(eq=False, frozen=True)
class Break(Com):
    pass


@dataclass(eq=False, frozen=True)
class Program:
    main: tuple[Com, ...]
    procedures: dict[str, tuple[Com, ...]]
    library: dict[str, tuple[Rule, ...]]


@dataclass(frozen=True)
class Running:
    prog: tuple[Com, ...]
    graph: Graph


@dataclass(frozen=True)
class Done:
    graph: Graph


@dataclass(frozen=True)
class Fail:
    pass


ExecConfiguration = Union[Running, Done, Fail]


def is_terminal(cfg: ExecConfiguration) -> bool:
    """Done, Fail, or a bare break (a loop body that just left its loop)."""
    if isinstance(cfg, (Done, Fail)):
        return True
    return len(cfg.prog) == 1 and isinstance(cfg.prog[0], Break)


@dataclass
class ExecStats:
    rule_calls: int = 0
    mutations: int = 0
    restarts: int = 0
    peak_graph_space: int = 0
    peak_nodes: int = 0
    match_multiplicity_max: int = 0
    rule_applications: Counter = field(default_factory=Counter)


def _flatten(com: Com) -> tuple[Com, ...]:
    if isinstance(com, Seq):
        out: list[Com] = []
        for p in com.parts:
            out.extend(_flatten(p))
        return tuple(out)
    return (com,)


def _flatten_many(coms: Sequence[Com]) -> tuple[Com, ...]:
    out: list[Com] = []
    for c in coms:
        out.extend(_flatten(c))
    return tuple(out)


_KEYWORDS = frozenset({"if", "then", "else", "try", "break"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[(){};,!]|\S")


def _skip_rule() -> Rule:
    return Rule("skip", Graph(), Graph(), {})


class _Builder:
    """Shared state while turning declaration token lists into ASTs."""

    def __init__(self, decls: dict[str, list[str]], library: dict[str, tuple[Rule, ...]]):
        self.decls = decls
        self.library = library
        self.built: dict[str, tuple[Com, ...]] = {}
        self.stack: list[str] = []
        self._sets: dict[tuple[str, ...], RuleSet] = {}

    def procedure(self, name: str) -> tuple[Com, ...]:
        if name in self.built:
            return self.built[name]
        if name in self.stack:
            raise RecursiveProcedure(" -> ".join(self.stack + [name]))
        self.stack.append(name)
        body = _Parser(self, self.decls[name], name).toplevel()
        self.stack.pop()
        self.built[name] = body
        return body

    def rule_call(self, names: Sequence[str]) -> RuleCall:
        key = tuple(names)
        rs = self._sets.get(key)
        if rs is None:
            pool: list[Rule] = []
            for n in key:
                pool.extend(self.library[n])
            rs = self._sets[key] = RuleSet(pool)
        return RuleCall(key, rs)


class _Parser:
    def __init__(self, builder: _Builder, tokens: list[str], where: str):
        self.b = builder
        self.tokens = tokens
        self.pos = 0
        self.where = where

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        t = self.peek()
        if t is None:
            raise ParseError(f"{self.where}: unexpected end of declaration")
        self.pos += 1
        return t

    def expect(self, tok: str) -> None:
        t = self.take()
        if t != tok:
            raise ParseError(f"{self.where}: expected {tok!r}, got {t!r}")

    def toplevel(self) -> tuple[Com, ...]:
        parts = self.seq()
        if self.peek() is not None:
            raise ParseError(f"{self.where}: trailing {self.peek()!r}")
        return tuple(parts)

    def seq(self) -> list[Com]:
        parts = [self.com()]
        while self.peek() == ";":
            self.take()
            parts.append(self.com())
        return parts

    def com(self) -> Com:
        c = self.primary()
        while self.peek() == "!":
            self.take()
            c = Loop(c)
        return c

    def ident(self) -> str:
        t = self.take()
        if not _IDENT.fullmatch(t) or t in _KEYWORDS:
            raise ParseError(f"{self.where}: expected a name, got {t!r}")
        return t

    def skip_call(self) -> Com:
        return self.b.rule_call(("skip",))

    def primary(self) -> Com:
        t = self.take()
        if t == "(":
            parts = self.seq()
            self.expect(")")
            return parts[0] if len(parts) == 1 else Seq(tuple(parts))
        if t == "{":
            names = [self.ident()]
            while self.peek() == ",":
                self.take()
                names.append(self.ident())
            self.expect("}")
            for n in names:
                if n in self.b.decls:
                    raise ParseError(f"{self.where}: procedure {n!r} in a rule set")
                if n not in self.b.library:
                    raise UnknownRule(n)
            return self.b.rule_call(names)
        if t == "if":
            cond = self.com()
            self.expect("then")
            then = self.com()
            els = self.skip_call()
            if self.peek() == "else":
                self.take()
                els = self.com()
            return If(cond, then, els)
        if t == "try":
            cond = self.com()
            then = self.skip_call()
            els = self.skip_call()
            if self.peek() == "then":
                self.take()
                then = self.com()
            if self.peek() == "else":
                self.take()
                els = self.com()
            return Try(cond, then, els)
        if t == "break":
            return Break()
        if _IDENT.fullmatch(t) and t not in _KEYWORDS:
            if t in self.b.decls:
                body = self.b.procedure(t)
                return body[0] if len(body) == 1 else Seq(body)
            if t in self.b.library:
                return self.b.rule_call((t,))
            raise UnknownRule(t)
        raise ParseError(f"{self.where}: unexpected {t!r}")


def _check_breaks(coms: Sequence[Com], in_loop: bool) -> None:
    for c in coms:
        if isinstance(c, Break):
            if not in_loop:
                raise BreakOutsideLoop("break outside any loop body")
        elif isinstance(c, Seq):
            _check_breaks(c.parts, in_loop)
        elif isinstance(c, (If, Try)):
            _check_breaks((c.cond,), False)
            _check_breaks((c.then, c.els), in_loop)
        elif isinstance(c, Loop):
            _check_breaks((c.body,), True)


def parse_program(text: str, library: Mapping[str, object], entry: str = "Main") -> Program:
    """Parse declaration lines (`Name = commands`) against a rule library.

    Library values may be single rules or rule lists; a missing `skip` rule
    (the desugaring target of absent then/else branches) is provided.
    Procedures are inlined, so the result is recursion-free by construction.
    """
    lib: dict[str, tuple[Rule, ...]] = {}
    for name, val in library.items():
        lib[name] = (val,) if isinstance(val, Rule) else tuple(val)
    lib.setdefault("skip", (_skip_rule(),))

    decls: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S.*)$", line)
        if not m:
            raise ParseError(f"line {lineno}: expected 'Name = commands'")
        name, body = m.group(1), m.group(2)
        if name in _KEYWORDS:
            raise ParseError(f"line {lineno}: {name!r} is a keyword")
        if name in decls:
            raise ParseError(f"line {lineno}: duplicate declaration {name!r}")
        if name in lib:
            raise ParseError(f"line {lineno}: {name!r} shadows a library rule")
        decls[name] = _TOKEN.findall(body)
    if entry not in decls:
        raise ParseError(f"no declaration named {entry!r}")

    builder = _Builder(decls, lib)
    for name in decls:
        builder.procedure(name)
    main = builder.built[entry]
    _check_breaks(main, False)
    return Program(main, builder.built, lib)


class Interp:
    """Small-step executor over configurations ⟨program rest, graph⟩.

    One step resolves the leading command: a rule-set call applies or fails,
    branching runs its condition to a terminal outcome, a loop runs one whole
    body iteration.  `loop_hook(loop, graph, stats)` fires after each
    completed (non-breaking, non-failing) iteration.
    """

    def __init__(
        self,
        *,
        mode: str = "semantic",
        max_rule_calls: Optional[int] = None,
        loop_hook: Optional[Callable[[Loop, Graph, ExecStats], None]] = None,
        apply_hook: Optional[Callable[[str, Graph], None]] = None,
    ):
        if mode not in ("semantic", "efficient"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.max_rule_calls = max_rule_calls
        self.loop_hook = loop_hook
        self.apply_hook = apply_hook
        self.stats = ExecStats()

    def run(self, program: Union[Program, Com, Sequence[Com]], g0: Graph) -> ExecConfiguration:
        """Step to a terminal configuration.  Efficient mode mutates g0."""
        if isinstance(program, Program):
            coms: Sequence[Com] = program.main
        elif isinstance(program, Com):
            coms = (program,)
        else:
            coms = tuple(program)
        self._note(g0)
        flat = _flatten_many(coms)
        cfg: ExecConfiguration = Running(flat, g0) if flat else Done(g0)
        while not is_terminal(cfg):
            cfg = self.step(cfg)
        if isinstance(cfg, Running):
            raise RuntimeError("break escaped the program")
        return cfg

    def step(self, cfg: ExecConfiguration) -> ExecConfiguration:
        if not isinstance(cfg, Running) or is_terminal(cfg):
            raise ValueError("step needs a non-terminal Running configuration")
        com, rest, G = cfg.prog[0], cfg.prog[1:], cfg.graph
        if isinstance(com, Break):
            return Running((com,), G)
        if isinstance(com, Seq):
            return Running(_flatten(com) + rest, G)
        if isinstance(com, RuleCall):
            out = self._call(com, G)
            if not out.applied:
                return Fail()
            return Running(rest, out.graph) if rest else Done(out.graph)
        if isinstance(com, If):
            ok, _ = self._condition(com.cond, G, keep=False)
            branch = com.then if ok else com.els
            return Running(_flatten(branch) + rest, G)
        if isinstance(com, Try):
            ok, H = self._condition(com.cond, G, keep=True)
            branch, g = (com.then, H) if ok else (com.els, G)
            return Running(_flatten(branch) + rest, g)
        if isinstance(com, Loop):
            t = self._iteration(com.body, G)
            if isinstance(t, Done):
                if self.loop_hook is not None:
                    self.loop_hook(com, t.graph, self.stats)
                return Running(cfg.prog, t.graph)
            if isinstance(t, Fail):
                return Running(rest, G) if rest else Done(G)
            return Running(rest, t.graph) if rest else Done(t.graph)
        raise TypeError(f"cannot step {com!r}")

    def _subrun(self, com: Com, g: Graph) -> ExecConfiguration:
        cfg: ExecConfiguration = Running(_flatten(com), g)
        while not is_terminal(cfg):
            cfg = self.step(cfg)
        return cfg

    def _condition(self, com: Com, G: Graph, keep: bool) -> tuple[bool, Optional[Graph]]:
        before = self.stats.mutations
        t = self._subrun(com, G.copy() if self.mode == "semantic" else G)
        if isinstance(t, Running):
            raise RuntimeError("break escaped a condition")
        ok = isinstance(t, Done)
        if self.mode == "efficient" and self.stats.mutations != before:
            if not ok:
                raise NullFailureViolation("failing condition mutated the graph")
            if not keep:
                raise NullFailureViolation("if-condition mutated the graph it discards")
        return ok, (t.graph if ok else None)

    def _iteration(self, body: Com, G: Graph) -> ExecConfiguration:
        before = self.stats.mutations
        t = self._subrun(body, G.copy() if self.mode == "semantic" else G)
        if isinstance(t, Fail) and self.mode == "efficient" and self.stats.mutations != before:
            raise NullFailureViolation("failing loop body mutated the graph")
        return t

    def _call(self, com: RuleCall, G: Graph):
        st = self.stats
        if self.max_rule_calls is not None and st.rule_calls >= self.max_rule_calls:
            raise BudgetExceeded(f"rule-call budget {self.max_rule_calls} exhausted")
        st.rule_calls += 1
        out = apply_ruleset(G, com.rules, in_place=(self.mode == "efficient"))
        st.match_multiplicity_max = max(st.match_multiplicity_max, out.total_matches)
        if out.applied:
            st.rule_applications[out.rule_name] += 1
            if not com.rules.rule(out.rule_name).is_static_noop():
                st.mutations += 1
            self._note(out.graph)
            if self.apply_hook is not None:
                self.apply_hook(out.rule_name, out.graph)
        return out

    def _note(self, g: Graph) -> None:
        st = self.stats
        st.peak_graph_space = max(st.peak_graph_space, graph_space(g))
        st.peak_nodes = max(st.peak_nodes, len(g.nodes))


def run_program(
    program: Union[Program, Com, Sequence[Com]],
    g0: Graph,
    *,
    mode: str = "semantic",
    max_rule_calls: Optional[int] = None,
    loop_hook: Optional[Callable[[Loop, Graph, ExecStats], None]] = None,
) -> tuple[ExecConfiguration, ExecStats]:
    """One-shot run; returns the terminal configuration and its statistics."""
    interp = Interp(mode=mode, max_rule_calls=max_rule_calls, loop_hook=loop_hook)
    cfg = interp.run(program, g0)
    return cfg, interp.stats
