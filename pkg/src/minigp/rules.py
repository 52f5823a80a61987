"""Rules with relabelling and their application to host graphs.

A rule is a pair of totally labelled graphs sharing an interface of node ids.
Application deletes the matched image of the left side (edges, then non-
interface nodes), adds the right side's new nodes and all of its edges, and
relabels/re-roots the interface images from the right side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import graphs
from .graphs import Graph, Label
from .matching import PartialMorphism, edge_enumerations, match_all


class DanglingViolation(Exception):
    """A deleted node would leave behind an incident host edge."""


@dataclass
class Rule:
    """name, left graph, right graph, and the interface node ids shared by
    both sides (mapped left-id -> right-id; the identity map by convention)."""

    name: str
    left: Graph
    right: Graph
    interface: dict[int, int]
    _plan: Optional[dict] = field(default=None, repr=False, compare=False)
    _noop: Optional[bool] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        for lv, rv in self.interface.items():
            if lv not in self.left.nodes or rv not in self.right.nodes:
                raise ValueError(f"rule {self.name}: interface {lv}={rv} not in both sides")
        if len(set(self.interface.values())) != len(self.interface):
            raise ValueError(f"rule {self.name}: interface is not a bijection")

    def plan(self) -> dict[int, list[int]]:
        """Cached edge enumerations of the left side."""
        if self._plan is None:
            self._plan = edge_enumerations(self.left)
        return self._plan

    def is_static_noop(self) -> bool:
        """True iff applying the rule can never change any host graph:
        no edges on either side, nothing deleted or added, and interface
        labels and root statuses identical across the two sides."""
        if self._noop is None:
            r = self
            self._noop = (
                not r.left.edges and not r.right.edges
                and set(r.left.nodes) == set(r.interface)
                and set(r.right.nodes) == set(r.interface.values())
                and all(r.left.nodes[lv] == r.right.nodes[rv]
                        and (lv in r.left.roots) == (rv in r.right.roots)
                        for lv, rv in r.interface.items())
            )
        return self._noop


def dangling_ok(h: PartialMorphism, r: Rule, G: Graph) -> bool:
    """True iff no node slated for deletion keeps a host edge outside the match."""
    matched_edges = set(h.edge_map.values())
    for lv in r.left.nodes:
        if lv in r.interface:
            continue
        w = h.node_map[lv]
        for e in G.out_edges(w):
            if e not in matched_edges:
                return False
        for e in G.in_edges(w):
            if e not in matched_edges:
                return False
    return True


def apply(G: Graph, r: Rule, h: PartialMorphism, in_place: bool = False) -> Graph:
    """Apply r at the total match h.  Preserved items keep their ids; new
    nodes and all right-side edges get fresh ids in ascending rule-id order."""
    if not dangling_ok(h, r, G):
        raise DanglingViolation(f"rule {r.name} at {h.node_map}")
    H = G if in_place else G.copy()
    for e in sorted(h.edge_map):
        H.remove_edge(h.edge_map[e])
    node_map = {rv: h.node_map[lv] for lv, rv in r.interface.items()}
    for lv in sorted(r.left.nodes):
        if lv not in r.interface:
            H.remove_node(h.node_map[lv])
    for rv in sorted(r.right.nodes):
        if rv in node_map:
            H.relabel_node(node_map[rv], r.right.nodes[rv])
        else:
            node_map[rv] = H.add_node(r.right.nodes[rv])
    for re_ in sorted(r.right.edges):
        s, t, lab = r.right.edges[re_]
        H.add_edge(node_map[s], node_map[t], lab)
    for lv in r.interface:
        H.roots.discard(h.node_map[lv])
    for rv in r.right.roots:
        H.roots.add(node_map[rv])
    return H


class RuleSet:
    """Ordered rule list with an index from root label to candidate rules.

    Rules whose left side has exactly one root can only match hosts carrying
    a root with that label, so scanning skips the rest.  Skipped rules have
    zero matches by construction, leaving outcomes and counts unchanged."""

    def __init__(self, rules: list[Rule]):
        self.rules = list(rules)
        self._names: dict[str, Rule] = {}
        self._by_label: dict[Label, list[int]] = {}
        self._always: list[int] = []
        for i, r in enumerate(self.rules):
            self._names.setdefault(r.name, r)
            roots = r.left.roots
            if len(roots) == 1:
                lab = r.left.nodes[next(iter(roots))]
                self._by_label.setdefault(lab, []).append(i)
            else:
                self._always.append(i)

    def candidates(self, G: Graph) -> list[Rule]:
        idxs = list(self._always)
        for v in G.roots:
            idxs.extend(self._by_label.get(G.nodes[v], ()))
        return [self.rules[i] for i in sorted(set(idxs))]

    def rule(self, name: str) -> Rule:
        return self._names[name]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)


class Outcome(NamedTuple):
    applied: bool
    graph: Graph
    rule_name: Optional[str]
    match: Optional[PartialMorphism]
    total_matches: int


def apply_ruleset(G: Graph, rules, in_place: bool = False) -> Outcome:
    """Scan rules in declared order and apply the first match of the first
    rule that has one satisfying the dangling condition.  The total number
    of applicable matches across the whole set is reported either way."""
    if not isinstance(rules, RuleSet):
        rules = RuleSet(list(rules))
    total = 0
    chosen = None
    for r in rules.candidates(G):
        ok = [m for m in match_all(r.left, G).matches if dangling_ok(m, r, G)]
        total += len(ok)
        if ok and chosen is None:
            chosen = (r, ok[0])
    if chosen is None:
        return Outcome(False, G, None, None, total)
    r, m = chosen
    H = apply(G, r, m, in_place=in_place)
    return Outcome(True, H, r.name, m, total)


def rules_to_text(rules: list[Rule]) -> str:
    """Serialize rules as left/right graph blocks plus an interface line."""
    out = []
    for r in rules:
        out.append(f"rule {r.name}")
        out.append("left")
        out.append(graphs.to_text(r.left).rstrip("\n"))
        out.append("right")
        out.append(graphs.to_text(r.right).rstrip("\n"))
        pairs = " ".join(f"{lv}={rv}" for lv, rv in sorted(r.interface.items()))
        out.append(f"interface {pairs}".rstrip())
        out.append("end")
    return "\n".join(out) + "\n"


def parse_rules(text: str) -> list[Rule]:
    """Parse the rules_to_text format; round-trips exactly."""
    rules: list[Rule] = []
    name = None
    section = None
    blocks: dict[str, list[str]] = {}
    interface: dict[int, int] = {}

    def finish():
        if name is None:
            return
        for side in ("left", "right"):
            if side not in blocks:
                raise graphs.ParseError(f"rule {name}: missing {side} block")
        rules.append(Rule(name, graphs.from_text("\n".join(blocks["left"])),
                          graphs.from_text("\n".join(blocks["right"])),
                          dict(interface)))

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "rule":
            finish()
            if len(toks) != 2:
                raise graphs.ParseError(f"bad rule header {line!r}")
            name, section, blocks, interface = toks[1], None, {}, {}
        elif toks[0] in ("left", "right") and len(toks) == 1:
            section = toks[0]
            blocks[section] = []
        elif toks[0] == "interface":
            section = None
            for pair in toks[1:]:
                lv, _, rv = pair.partition("=")
                try:
                    interface[int(lv)] = int(rv)
                except ValueError:
                    raise graphs.ParseError(f"bad interface pair {pair!r}") from None
        elif toks[0] == "end":
            finish()
            name, section = None, None
        elif section is not None:
            blocks[section].append(line)
        else:
            raise graphs.ParseError(f"unexpected line {line!r}")
    finish()
    return rules
