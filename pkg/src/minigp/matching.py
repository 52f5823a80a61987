"""Injective root-preserving morphisms and root-driven match enumeration.

Matching seeds at host roots and grows along per-root edge enumerations,
so for rules whose nodes are all root-reachable the work done is independent
of host size.  A brute-force enumerator over all injective mappings serves
as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import NamedTuple, Optional

from .graphs import Graph


class NotFastRule(Exception):
    """Some left-hand-side node is unreachable from every root."""

    def __init__(self, node: int):
        super().__init__(f"node {node} is not reachable from any root")
        self.node = node


@dataclass
class PartialMorphism:
    """Injective structure-preserving partial map between two graphs."""

    node_map: dict[int, int] = field(default_factory=dict)
    edge_map: dict[int, int] = field(default_factory=dict)

    def copy(self) -> PartialMorphism:
        return PartialMorphism(dict(self.node_map), dict(self.edge_map))

    def key(self) -> tuple:
        return (tuple(sorted(self.node_map.items())),
                tuple(sorted(self.edge_map.items())))


def check_morphism(h: PartialMorphism, L: Graph, G: Graph) -> bool:
    """True iff h is an injective partial morphism L -> G that preserves
    sources, targets and labels and both preserves and reflects roots."""
    if len(set(h.node_map.values())) != len(h.node_map):
        return False
    if len(set(h.edge_map.values())) != len(h.edge_map):
        return False
    for v, w in h.node_map.items():
        if v not in L.nodes or w not in G.nodes:
            return False
        if L.nodes[v] != G.nodes[w]:
            return False
        if (v in L.roots) != (w in G.roots):
            return False
    for e, f in h.edge_map.items():
        if e not in L.edges or f not in G.edges:
            return False
        ls, lt, llab = L.edges[e]
        gs, gt, glab = G.edges[f]
        if llab != glab:
            return False
        if h.node_map.get(ls) != gs or h.node_map.get(lt) != gt:
            return False
    return True


def _node_ok(L: Graph, G: Graph, h: PartialMorphism, v: int, w: int) -> bool:
    if w in h.node_map.values():
        return False
    if L.nodes[v] != G.nodes[w]:
        return False
    return (v in L.roots) == (w in G.roots)


def extend_node(h: PartialMorphism, L: Graph, G: Graph, v: int,
                w: int) -> Optional[PartialMorphism]:
    """Extend h by node v -> w, or None if the result would be invalid."""
    if v in h.node_map:
        return None
    if not _node_ok(L, G, h, v, w):
        return None
    out = h.copy()
    out.node_map[v] = w
    return out


def extend_edge(h: PartialMorphism, L: Graph, G: Graph, e: int,
                f: int) -> Optional[PartialMorphism]:
    """Extend h by edge e -> f, mapping any unmapped endpoints to f's.
    Returns None if the result would be invalid."""
    if e in h.edge_map or f in h.edge_map.values():
        return None
    ls, lt, llab = L.edges[e]
    gs, gt, glab = G.edges[f]
    if llab != glab:
        return None
    out = h.copy()
    for lv, gv in ((ls, gs), (lt, gt)):
        if lv in out.node_map:
            if out.node_map[lv] != gv:
                return None
        else:
            if not _node_ok(L, G, out, lv, gv):
                return None
            out.node_map[lv] = gv
    out.edge_map[e] = f
    return out


def extend(h: PartialMorphism, L: Graph, G: Graph, item: int, image: int,
           kind: str = "node") -> Optional[PartialMorphism]:
    if kind == "node":
        return extend_node(h, L, G, item, image)
    if kind == "edge":
        return extend_edge(h, L, G, item, image)
    raise ValueError(f"unknown item kind {kind!r}")


def edge_enumerations(L: Graph) -> dict[int, list[int]]:
    """Per-root edge orderings that jointly cover every edge of L.

    Each root's list is a breadth-first expansion: an edge appears only after
    its source node has been introduced by the root or an earlier edge.
    Raises NotFastRule if some node is unreachable from every root."""
    enums: dict[int, list[int]] = {}
    claimed: set[int] = set()
    covered: set[int] = set()
    for root in sorted(L.roots):
        order: list[int] = []
        seen = {root}
        queue = [root]
        while queue:
            u = queue.pop(0)
            for e in L.out_edges(u):
                if e in claimed:
                    continue
                claimed.add(e)
                order.append(e)
                t = L.edges[e][1]
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        enums[root] = order
        covered |= seen
    missing = set(L.nodes) - covered
    if missing:
        raise NotFastRule(min(missing))
    return enums


class MatchResult(NamedTuple):
    matches: list[PartialMorphism]
    extensions: int


def match_all(L: Graph, G: Graph) -> MatchResult:
    """All total injective root-preserving/reflecting morphisms L -> G,
    found by seeding each root at host roots and extending along its edge
    enumeration.  Also reports how many single-item extensions were tried."""
    enums = edge_enumerations(L)
    partials = [PartialMorphism()]
    count = 0
    host_roots = sorted(G.roots)
    for root in sorted(L.roots):
        # A root already reached through an earlier enumeration is tagged.
        if not (partials and root in partials[0].node_map):
            grown: list[PartialMorphism] = []
            for h in partials:
                for w in host_roots:
                    count += 1
                    f = extend_node(h, L, G, root, w)
                    if f is not None:
                        grown.append(f)
            partials = grown
        for e in enums[root]:
            src = L.edges[e][0]
            grown = []
            for h in partials:
                for cand in G.out_edges(h.node_map[src]):
                    count += 1
                    f = extend_edge(h, L, G, e, cand)
                    if f is not None:
                        grown.append(f)
            partials = grown
    return MatchResult(partials, count)


def match_bruteforce(L: Graph, G: Graph) -> list[PartialMorphism]:
    """Oracle enumerator: every injective node mapping crossed with every
    compatible edge mapping, filtered through check_morphism."""
    lnodes = sorted(L.nodes)
    ledges = sorted(L.edges)
    results = []
    for images in permutations(sorted(G.nodes), len(lnodes)):
        nm = dict(zip(lnodes, images))
        cands = []
        for e in ledges:
            s, t, lab = L.edges[e]
            want = (nm[s], nm[t], lab)
            cands.append([f for f in sorted(G.edges) if G.edges[f] == want])
        for combo in product(*cands):
            if len(set(combo)) != len(combo):
                continue
            h = PartialMorphism(dict(nm), dict(zip(ledges, combo)))
            if check_morphism(h, L, G):
                results.append(h)
    results.sort(key=PartialMorphism.key)
    return results
