"""Shared test helpers: random graphs and random machines."""

from minigp.graphs import Graph, Label
from minigp.matching import NotFastRule, edge_enumerations

FULL_ATOMS = [None, 0, 1, 2, "L", "R", "I"]
SMALL_ATOMS = [None, 0, 1]
NODE_MARKS = [None, "red", "green", "blue", "grey"]
EDGE_MARKS = [None, "red", "green", "blue", "dashed"]
SMALL_MARKS = [None, "red"]


def random_graph(rng, max_nodes, atoms, node_marks, edge_marks, root_p=0.4):
    g = Graph()
    n = rng.randint(0, max_nodes)
    for _ in range(n):
        g.add_node(Label(rng.choice(atoms), rng.choice(node_marks)),
                   root=rng.random() < root_p)
    ids = sorted(g.nodes)
    for _ in range(rng.randint(0, 2 * n) if n else 0):
        g.add_edge(rng.choice(ids), rng.choice(ids),
                   Label(rng.choice(atoms), rng.choice(edge_marks)))
    return g


def random_fast_lhs(rng, max_nodes=4, small=False):
    """Random left-hand side whose nodes are all reachable from roots."""
    atoms = SMALL_ATOMS if small else FULL_ATOMS
    marks = SMALL_MARKS if small else NODE_MARKS
    emarks = SMALL_MARKS if small else EDGE_MARKS
    while True:
        g = random_graph(rng, max_nodes, atoms, marks, emarks)
        try:
            edge_enumerations(g)
        except NotFastRule:
            continue
        return g


def embed_and_grow(rng, L, extra_nodes, atoms, node_marks, edge_marks):
    """Host containing an exact copy of L plus random extra structure."""
    g = Graph()
    image = {}
    for v in sorted(L.nodes):
        image[v] = g.add_node(L.nodes[v], root=v in L.roots)
    for e in sorted(L.edges):
        s, t, lab = L.edges[e]
        g.add_edge(image[s], image[t], lab)
    for _ in range(rng.randint(0, extra_nodes)):
        g.add_node(Label(rng.choice(atoms), rng.choice(node_marks)),
                   root=rng.random() < 0.15)
    ids = sorted(g.nodes)
    if ids:
        for _ in range(rng.randint(0, 4)):
            g.add_edge(rng.choice(ids), rng.choice(ids),
                       Label(rng.choice(atoms), rng.choice(edge_marks)))
    return g


def random_match_pair(rng, max_l=4, max_g=8):
    """A (fast L, host G) pair; about half the hosts embed L so matches exist."""
    small = rng.random() < 0.5
    atoms = SMALL_ATOMS if small else FULL_ATOMS
    marks = SMALL_MARKS if small else NODE_MARKS
    emarks = SMALL_MARKS if small else EDGE_MARKS
    L = random_fast_lhs(rng, max_l, small=small)
    if rng.random() < 0.5 and len(L.nodes) <= max_g:
        G = embed_and_grow(rng, L, max_g - len(L.nodes), atoms, marks, emarks)
    else:
        G = random_graph(rng, max_g, atoms, marks, emarks, root_p=0.25)
    return L, G
