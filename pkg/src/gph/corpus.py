"""Seeded generators of graphs, morphisms and squares for testing.

All generators take a :class:`random.Random` so corpora are reproducible.
"""
from __future__ import annotations

import random
from typing import Iterator

from .factorization import (
    LiftSquare,
    _cycle_reaching_nodes,
    attach_forest,
    elementary_fold,
    factor_fold_inject,
    factor_whisker_surject,
    fold_generator,
    source_generator,
)
from .graph import (
    Graph,
    GraphMorphism,
    VoltageAssignment,
    bouquet,
    build_covering,
    compose,
    coproduct,
    copair,
    cycle_graph,
    cycle_wrap,
    identity,
    path_graph,
    quotient,
    subgraph,
)
from .unionfind import UnionFind


# -- graphs ----------------------------------------------------------------------

def random_graph(rng: random.Random, max_nodes: int = 8, max_arcs: int = 16, sparse: bool = False) -> Graph:
    """Uniform-ish random multigraph; ``sparse`` caps arcs at ``2n + 2``."""
    n = rng.randint(1, max_nodes)
    cap = min(max_arcs, 2 * n + 2) if sparse else max_arcs
    m = rng.randint(0, cap)
    return Graph.from_arcs(n, [(rng.randrange(n), rng.randrange(n)) for _ in range(m)])


def random_dag(rng: random.Random, max_nodes: int = 6, max_arcs: int = 8) -> Graph:
    n = rng.randint(1, max_nodes)
    pairs = []
    if n > 1:
        for _ in range(rng.randint(0, max_arcs)):
            i, j = sorted(rng.sample(range(n), 2))
            pairs.append((i, j))
    return Graph.from_arcs(n, pairs)


def random_forest(rng: random.Random, max_nodes: int = 5) -> Graph:
    n = rng.randint(1, max_nodes)
    pairs = []
    for v in range(1, n):
        if rng.random() < 0.75:
            pairs.append((rng.randrange(v), v))
    return Graph.from_arcs(n, sorted(pairs, key=lambda p: p[1]))


def graph_corpus(seed: int = 0, count: int = 60) -> list[Graph]:
    """Named small graphs followed by sparse random ones (<= 8 nodes)."""
    rng = random.Random(seed)
    named = [
        Graph.from_arcs(0), Graph.from_arcs(1), path_graph(1), path_graph(3),
        cycle_graph(1), cycle_graph(2), cycle_graph(3), cycle_graph(6),
        bouquet(2), bouquet(3),
        Graph.from_arcs(2, [(0, 0), (1, 1), (0, 1), (1, 0)]),
        Graph.from_arcs(4, [(0, 1), (1, 2), (2, 0), (2, 3)]),
    ]
    return named + [random_graph(rng, 8, 16, sparse=True) for _ in range(count)]


# -- morphisms -------------------------------------------------------------------

def random_morphism_into(rng: random.Random, cod: Graph, max_nodes: int = 6, max_arcs: int = 10) -> GraphMorphism:
    """Random domain built over ``cod``: random node images, arcs lifted from cod out-stars."""
    if cod.n_nodes == 0:
        return GraphMorphism(Graph.from_arcs(0), cod, [], [])
    n = rng.randint(1, max_nodes)
    node_map = [rng.randrange(cod.n_nodes) for _ in range(n)]
    fibers: dict[int, list[int]] = {}
    for x, y in enumerate(node_map):
        fibers.setdefault(y, []).append(x)
    pairs, arc_map = [], []
    for _ in range(rng.randint(0, max_arcs)):
        x = rng.randrange(n)
        star = cod.out_star[node_map[x]]
        if not star:
            continue
        b = rng.choice(star)
        targets = fibers.get(cod.tgt(b))
        if not targets:
            continue
        pairs.append((x, rng.choice(targets)))
        arc_map.append(b)
    return GraphMorphism(Graph.from_arcs(n, pairs), cod, node_map, arc_map)


def random_quotient(rng: random.Random, x: Graph, extra_nodes: int = 1, extra_arcs: int = 2) -> GraphMorphism:
    """Random identification of nodes and compatible arcs, then a random enlargement."""
    n = x.n_nodes
    nuf = UnionFind(n)
    if n:
        classes = rng.randint(1, n)
        labels = [rng.randrange(classes) for _ in range(n)]
        first: dict[int, int] = {}
        for v, c in enumerate(labels):
            if c in first:
                nuf.union(first[c], v)
            else:
                first[c] = v
    auf = UnionFind(x.n_arcs)
    by_ends: dict[tuple[int, int], list[int]] = {}
    for a in x.arcs:
        key = (nuf.find(a.src), nuf.find(a.tgt))
        group = by_ends.setdefault(key, [])
        if group and rng.random() < 0.6:
            auf.union(rng.choice(group), a.id)
        group.append(a.id)
    q = quotient(x, nuf, auf)
    y = q.cod
    k = y.n_nodes + rng.randint(0, extra_nodes)
    if k == 0:
        return q
    pairs = y.pairs() + [(rng.randrange(k), rng.randrange(k)) for _ in range(rng.randint(0, extra_arcs))]
    big = Graph.from_arcs(k, pairs)
    incl = GraphMorphism(y, big, range(y.n_nodes), range(y.n_arcs))
    return compose(q, incl)


def random_morphism(rng: random.Random, max_nodes: int = 6, max_arcs: int = 10) -> GraphMorphism:
    if rng.random() < 0.5:
        cod = random_graph(rng, max_nodes, max_arcs)
        return random_morphism_into(rng, cod, max_nodes, max_arcs)
    dom = random_graph(rng, max_nodes, max_arcs)
    f = random_quotient(rng, dom)
    if f.cod.n_nodes > max_nodes:
        return random_morphism_into(rng, random_graph(rng, max_nodes, max_arcs), max_nodes, max_arcs)
    return f


def random_composable_pair(rng: random.Random, max_nodes: int = 5, max_arcs: int = 8):
    """``(g, f)`` with ``g.cod == f.dom``; mixes quotient chains and lifts."""
    if rng.random() < 0.5:
        x = random_graph(rng, max_nodes, max_arcs)
        g = random_quotient(rng, x)
        f = random_quotient(rng, g.cod)
        return g, f
    z = random_graph(rng, max_nodes, max_arcs)
    f = random_morphism_into(rng, z, max_nodes, max_arcs)
    g = random_morphism_into(rng, f.dom, max_nodes, max_arcs)
    return g, f


def random_whiskering(rng: random.Random, x: Graph, max_forest: int = 5) -> GraphMorphism:
    if x.n_nodes == 0:
        return identity(x)
    forest = random_forest(rng, max_forest)
    roots = [v for v in forest.nodes if not forest.in_star[v]]
    return attach_forest(x, forest, {r: rng.randrange(x.n_nodes) for r in roots})


def random_voltage(rng: random.Random, base: Graph, k: int) -> VoltageAssignment:
    perms = []
    for _ in range(base.n_arcs):
        p = list(range(k))
        rng.shuffle(p)
        perms.append(p)
    return VoltageAssignment(base, k, perms)


def acyclic_covering(rng: random.Random, y: Graph, k: int) -> GraphMorphism:
    """``Y + (k-1)-sheeted lift of the cycle-free downstream part of Y`` projected onto ``Y``.

    The extra sheets contain no closed walks and every out-star of the
    downstream part lies inside it, so the projection is a Covering that is
    also Acyclic.
    """
    cyc = _cycle_reaching_nodes(y)
    down_nodes = [v for v in y.nodes if v not in cyc]
    down_arcs = [a.id for a in y.arcs if a.src not in cyc]
    incl = subgraph(y, down_nodes, down_arcs)
    if k <= 1 or not down_nodes:
        return identity(y)
    lift = build_covering(random_voltage(rng, incl.dom, k - 1))
    into_y = compose(lift, incl)
    summed = coproduct([y, lift.dom])
    return copair([identity(y), into_y], summed)


# -- curated morphisms ---------------------------------------------------------

def de_bruijn_covering() -> GraphMorphism:
    """Two-node de Bruijn graph over the 2-loop bouquet (p -> identity, q -> swap)."""
    return build_covering(VoltageAssignment(bouquet(2), 2, [(0, 1), (1, 0)]))


def two_loops_to_one() -> GraphMorphism:
    two = Graph.from_arcs(2, [(0, 0), (1, 1)])
    return GraphMorphism(two, cycle_graph(1), [0, 0], [0, 0])


def bouquet_pairs_collapse() -> GraphMorphism:
    """Bouquet of 4 loops onto bouquet of 2, loops ``0,1 -> 0`` and ``2,3 -> 1``."""
    return GraphMorphism(bouquet(4), bouquet(2), [0], [0, 0, 1, 1])


def curated_morphisms() -> dict[str, GraphMorphism]:
    return {
        "s": source_generator(),
        "fold": fold_generator(),
        "wrap4_2": cycle_wrap(4, 2),
        "de_bruijn": de_bruijn_covering(),
        "two_loops": two_loops_to_one(),
        "bouquet4_2": bouquet_pairs_collapse(),
        "empty_to_loop": GraphMorphism(Graph.from_arcs(0), cycle_graph(1), [], []),
    }


# -- squares ---------------------------------------------------------------------

def random_surjecting(rng: random.Random) -> GraphMorphism:
    """A Surjecting from a covering or an exact whisker/surject factorization."""
    if rng.random() < 0.5:
        base = random_graph(rng, 3, 5)
        return build_covering(random_voltage(rng, base, rng.randint(1, 3)))
    cod = random_dag(rng, 5, 6)
    f = random_morphism_into(rng, cod, 3, 4)
    return factor_whisker_surject(f).right


def random_whisker_square(rng: random.Random) -> LiftSquare:
    """Commuting square with a finite whiskering on the left and a Surjecting on the right."""
    r = random_surjecting(rng)
    A, B = r.dom, r.cod
    top = random_morphism_into(rng, A, 4, 5)
    X = top.dom
    g_on_x = compose(top, r)
    # grow the forest together with its image in B
    pairs: list[tuple[int, int]] = []
    images: list[int] = list(g_on_x.node_map)
    arc_images: list[int] = []
    n = X.n_nodes
    for _ in range(rng.randint(0, 6)):
        if not images:
            break
        u = rng.randrange(len(images))
        star = B.out_star[images[u]]
        if not star:
            continue
        b = rng.choice(star)
        pairs.append((u, len(images)))
        images.append(B.tgt(b))
        arc_images.append(b)
    Y = Graph.from_arcs(len(images), X.pairs() + pairs)
    ell = GraphMorphism(X, Y, range(n), range(X.n_arcs))
    bottom = GraphMorphism(Y, B, images, list(g_on_x.arc_map) + arc_images)
    return LiftSquare(ell, r, top, bottom)


def non_surjecting_square(f: GraphMorphism, node: int, missing_arc: int) -> LiftSquare:
    """``s: N -> A`` against ``f`` at a node where ``missing_arc`` has no preimage."""
    s = source_generator()
    top = GraphMorphism(s.dom, f.dom, [node], [])
    c = f.cod
    bottom = GraphMorphism(s.cod, c, [c.src(missing_arc), c.tgt(missing_arc)], [missing_arc])
    return LiftSquare(s, f, top, bottom)


def random_fold_square(rng: random.Random) -> LiftSquare:
    """Square with a composite of elementary folds on the left and an Injecting on the right.

    Built from an arbitrary ``h: Y -> A`` so at least one filler exists.
    """
    while True:
        x = random_graph(rng, 4, 6)
        if any(len(star) > 1 for star in x.out_star):
            break
    ell = identity(x)
    for _ in range(rng.randint(1, 2)):
        cand = [(v, a, b) for v in ell.cod.nodes for i, a in enumerate(ell.cod.out_star[v])
                for b in ell.cod.out_star[v][i + 1:]]
        if not cand:
            break
        ell = compose(ell, elementary_fold(ell.cod, *rng.choice(cand)))
    h = random_quotient(rng, ell.cod)
    split = factor_fold_inject(random_quotient(rng, h.cod))
    h = compose(h, split.left)
    r = split.right
    return LiftSquare(ell, r, compose(ell, h), compose(h, r))


def sample(rng: random.Random, gen, count: int, *args) -> Iterator:
    for _ in range(count):
        yield gen(rng, *args)
