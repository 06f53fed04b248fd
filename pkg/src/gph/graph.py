"""Finite directed multigraphs, their morphisms, and elementwise (co)limits.

Nodes and arcs carry dense integer ids starting at 0.  Every construction
that forms a quotient renumbers its output so that classes appear in the
order of their least representative, which makes results deterministic and
directly comparable with ``==``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import InternalConsistencyError, InvalidGraph, InvalidMorphism, MismatchError
from .unionfind import UnionFind


class Arc(NamedTuple):
    id: int
    src: int
    tgt: int


class LocalStar(NamedTuple):
    node: int
    out_arcs: tuple[int, ...]
    in_arcs: tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """A directed multigraph ``(X0, X1, s, t)``.

    Use :meth:`from_arcs` to build a validated graph; the raw constructor
    accepts anything so that :func:`validate` can report on it.
    """

    nodes: tuple[int, ...]
    arcs: tuple[Arc, ...]
    node_labels: tuple[str, ...] | None = field(default=None, compare=False)
    arc_labels: tuple[str, ...] | None = field(default=None, compare=False)

    @classmethod
    def from_arcs(
        cls,
        n_nodes: int,
        pairs: Iterable[tuple[int, int]] = (),
        node_labels: Sequence[str] | None = None,
        arc_labels: Sequence[str] | None = None,
    ) -> Graph:
        arcs = tuple(Arc(i, s, t) for i, (s, t) in enumerate(pairs))
        g = cls(
            tuple(range(n_nodes)),
            arcs,
            tuple(node_labels) if node_labels is not None else None,
            tuple(arc_labels) if arc_labels is not None else None,
        )
        return validate(g)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def src(self, a: int) -> int:
        return self.arcs[a].src

    def tgt(self, a: int) -> int:
        return self.arcs[a].tgt

    def pairs(self) -> list[tuple[int, int]]:
        return [(a.src, a.tgt) for a in self.arcs]

    @cached_property
    def out_star(self) -> tuple[tuple[int, ...], ...]:
        """``out_star[x]`` lists the arcs with source ``x`` in id order."""
        stars: list[list[int]] = [[] for _ in self.nodes]
        for a in self.arcs:
            stars[a.src].append(a.id)
        return tuple(tuple(s) for s in stars)

    @cached_property
    def in_star(self) -> tuple[tuple[int, ...], ...]:
        stars: list[list[int]] = [[] for _ in self.nodes]
        for a in self.arcs:
            stars[a.tgt].append(a.id)
        return tuple(tuple(s) for s in stars)

    def local_star(self, x: int) -> LocalStar:
        return LocalStar(x, self.out_star[x], self.in_star[x])

    def node_label(self, x: int) -> str:
        return self.node_labels[x] if self.node_labels else f"n{x}"

    def arc_label(self, a: int) -> str:
        return self.arc_labels[a] if self.arc_labels else f"a{a}"

    def relabel(self, node_labels=None, arc_labels=None) -> Graph:
        return Graph(
            self.nodes,
            self.arcs,
            tuple(node_labels) if node_labels is not None else None,
            tuple(arc_labels) if arc_labels is not None else None,
        )

    def __repr__(self):
        return f"Graph(n_nodes={self.n_nodes}, arcs={self.pairs()})"


def validate(g: Graph) -> Graph:
    """Return ``g`` unchanged or raise :class:`InvalidGraph` naming the first violation."""
    seen: set[int] = set()
    for x in g.nodes:
        if x in seen:
            raise InvalidGraph(f"duplicate node id {x}")
        seen.add(x)
    if tuple(sorted(g.nodes)) != tuple(range(len(g.nodes))):
        raise InvalidGraph(f"node ids are not contiguous from 0: {sorted(g.nodes)}")
    if tuple(g.nodes) != tuple(range(len(g.nodes))):
        raise InvalidGraph("node ids are not listed in increasing order")
    seen = set()
    n = len(g.nodes)
    for pos, a in enumerate(g.arcs):
        if a.id in seen:
            raise InvalidGraph(f"duplicate arc id {a.id}")
        seen.add(a.id)
        if a.id != pos:
            raise InvalidGraph(f"arc ids are not contiguous from 0: arc at position {pos} has id {a.id}")
        if not 0 <= a.src < n:
            raise InvalidGraph(f"dangling src: arc {a.id} has src {a.src} but graph has {n} nodes")
        if not 0 <= a.tgt < n:
            raise InvalidGraph(f"dangling tgt: arc {a.id} has tgt {a.tgt} but graph has {n} nodes")
    if g.node_labels is not None and len(g.node_labels) != n:
        raise InvalidGraph("node label count differs from node count")
    if g.arc_labels is not None and len(g.arc_labels) != len(g.arcs):
        raise InvalidGraph("arc label count differs from arc count")
    return g


@dataclass(frozen=True)
class GraphMorphism:
    dom: Graph
    cod: Graph
    node_map: tuple[int, ...]
    arc_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "node_map", tuple(self.node_map))
        object.__setattr__(self, "arc_map", tuple(self.arc_map))
        dom, cod = self.dom, self.cod
        if len(self.node_map) != dom.n_nodes:
            raise InvalidMorphism("node map is not total on the domain")
        if len(self.arc_map) != dom.n_arcs:
            raise InvalidMorphism("arc map is not total on the domain")
        for x, y in enumerate(self.node_map):
            if not 0 <= y < cod.n_nodes:
                raise InvalidMorphism(f"node {x} maps outside the codomain ({y})")
        for a, b in enumerate(self.arc_map):
            if not 0 <= b < cod.n_arcs:
                raise InvalidMorphism(f"arc {a} maps outside the codomain ({b})")
            if cod.src(b) != self.node_map[dom.src(a)]:
                raise InvalidMorphism(f"arc {a}: source does not commute")
            if cod.tgt(b) != self.node_map[dom.tgt(a)]:
                raise InvalidMorphism(f"arc {a}: target does not commute")

    def __repr__(self):
        return f"GraphMorphism(nodes={list(self.node_map)}, arcs={list(self.arc_map)})"


@dataclass(frozen=True)
class Cospan:
    """An apex together with morphisms into it (coproduct or pushout injections)."""

    apex: Graph
    legs: tuple[GraphMorphism, ...]


@dataclass(frozen=True)
class Span:
    """An apex together with projections out of it (fiber product or product)."""

    apex: Graph
    legs: tuple[GraphMorphism, ...]


# -- standard graphs ---------------------------------------------------------

def empty_graph() -> Graph:
    return Graph.from_arcs(0)


def node_graph() -> Graph:
    return Graph.from_arcs(1)


def arc_graph() -> Graph:
    return Graph.from_arcs(2, [(0, 1)])


def vee_graph() -> Graph:
    """Nodes ``0, 1', 1''`` and arcs ``a': 0 -> 1'``, ``a'': 0 -> 1''``."""
    return Graph.from_arcs(3, [(0, 1), (0, 2)], ["0", "1'", "1''"], ["a'", "a''"])


def path_graph(n: int) -> Graph:
    if n < 0:
        raise ValueError("path length must be non-negative")
    return Graph.from_arcs(n + 1, [(i, i + 1) for i in range(n)])


def cycle_graph(n: int) -> Graph:
    """Nodes ``0..n-1`` with arc ``i`` from ``i`` to ``i+1 mod n``."""
    if n < 1:
        raise ValueError("C(0) is the node graph N; cycle length must be >= 1")
    return Graph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def bouquet(n: int) -> Graph:
    """One node carrying ``n`` loops."""
    return Graph.from_arcs(1, [(0, 0)] * n)


def standard_graph(kind: str, n: int | None = None) -> Graph:
    kind = kind.upper()
    if kind == "N":
        return node_graph()
    if kind == "A":
        return arc_graph()
    if kind == "V":
        return vee_graph()
    if kind in ("P", "C"):
        if n is None:
            raise ValueError(f"{kind} requires a size")
        return path_graph(n) if kind == "P" else cycle_graph(n)
    raise ValueError(f"unknown standard graph {kind!r}")


# -- morphism basics ---------------------------------------------------------

def identity(x: Graph) -> GraphMorphism:
    return GraphMorphism(x, x, range(x.n_nodes), range(x.n_arcs))


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """The composite ``g . f`` (apply ``f`` first)."""
    if f.cod != g.dom:
        raise MismatchError("compose: codomain of the first morphism is not the domain of the second")
    return GraphMorphism(
        f.dom,
        g.cod,
        [g.node_map[y] for y in f.node_map],
        [g.arc_map[b] for b in f.arc_map],
    )


def is_isomorphism(f: GraphMorphism) -> bool:
    return (
        sorted(f.node_map) == list(range(f.cod.n_nodes))
        and sorted(f.arc_map) == list(range(f.cod.n_arcs))
    )


def inverse(f: GraphMorphism) -> GraphMorphism:
    if not is_isomorphism(f):
        raise InvalidMorphism("morphism is not an isomorphism")
    nodes = [0] * f.cod.n_nodes
    arcs = [0] * f.cod.n_arcs
    for x, y in enumerate(f.node_map):
        nodes[y] = x
    for a, b in enumerate(f.arc_map):
        arcs[b] = a
    return GraphMorphism(f.cod, f.dom, nodes, arcs)


def from_empty(x: Graph) -> GraphMorphism:
    return GraphMorphism(empty_graph(), x, (), ())


def subgraph(x: Graph, nodes: Iterable[int], arcs: Iterable[int]) -> GraphMorphism:
    """Inclusion of the subgraph on the given nodes and arcs, ids kept in increasing order."""
    node_list = sorted(set(nodes))
    arc_list = sorted(set(arcs))
    pos = {v: i for i, v in enumerate(node_list)}
    try:
        pairs = [(pos[x.src(a)], pos[x.tgt(a)]) for a in arc_list]
    except KeyError as exc:
        raise InvalidGraph(f"subgraph arc endpoint {exc.args[0]} is not among the chosen nodes") from None
    sub = Graph.from_arcs(len(node_list), pairs)
    return GraphMorphism(sub, x, node_list, arc_list)


# -- colimits ----------------------------------------------------------------

def _concat(graphs: Sequence[Graph]) -> tuple[Graph, list[int], list[int]]:
    node_off, arc_off = [], []
    pairs: list[tuple[int, int]] = []
    n = 0
    for g in graphs:
        node_off.append(n)
        arc_off.append(len(pairs))
        pairs.extend((s + n, t + n) for s, t in g.pairs())
        n += g.n_nodes
    return Graph.from_arcs(n, pairs), node_off, arc_off


def coproduct(parts: Sequence[Graph]) -> Cospan:
    """Disjoint union; ids renumbered by concatenation order."""
    apex, node_off, arc_off = _concat(parts)
    legs = tuple(
        GraphMorphism(
            g, apex,
            [x + node_off[i] for x in range(g.n_nodes)],
            [a + arc_off[i] for a in range(g.n_arcs)],
        )
        for i, g in enumerate(parts)
    )
    return Cospan(apex, legs)


def copair(maps: Sequence[GraphMorphism], apex: Cospan | None = None) -> GraphMorphism:
    """The morphism out of a coproduct induced by maps with a common codomain."""
    if not maps:
        raise ValueError("copair needs at least one morphism")
    cod = maps[0].cod
    if any(m.cod != cod for m in maps):
        raise MismatchError("copair: codomains differ")
    sum_ = apex or coproduct([m.dom for m in maps])
    nodes: list[int] = []
    arcs: list[int] = []
    for m in maps:
        nodes.extend(m.node_map)
        arcs.extend(m.arc_map)
    return GraphMorphism(sum_.apex, cod, nodes, arcs)


def quotient(x: Graph, node_uf: UnionFind, arc_uf: UnionFind) -> GraphMorphism:
    """Quotient map of ``x`` by the given node and arc equivalences.

    The arc equivalence must be compatible with the node equivalence on
    endpoints; this is rechecked and a violation is an internal error.
    """
    node_label, n_nodes = node_uf.canonical_labels()
    arc_label, n_arcs = arc_uf.canonical_labels()
    pairs: list[tuple[int, int] | None] = [None] * n_arcs
    for a in x.arcs:
        p = (node_label[a.src], node_label[a.tgt])
        q = arc_label[a.id]
        if pairs[q] is None:
            pairs[q] = p
        elif pairs[q] != p:
            raise InternalConsistencyError(f"identified arcs disagree on endpoints at arc {a.id}")
    apex = Graph.from_arcs(n_nodes, pairs)  # type: ignore[arg-type]
    return GraphMorphism(x, apex, node_label, arc_label)


def pushout(f: GraphMorphism, g: GraphMorphism) -> Cospan:
    """Pushout of ``F <-f- R -g-> X``.

    The apex is ``(F + X)/~`` where ``f(r) ~ g(r)`` for every node and arc
    ``r`` of ``R``.  Classes are numbered by least representative, with the
    elements of ``F`` preceding those of ``X``.
    """
    if f.dom != g.dom:
        raise MismatchError("pushout: the two morphisms have different domains")
    F, X = f.cod, g.cod
    summed, node_off, arc_off = _concat([F, X])
    nuf, auf = UnionFind(summed.n_nodes), UnionFind(summed.n_arcs)
    for r in range(f.dom.n_nodes):
        nuf.union(f.node_map[r], g.node_map[r] + node_off[1])
    for r in range(f.dom.n_arcs):
        auf.union(f.arc_map[r], g.arc_map[r] + arc_off[1])
    q = quotient(summed, nuf, auf)
    leg_f = GraphMorphism(F, q.cod, q.node_map[: F.n_nodes], q.arc_map[: F.n_arcs])
    leg_g = GraphMorphism(X, q.cod, q.node_map[F.n_nodes:], q.arc_map[F.n_arcs:])
    if compose(f, leg_f) != compose(g, leg_g):
        raise InternalConsistencyError("pushout square does not commute")
    return Cospan(q.cod, (leg_f, leg_g))


# -- limits ------------------------------------------------------------------

def fiber_product(f: GraphMorphism, g: GraphMorphism) -> Span:
    """Pullback of ``X -f-> Y <-g- Z``; pairs are listed in lexicographic order."""
    if f.cod != g.cod:
        raise MismatchError("fiber_product: the two morphisms have different codomains")
    X, Z = f.dom, g.dom
    by_node: dict[int, list[int]] = {}
    for z, y in enumerate(g.node_map):
        by_node.setdefault(y, []).append(z)
    by_arc: dict[int, list[int]] = {}
    for b, y in enumerate(g.arc_map):
        by_arc.setdefault(y, []).append(b)
    node_pairs = [(x, z) for x in range(X.n_nodes) for z in by_node.get(f.node_map[x], ())]
    arc_pairs = [(a, b) for a in range(X.n_arcs) for b in by_arc.get(f.arc_map[a], ())]
    index = {p: i for i, p in enumerate(node_pairs)}
    apex = Graph.from_arcs(
        len(node_pairs),
        [(index[(X.src(a), Z.src(b))], index[(X.tgt(a), Z.tgt(b))]) for a, b in arc_pairs],
    )
    p1 = GraphMorphism(apex, X, [x for x, _ in node_pairs], [a for a, _ in arc_pairs])
    p2 = GraphMorphism(apex, Z, [z for _, z in node_pairs], [b for _, b in arc_pairs])
    return Span(apex, (p1, p2))


def product(x: Graph, y: Graph) -> Span:
    terminal = cycle_graph(1)
    to_x = GraphMorphism(x, terminal, [0] * x.n_nodes, [0] * x.n_arcs)
    to_y = GraphMorphism(y, terminal, [0] * y.n_nodes, [0] * y.n_arcs)
    return fiber_product(to_x, to_y)


# -- strongly connected components and the core -------------------------------

def strongly_connected_components(x: Graph) -> list[int]:
    """Component index per node (iterative Tarjan)."""
    n = x.n_nodes
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    succ = [[x.tgt(a) for a in x.out_star[v]] for v in range(n)]
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


def core_elements(x: Graph) -> tuple[list[int], list[int]]:
    """Nodes and arcs that lie on at least one closed walk."""
    comp = strongly_connected_components(x)
    arcs = [a.id for a in x.arcs if comp[a.src] == comp[a.tgt]]
    nodes = sorted({x.src(a) for a in arcs})
    return nodes, arcs


def core(x: Graph) -> GraphMorphism:
    """Inclusion of the core of ``x``; the core itself is the domain."""
    nodes, arcs = core_elements(x)
    return subgraph(x, nodes, arcs)


def reachable(x: Graph, starts: Iterable[int]) -> set[int]:
    seen = set(starts)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for a in x.out_star[v]:
            w = x.tgt(a)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


# -- coverings from voltages ------------------------------------------------

@dataclass(frozen=True)
class VoltageAssignment:
    base: Graph
    k: int
    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(tuple(p) for p in self.perms))
        if self.k < 1:
            raise ValueError("fiber size must be >= 1")
        if len(self.perms) != self.base.n_arcs:
            raise ValueError("need one permutation per base arc")
        for a, p in enumerate(self.perms):
            if sorted(p) != list(range(self.k)):
                raise ValueError(f"voltage on arc {a} is not a permutation of 0..{self.k - 1}")


def build_covering(v: VoltageAssignment) -> GraphMorphism:
    """Derived graph of a voltage assignment with its projection onto the base.

    Node ``(y, i)`` gets id ``y*k + i`` and arc ``(a, i)`` gets id ``a*k + i``;
    arc ``(a, i)`` runs from ``(src a, i)`` to ``(tgt a, perm_a(i))``.
    """
    y, k = v.base, v.k
    pairs = [
        (a.src * k + i, a.tgt * k + v.perms[a.id][i])
        for a in y.arcs
        for i in range(k)
    ]
    derived = Graph.from_arcs(y.n_nodes * k, pairs)
    return GraphMorphism(
        derived, y,
        [x // k for x in range(derived.n_nodes)],
        [a // k for a in range(derived.n_arcs)],
    )


# -- cycle graph morphisms ---------------------------------------------------

def cycle_shift(n: int, i: int) -> GraphMorphism:
    """The shift of ``C(n)`` sending node ``j`` to ``j + i mod n``."""
    c = cycle_graph(n)
    return GraphMorphism(c, c, [(j + i) % n for j in range(n)], [(j + i) % n for j in range(n)])


def cycle_wrap(n: int, m: int) -> GraphMorphism:
    """The wrap ``C(n) -> C(m)`` sending node ``i`` to ``i mod m``."""
    if m < 1 or n % m:
        raise ValueError(f"{m} does not divide {n}")
    return GraphMorphism(
        cycle_graph(n), cycle_graph(m),
        [j % m for j in range(n)], [j % m for j in range(n)],
    )
