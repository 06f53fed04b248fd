"""Membership tests for the morphism classes of the model structure.

Every predicate returns a :class:`Verdict`, which is truthy exactly when the
morphism belongs to the class.  A false verdict always carries a witness
(a JSON-ready dict) that explains the failure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .cycles import BasedCycle, enumerate_cycles, iter_cycles
from .graph import Graph, GraphMorphism, LocalStar, core_elements, fiber_product, is_isomorphism
from .zeta import reversed_char_poly


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: dict[str, Any] | None = None
    data: Any = field(default=None, compare=False)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out: dict[str, Any] = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def local_stars(x: Graph) -> list[LocalStar]:
    return [x.local_star(v) for v in x.nodes]


# -- local conditions on out-stars -------------------------------------------

def _surjecting_at(f: GraphMorphism, x: int) -> int | None:
    """A cod arc out of ``f(x)`` missed by ``f`` on the out-star of ``x``, if any."""
    hit = {f.arc_map[a] for a in f.dom.out_star[x]}
    for b in f.cod.out_star[f.node_map[x]]:
        if b not in hit:
            return b
    return None


def _injecting_at(f: GraphMorphism, x: int) -> tuple[int, int] | None:
    seen: dict[int, int] = {}
    for a in f.dom.out_star[x]:
        b = f.arc_map[a]
        if b in seen:
            return seen[b], a
        seen[b] = a
    return None


def is_surjecting(f: GraphMorphism) -> Verdict:
    for x in f.dom.nodes:
        b = _surjecting_at(f, x)
        if b is not None:
            return Verdict(False, {"node": x, "missing_arc": b})
    return Verdict(True)


def is_injecting(f: GraphMorphism) -> Verdict:
    for x in f.dom.nodes:
        pair = _injecting_at(f, x)
        if pair is not None:
            return Verdict(False, {"node": x, "arcs": list(pair), "image": f.arc_map[pair[0]]})
    return Verdict(True)


def is_covering(f: GraphMorphism) -> Verdict:
    for x in f.dom.nodes:
        b = _surjecting_at(f, x)
        if b is not None:
            return Verdict(False, {"kind": "not-surjective", "node": x, "missing_arc": b})
        pair = _injecting_at(f, x)
        if pair is not None:
            return Verdict(False, {"kind": "not-injective", "node": x, "arcs": list(pair)})
    return Verdict(True)


# -- whiskerings and forests ---------------------------------------------------

@dataclass(frozen=True)
class WhiskerTree:
    attach: int
    nodes: tuple[int, ...]
    arcs: tuple[int, ...]
    parent: dict[int, int]  # extra node -> its unique incoming arc

    def to_json(self) -> dict:
        return {
            "attach": self.attach,
            "nodes": list(self.nodes),
            "arcs": list(self.arcs),
            "parent": {str(k): v for k, v in sorted(self.parent.items())},
        }


@dataclass(frozen=True)
class WhiskerCertificate:
    image_nodes: tuple[int, ...]
    image_arcs: tuple[int, ...]
    trees: tuple[WhiskerTree, ...]

    @property
    def extra_arcs(self) -> int:
        return sum(len(t.arcs) for t in self.trees)

    def to_json(self) -> dict:
        return {
            "kind": "whisker",
            "image_nodes": list(self.image_nodes),
            "image_arcs": list(self.image_arcs),
            "trees": [t.to_json() for t in self.trees],
        }


def is_whiskering(f: GraphMorphism) -> Verdict:
    """Decide whether ``f`` attaches a rooted forest to its domain.

    On success ``data`` is a :class:`WhiskerCertificate` with one tree per
    attach node, nodes listed breadth first.
    """
    dom, cod = f.dom, f.cod
    if len(set(f.node_map)) != dom.n_nodes:
        return Verdict(False, {"reason": "not injective on nodes"})
    if len(set(f.arc_map)) != dom.n_arcs:
        return Verdict(False, {"reason": "not injective on arcs"})
    image_nodes = set(f.node_map)
    image_arcs = set(f.arc_map)
    for b in range(cod.n_arcs):
        if b not in image_arcs and cod.tgt(b) in image_nodes:
            return Verdict(False, {"reason": "extra arc targets an image node", "arc": b})
    for v in range(cod.n_nodes):
        if v not in image_nodes and len(cod.in_star[v]) != 1:
            return Verdict(False, {
                "reason": "extra node does not have in-degree 1",
                "node": v, "in_degree": len(cod.in_star[v]),
            })
    # every extra node must reach the image through its parent chain
    settled: dict[int, int] = {v: v for v in image_nodes}  # node -> attach node
    for v in range(cod.n_nodes):
        chain = []
        w = v
        on_chain: set[int] = set()
        while w not in settled:
            if w in on_chain:
                return Verdict(False, {"reason": "parent chain of extra nodes is cyclic", "node": w})
            on_chain.add(w)
            chain.append(w)
            w = cod.src(cod.in_star[w][0])
        root = settled[w]
        for u in chain:
            settled[u] = root

    trees = []
    for root in sorted(image_nodes):
        order: list[int] = []
        arcs: list[int] = []
        parent: dict[int, int] = {}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for b in cod.out_star[u]:
                    if b in image_arcs:
                        continue
                    w = cod.tgt(b)
                    parent[w] = b
                    order.append(w)
                    arcs.append(b)
                    nxt.append(w)
            frontier = nxt
        if order:
            trees.append(WhiskerTree(root, tuple(order), tuple(arcs), parent))
    cert = WhiskerCertificate(tuple(sorted(image_nodes)), tuple(sorted(image_arcs)), tuple(trees))
    return Verdict(True, data=cert)


def is_rooted_forest(t: Graph) -> Verdict:
    """``data`` holds the roots (nodes with empty in-star) on success."""
    roots = [v for v in t.nodes if not t.in_star[v]]
    for v in t.nodes:
        if len(t.in_star[v]) > 1:
            return Verdict(False, {"reason": "node has in-degree > 1", "node": v})
    seen = set(roots)
    todo = list(roots)
    while todo:
        v = todo.pop()
        for a in t.out_star[v]:
            w = t.tgt(a)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    unreached = [v for v in t.nodes if v not in seen]
    if unreached:
        return Verdict(False, {"reason": "node not reachable from a root", "node": unreached[0]})
    return Verdict(True, data=roots)


def is_rooted_tree(t: Graph) -> Verdict:
    """``data`` holds the root on success."""
    forest = is_rooted_forest(t)
    if not forest:
        return forest
    roots = forest.data
    if len(roots) != 1:
        return Verdict(False, {"reason": "tree needs exactly one root", "roots": roots})
    assert t.n_arcs == t.n_nodes - 1
    return Verdict(True, data=roots[0])


# -- cycles --------------------------------------------------------------------

def _trace_powers(x: Graph, n_max: int) -> list[int]:
    """``[trace(A^k) for k in 1..n_max]`` exactly, using int64 while it cannot overflow."""
    n = x.n_nodes
    if n == 0:
        return [0] * n_max
    a = np.zeros((n, n), dtype=np.int64)
    for arc in x.arcs:
        a[arc.tgt, arc.src] += 1
    r = max(max(len(s) for s in x.out_star), 1)
    limit = 2 ** 62
    power = a
    out = [int(np.trace(power))]
    for k in range(2, n_max + 1):
        if power.dtype != object and n * r ** k >= limit:
            power = power.astype(object)
            a = a.astype(object)
        power = power @ a
        out.append(int(np.trace(power)))
    return out


def is_acyclic_bounded(f: GraphMorphism, bound: int, enum_limit: int = 2000) -> Verdict:
    """Check that ``C_n(f)`` is bijective for every ``1 <= n <= bound``.

    Where both cycle sets are small enough the cycles are enumerated and the
    induced map is inspected directly.  Otherwise bijectivity is decided by
    counting: with ``P`` the fiber product of ``f`` with itself, ``trace(P^n)``
    counts pairs of cycles with a common image, so the map is injective iff
    that equals ``trace(A_dom^n)``, and then surjective iff the dom and cod
    counts agree.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    dom_counts = _trace_powers(f.dom, bound)
    cod_counts = _trace_powers(f.cod, bound)
    pair_counts = None
    for n in range(1, bound + 1):
        cd, cc = dom_counts[n - 1], cod_counts[n - 1]
        if cd + cc <= enum_limit:
            images: dict[BasedCycle, BasedCycle] = {}
            for c in iter_cycles(f.dom, n):
                im = c.image(f)
                if im in images:
                    return Verdict(False, {
                        "n": n, "kind": "collision",
                        "cycles": [images[im].to_json(), c.to_json()], "image": im.to_json(),
                    })
                images[im] = c
            for c in iter_cycles(f.cod, n):
                if c not in images:
                    return Verdict(False, {"n": n, "kind": "unhit", "cycle": c.to_json()})
            continue
        if pair_counts is None:
            pair_counts = _trace_powers(fiber_product(f, f).apex, bound)
        if pair_counts[n - 1] != cd:
            return Verdict(False, {"n": n, "kind": "collision", "pairs": pair_counts[n - 1], "dom_cycles": cd})
        if cd != cc:
            return Verdict(False, {"n": n, "kind": "unhit", "dom_cycles": cd, "cod_cycles": cc})
    return Verdict(True, data={"bound": bound})


def off_diagonal_core(f: GraphMorphism):
    """Off-diagonal nodes and arcs in the core of the fiber product of ``f`` with itself."""
    span = fiber_product(f, f)
    p1, p2 = span.legs
    nodes, arcs = core_elements(span.apex)
    off_nodes = [v for v in nodes if p1.node_map[v] != p2.node_map[v]]
    off_arcs = [a for a in arcs if p1.arc_map[a] != p2.arc_map[a]]
    return span, off_nodes, off_arcs


def is_acyclic(f: GraphMorphism) -> Verdict:
    """Exact test that ``C_n(f)`` is bijective for all ``n >= 1``.

    Injectivity for every ``n`` holds iff no off-diagonal element of the
    fiber product ``dom x_cod dom`` lies on a closed walk.  Given
    injectivity, bijectivity for every ``n`` is equality of all cycle counts,
    which is equality of reversed characteristic polynomials.
    """
    span, off_nodes, off_arcs = off_diagonal_core(f)
    p1, p2 = span.legs
    if off_nodes:
        v = off_nodes[0]
        return Verdict(False, {"part": "injectivity", "node": [p1.node_map[v], p2.node_map[v]]})
    if off_arcs:
        a = off_arcs[0]
        return Verdict(False, {"part": "injectivity", "arc": [p1.arc_map[a], p2.arc_map[a]]})
    rd, rc = reversed_char_poly(f.dom), reversed_char_poly(f.cod)
    if rd != rc:
        return Verdict(False, {"part": "spectrum", "dom_reversed": rd.to_json(), "cod_reversed": rc.to_json()})
    return Verdict(True)


def is_acyclic_fibration(f: GraphMorphism) -> Verdict:
    acyclic = is_acyclic(f)
    if not acyclic:
        return Verdict(False, {"failed": "acyclic", **(acyclic.witness or {})})
    surj = is_surjecting(f)
    if not surj:
        return Verdict(False, {"failed": "surjecting", **(surj.witness or {})})
    return Verdict(True)


def is_folding(f: GraphMorphism) -> Verdict:
    """``data`` is the fold factorization used for the decision."""
    from .factorization import factor_fold_inject

    result = factor_fold_inject(f)
    if is_isomorphism(result.right):
        return Verdict(True, data=result)
    return Verdict(False, {
        "reason": "injecting factor is not an isomorphism",
        "mid_nodes": result.mid.n_nodes, "cod_nodes": f.cod.n_nodes,
        "mid_arcs": result.mid.n_arcs, "cod_arcs": f.cod.n_arcs,
    }, data=result)


__all__ = [
    "Verdict", "LocalStar", "local_stars", "BasedCycle", "WhiskerTree", "WhiskerCertificate",
    "is_surjecting", "is_injecting", "is_covering", "is_whiskering",
    "is_rooted_tree", "is_rooted_forest", "enumerate_cycles",
    "is_acyclic_bounded", "is_acyclic", "is_acyclic_fibration", "is_folding", "off_diagonal_core",
]
