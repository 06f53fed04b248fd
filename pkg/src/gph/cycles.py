"""Based cycles ``C(n) -> X`` and their enumeration."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .graph import Graph, GraphMorphism, cycle_graph


@dataclass(frozen=True, order=True)
class BasedCycle:
    """A closed walk with a marked start.

    ``arcs[i]`` runs from ``nodes[i]`` to ``nodes[(i+1) % n]``, matching the
    indexing of ``C(n)``.  Ordering is lexicographic on the arc sequence.
    """

    arcs: tuple[int, ...]
    nodes: tuple[int, ...]

    @classmethod
    def from_arcs(cls, x: Graph, arcs) -> BasedCycle:
        arcs = tuple(arcs)
        if not arcs:
            raise ValueError("a based cycle has length >= 1")
        for i, a in enumerate(arcs):
            if x.tgt(a) != x.src(arcs[(i + 1) % len(arcs)]):
                raise ValueError(f"arcs {a} and {arcs[(i + 1) % len(arcs)]} do not chain")
        return cls(arcs, tuple(x.src(a) for a in arcs))

    @property
    def length(self) -> int:
        return len(self.arcs)

    def as_morphism(self, x: Graph) -> GraphMorphism:
        return GraphMorphism(cycle_graph(self.length), x, self.nodes, self.arcs)

    def image(self, f: GraphMorphism) -> BasedCycle:
        """The composite ``f . c``."""
        return BasedCycle(
            tuple(f.arc_map[a] for a in self.arcs),
            tuple(f.node_map[v] for v in self.nodes),
        )

    def shift(self, i: int) -> BasedCycle:
        """The composite ``c . tau^i``."""
        n = self.length
        i %= n
        return BasedCycle(self.arcs[i:] + self.arcs[:i], self.nodes[i:] + self.nodes[:i])

    def period(self) -> int:
        """Least ``m`` such that the cycle factors through the wrap ``C(n) -> C(m)``."""
        n = self.length
        for m in range(1, n + 1):
            if n % m == 0 and all(self.arcs[i] == self.arcs[i % m] for i in range(n)):
                return m
        return n  # unreachable

    def is_prime(self) -> bool:
        return self.period() == self.length

    def to_json(self) -> dict:
        return {"length": self.length, "nodes": list(self.nodes), "arcs": list(self.arcs)}


def _distances_to(x: Graph, target: int) -> list[float]:
    dist = [float("inf")] * x.n_nodes
    dist[target] = 0
    todo = deque([target])
    while todo:
        v = todo.popleft()
        for a in x.in_star[v]:
            w = x.src(a)
            if dist[w] == float("inf"):
                dist[w] = dist[v] + 1
                todo.append(w)
    return dist


def iter_cycles(x: Graph, n: int) -> Iterator[BasedCycle]:
    """Based closed walks of length ``n`` in lexicographic arc-sequence order."""
    if n < 1:
        raise ValueError("cycle length must be >= 1")
    dist_cache: dict[int, list[float]] = {}
    for first in range(x.n_arcs):
        start = x.src(first)
        if start not in dist_cache:
            dist_cache[start] = _distances_to(x, start)
        dist = dist_cache[start]
        if dist[x.tgt(first)] > n - 1:
            continue
        walk = [first]
        # stack of (position, next out-arc index) for depth-first extension
        stack = [0]
        while True:
            if len(walk) == n:
                if x.tgt(walk[-1]) == start:
                    yield BasedCycle.from_arcs(x, walk)
                walk.pop()
                stack.pop()
                if not walk:
                    break
                continue
            here = x.tgt(walk[-1])
            star = x.out_star[here]
            i = stack[-1]
            remaining = n - len(walk) - 1
            while i < len(star) and dist[x.tgt(star[i])] > remaining:
                i += 1
            if i < len(star):
                stack[-1] = i + 1
                walk.append(star[i])
                stack.append(0)
            else:
                walk.pop()
                stack.pop()
                if not walk:
                    break


def enumerate_cycles(x: Graph, n: int) -> list[BasedCycle]:
    return list(iter_cycles(x, n))
