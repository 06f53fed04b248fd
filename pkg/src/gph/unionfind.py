from __future__ import annotations


class UnionFind:
    """Disjoint sets over ``0..n-1`` whose representative is the least member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def __len__(self):
        return len(self.parent)

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def canonical_labels(self) -> tuple[list[int], int]:
        """Label each element by the rank of its class, classes ordered by least member."""
        labels = [0] * len(self.parent)
        rank: dict[int, int] = {}
        for v in range(len(self.parent)):
            r = self.find(v)
            if r not in rank:
                rank[r] = len(rank)
            labels[v] = rank[r]
        return labels, len(rank)
