"""Agglomerative clustering with the classical linkage family.

Straightforward O(n^3) merging over a condensed distance matrix via the
Lance-Williams update. Centroid, median and ward operate on squared
distances internally; their merge heights are reported back on the
original scale. Cluster counts in this domain are in the hundreds, so
no accelerated variant is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidK, NonFiniteDistance, TooFewItems, ZeroVariance

LINKAGE_METHODS = ("average", "centroid", "complete", "median", "single", "ward", "weighted")
_SQUARED_METHODS = ("centroid", "median", "ward")
MONOTONE_METHODS = ("single", "complete", "average", "weighted", "ward")


@dataclass(frozen=True)
class DistanceMatrix:
    """Condensed upper-triangular pairwise distances for n items."""

    n: int
    condensed: np.ndarray

    def __post_init__(self):
        expected = self.n * (self.n - 1) // 2
        if self.condensed.shape != (expected,):
            raise ValueError(f"condensed length {self.condensed.shape} != {expected}")
        if np.any(self.condensed < 0):
            raise ValueError("distances must be nonnegative")

    @classmethod
    def from_square(cls, square) -> "DistanceMatrix":
        square = np.asarray(square, dtype=np.float64)
        n = square.shape[0]
        iu = np.triu_indices(n, k=1)
        return cls(n=n, condensed=np.ascontiguousarray(square[iu]))

    @classmethod
    def from_points(cls, points, pair_distance) -> "DistanceMatrix":
        """All-pairs matrix from an arbitrary symmetric distance function."""
        n = len(points)
        out = np.empty(n * (n - 1) // 2)
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                out[k] = pair_distance(points[i], points[j])
                k += 1
        return cls(n=n, condensed=out)

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.condensed[self._offset(i, j)])

    def _offset(self, i: int, j: int) -> int:
        return self.n * i - i * (i + 1) // 2 + (j - i - 1)

    def to_square(self) -> np.ndarray:
        square = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        square[iu] = self.condensed
        return square + square.T


@dataclass(frozen=True)
class Dendrogram:
    """Merge tree: leaves are nodes 0..n-1, merge t creates node n+t."""

    leaf_count: int
    merges: tuple  # (left_node, right_node, height, cluster_size) * (n-1)

    def leaves_of(self) -> list[set]:
        """Leaf set of every node, indexed by node id."""
        n = self.leaf_count
        sets = [{i} for i in range(n)]
        for left, right, _, _ in self.merges:
            sets.append(sets[int(left)] | sets[int(right)])
        return sets

    def leaf_order(self) -> list[int]:
        """Left-to-right leaf ordering for plotting."""
        n = self.leaf_count
        children = {n + t: (int(l), int(r)) for t, (l, r, _, _) in enumerate(self.merges)}
        root = n + len(self.merges) - 1 if self.merges else 0
        order, stack = [], [root]
        while stack:
            node = stack.pop()
            if node < n:
                order.append(node)
            else:
                l, r = children[node]
                stack.append(r)
                stack.append(l)
        return order


def _lance_williams(method, na, nb, nc):
    """Update coefficients (alpha_a, alpha_b, beta, gamma) for the merge of
    clusters a and b against bystander c."""
    if method == "single":
        return 0.5, 0.5, 0.0, -0.5
    if method == "complete":
        return 0.5, 0.5, 0.0, 0.5
    if method == "average":
        return na / (na + nb), nb / (na + nb), 0.0, 0.0
    if method == "weighted":
        return 0.5, 0.5, 0.0, 0.0
    if method == "centroid":
        s = na + nb
        return na / s, nb / s, -(na * nb) / (s * s), 0.0
    if method == "median":
        return 0.5, 0.5, -0.25, 0.0
    if method == "ward":
        s = na + nb + nc
        return (na + nc) / s, (nb + nc) / s, -nc / s, 0.0
    raise ValueError(f"unknown linkage method {method!r}")


def linkage(dist: DistanceMatrix, method: str = "average") -> Dendrogram:
    """Merge the closest pair repeatedly under the chosen linkage rule.

    Ties on the minimal distance break toward the lexicographically
    smallest (i, j) pair of node ids, so results are deterministic.
    """
    if method not in LINKAGE_METHODS:
        raise ValueError(f"method must be one of {LINKAGE_METHODS}")
    n = dist.n
    if n < 2:
        raise TooFewItems("need at least two items to cluster")
    if not np.all(np.isfinite(dist.condensed)):
        raise NonFiniteDistance("distance matrix contains non-finite entries")

    squared = method in _SQUARED_METHODS
    d = dist.to_square()
    if squared:
        d = d ** 2

    node_id = list(range(n))      # current node id per active slot
    size = [1] * n
    active = list(range(n))       # active slot indices
    merges = []

    for step in range(n - 1):
        # closest active pair; tie-break on smallest (node_i, node_j)
        best = None
        for ai in range(len(active)):
            for aj in range(ai + 1, len(active)):
                si, sj = active[ai], active[aj]
                dij = d[si, sj]
                u, v = node_id[si], node_id[sj]
                if u > v:
                    u, v = v, u
                key = (dij, u, v)
                if best is None or key < best[0]:
                    best = (key, si, sj)
        (_dij, u, v), si, sj = best
        dij = d[si, sj]
        height = math.sqrt(dij) if squared else dij
        new_size = size[si] + size[sj]
        merges.append((u, v, height, new_size))

        na, nb = size[si], size[sj]
        for sk in active:
            if sk == si or sk == sj:
                continue
            aa, ab, beta, gamma = _lance_williams(method, na, nb, size[sk])
            updated = (aa * d[si, sk] + ab * d[sj, sk] + beta * dij
                       + gamma * abs(d[si, sk] - d[sj, sk]))
            d[si, sk] = d[sk, si] = updated
        # slot si becomes the merged cluster; slot sj retires
        node_id[si] = n + step
        size[si] = new_size
        active.remove(sj)

    return Dendrogram(leaf_count=n, merges=tuple(merges))


def cophenetic_distances(tree: Dendrogram) -> DistanceMatrix:
    """Pairwise height of the lowest merge joining each leaf pair."""
    n = tree.leaf_count
    square = np.zeros((n, n))
    sets = [{i} for i in range(n)]
    for left, right, height, _ in tree.merges:
        a, b = sets[int(left)], sets[int(right)]
        for i in a:
            for j in b:
                square[i, j] = square[j, i] = height
        sets.append(a | b)
    return DistanceMatrix.from_square(square)


def cophenetic_correlation(original: DistanceMatrix, coph: DistanceMatrix) -> float:
    """Pearson correlation between original and cophenetic distance vectors."""
    if original.n != coph.n:
        raise ValueError("distance matrices describe different item counts")
    x = original.condensed
    y = coph.condensed
    if x.std() == 0 or y.std() == 0:
        raise ZeroVariance("a distance vector is constant; correlation undefined")
    xc = x - x.mean()
    yc = y - y.mean()
    return float(np.dot(xc, yc) / (np.linalg.norm(xc) * np.linalg.norm(yc)))


def cut_tree(tree: Dendrogram, k: int) -> np.ndarray:
    """Flat cluster labels from stopping after n-k merges.

    Labels are ordered by first occurrence along the leaf index.
    """
    n = tree.leaf_count
    if not (1 <= k <= n):
        raise InvalidK(f"k must be in 1..{n}, got {k}")
    parent = list(range(n + len(tree.merges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in range(n - k):
        left, right, _, _ = tree.merges[t]
        node = n + t
        parent[find(int(left))] = node
        parent[find(int(right))] = node

    labels = np.empty(n, dtype=np.intp)
    seen = {}
    for i in range(n):
        root = find(i)
        if root not in seen:
            seen[root] = len(seen)
        labels[i] = seen[root]
    return labels
