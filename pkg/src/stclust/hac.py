"""Average-linkage (UPGMA) agglomerative clustering over a similarity matrix.

The engine merges the most-similar pair of clusters at each step, where the
similarity of two clusters is the arithmetic mean of the item-pair
similarities between them.  It maintains the matrix of between-cluster
similarity *sums*, which the standard incremental update keeps exact under
addition, so reported linkages equal the from-scratch averages up to
floating-point summation order.

Cluster ids: items are 0..n-1, the cluster created by the t-th merge gets
id n+t.  Ties on linkage are broken by the smallest (min id, max id) pair,
which makes the whole merge sequence deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    similarity: float


class SimilarityMatrix:
    """Validated symmetric similarity matrix with unit diagonal."""

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("similarity matrix must be square")
        if arr.shape[0] == 0:
            raise ValueError("similarity matrix must have at least one item")
        if not np.all(np.isfinite(arr)):
            raise ValueError("similarity values must be finite")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("similarity values must lie in [0, 1]")
        if not np.array_equal(arr, arr.T):
            raise ValueError("similarity matrix must be symmetric")
        if not np.allclose(np.diag(arr), 1.0, rtol=0.0, atol=1e-9):
            raise ValueError("self-similarity must be 1")
        self.values = arr

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class Dendrogram:
    """Full merge history of an agglomerative clustering run."""

    n_items: int
    merges: tuple[Merge, ...]

    def __post_init__(self) -> None:
        if len(self.merges) != self.n_items - 1:
            raise ValueError("a dendrogram over n items must contain n-1 merges")

    def cut(self, k: int) -> tuple[frozenset[int], ...]:
        """Flat clustering with exactly k clusters (stop after n-k merges)."""
        if not 1 <= k <= self.n_items:
            raise ValueError(f"k must be in [1, {self.n_items}], got {k}")
        members = {i: frozenset((i,)) for i in range(self.n_items)}
        for t in range(self.n_items - k):
            merge = self.merges[t]
            members[self.n_items + t] = members.pop(merge.left) | members.pop(merge.right)
        return tuple(sorted(members.values(), key=min))

    def all_levels(self) -> Iterator[tuple[frozenset[int], ...]]:
        """Yield the flat clustering at every level, K = n down to 1."""
        members = {i: frozenset((i,)) for i in range(self.n_items)}
        yield tuple(sorted(members.values(), key=min))
        for t, merge in enumerate(self.merges):
            members[self.n_items + t] = members.pop(merge.left) | members.pop(merge.right)
            yield tuple(sorted(members.values(), key=min))


def upgma(matrix) -> Dendrogram:
    """Cluster items under average linkage, most similar pair first."""
    if not isinstance(matrix, SimilarityMatrix):
        matrix = SimilarityMatrix(matrix)
    n = matrix.n
    if n == 1:
        return Dendrogram(1, ())

    # Pairwise similarity sums between clusters; averages are sums divided
    # by the size product.  Merged clusters fold into the left slot.
    sums = matrix.values.copy()
    link = matrix.values.copy()
    np.fill_diagonal(link, -np.inf)
    sizes = np.ones(n, dtype=np.float64)
    active = np.ones(n, dtype=bool)
    cluster_id = list(range(n))
    merges: list[Merge] = []

    for t in range(n - 1):
        best = link.max()
        rows, cols = np.nonzero(link == best)
        best_key = None
        best_slots = (0, 0)
        for i, j in zip(rows.tolist(), cols.tolist()):
            if i >= j:
                continue
            a, b = cluster_id[i], cluster_id[j]
            key = (min(a, b), max(a, b))
            if best_key is None or key < best_key:
                best_key = key
                best_slots = (i, j)
        si, sj = best_slots
        merges.append(Merge(best_key[0], best_key[1], float(best)))

        sums[si, :] += sums[sj, :]
        sums[:, si] += sums[:, sj]
        sizes[si] += sizes[sj]
        active[sj] = False
        cluster_id[si] = n + t
        link[sj, :] = -np.inf
        link[:, sj] = -np.inf
        others = active.copy()
        others[si] = False
        if others.any():
            updated = sums[si, others] / (sizes[si] * sizes[others])
            link[si, others] = updated
            link[others, si] = updated
        link[si, si] = -np.inf

    return Dendrogram(n, tuple(merges))
