"""Clausal networks: variable co-occurrence graphs and their metrics."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from . import kernels
from .cnf import CnfFormula


class GraphError(ValueError):
    pass


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True, eq=False)
class ClausalGraph:
    """Undirected simple graph on nodes ``0..n-1`` (node ``i`` is variable ``i+1``).

    Adjacency is stored as CSR with sorted neighbor lists.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> ClausalGraph:
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise GraphError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        both = np.concatenate([e, e[:, ::-1]])
        key = np.unique(both[:, 0] * n + both[:, 1])
        rows, cols = np.divmod(key, n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols.astype(np.int64))

    @property
    def num_edges(self) -> int:
        return int(self.indices.size // 2)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.num_edges / self.n

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """Edge list ``(u, w)`` with ``u < w``, lexicographically sorted."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        keep = rows < self.indices
        return np.stack([rows[keep], self.indices[keep]], axis=1)

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.indices.size, dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


def build_graph(f: CnfFormula) -> ClausalGraph:
    """Link every pair of variables that share a clause; polarity is ignored."""
    lits, offsets = f.csr
    sizes = np.diff(offsets)
    pairs = []
    if sizes.size and np.all(sizes == sizes[0]):
        k = int(sizes[0])
        vars_ = np.abs(lits).reshape(-1, k) - 1
        for a, b in combinations(range(k), 2):
            pairs.append(np.stack([vars_[:, a], vars_[:, b]], axis=1))
    else:
        for clause in f.clauses:
            for a, b in combinations(clause, 2):
                pairs.append(np.array([[abs(a) - 1, abs(b) - 1]]))
    edges = np.concatenate(pairs) if pairs else np.empty((0, 2), np.int64)
    return ClausalGraph.from_edges(f.num_vars, edges)


class Centrality(NamedTuple):
    values: np.ndarray
    converged: bool
    iterations: int


def eigenvector_centrality(g: ClausalGraph, tol: float = 1e-12, max_iter: int = 100_000) -> Centrality:
    """Dominant adjacency eigenvector by power iteration.

    Iterates ``x <- (A + I) x / ||(A + I) x||`` from the uniform vector. The
    identity shift keeps the eigenvectors but breaks the ``+lambda``/``-lambda``
    tie of bipartite graphs, which would otherwise make the plain iteration
    oscillate. Stops when successive iterates differ by less than ``tol`` in
    max-norm.
    """
    if g.num_edges == 0:
        raise GraphError("eigenvector centrality is undefined on an edgeless graph")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = g.adjacency()
    x = np.full(g.n, 1.0 / math.sqrt(g.n))
    for it in range(1, max_iter + 1):
        y = a @ x + x
        y /= np.linalg.norm(y)
        if np.max(np.abs(y - x)) < tol:
            return Centrality(y, True, it)
        x = y
    warnings.warn(f"power iteration did not converge in {max_iter} steps", ConvergenceWarning, stacklevel=2)
    return Centrality(x, False, max_iter)


def local_clustering(g: ClausalGraph) -> np.ndarray:
    a = g.adjacency()
    triangles = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    deg = g.degrees.astype(np.float64)
    out = np.zeros(g.n)
    ok = deg >= 2
    out[ok] = 2.0 * triangles[ok] / (deg[ok] * (deg[ok] - 1.0))
    return out


def avg_clustering(g: ClausalGraph) -> float:
    """Mean local clustering over all nodes; nodes of degree < 2 count as 0."""
    return float(local_clustering(g).mean())


def path_length_sums(g: ClausalGraph) -> tuple[int, int]:
    """``(sum of distances, number of connected ordered pairs)``."""
    total, pairs = kernels.bfs_distance_sums(g.indptr, g.indices, g.n)
    return int(total), int(pairs)


def avg_path_length(g: ClausalGraph) -> float:
    """Mean BFS distance over connected pairs; disconnected pairs are skipped."""
    total, pairs = path_length_sums(g)
    if pairs == 0:
        raise GraphError("graph has no connected pairs")
    return total / pairs


def random_baseline(n: int, z: float) -> tuple[float, float]:
    """Expected clustering ``z/n`` and path length ``ln n / ln z`` of a random
    graph with ``n`` nodes and mean degree ``z``."""
    if z <= 1:
        raise GraphError(f"mean degree {z:g} <= 1: random-graph path length undefined")
    return z / n, math.log(n) / math.log(z)


def small_world_ratio(c: float, l: float, n: int, z: float) -> float:
    c_rand, l_rand = random_baseline(n, z)
    return (c / l) / (c_rand / l_rand)


def proximity_ratio(g: ClausalGraph) -> float:
    """``(C / L) / (C_rand / L_rand)`` against the analytic random baseline."""
    z = g.mean_degree
    random_baseline(g.n, z)
    return small_world_ratio(avg_clustering(g), avg_path_length(g), g.n, z)


def skewness(values) -> float:
    """Adjusted Fisher-Pearson sample skewness; 0 for constant data."""
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n < 3:
        raise ValueError("skewness needs at least 3 values")
    d = x - x.mean()
    m2 = np.mean(d * d)
    if m2 <= 1e-30 * max(1.0, float(np.mean(x * x))):
        return 0.0
    g1 = np.mean(d**3) / m2**1.5
    return float(g1 * math.sqrt(n * (n - 1)) / (n - 2))


class Histogram(NamedTuple):
    edges: np.ndarray
    counts: np.ndarray
    skewness: float

    def to_csv(self) -> str:
        lines = ["bin_lo,bin_hi,count"]
        for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts):
            lines.append(f"{lo:.6f},{hi:.6f},{int(c)}")
        return "\n".join(lines) + "\n"


def centrality_histogram(values, bins: int = 20) -> Histogram:
    """Equal-width histogram over ``[min, max]`` plus sample skewness."""
    x = np.asarray(values, dtype=np.float64)
    if bins < 1 or x.size == 0:
        raise ValueError("need bins >= 1 and at least one value")
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        edges = np.linspace(lo, lo, bins + 1)
        counts = np.zeros(bins, dtype=np.int64)
        counts[0] = x.size
    else:
        counts, edges = np.histogram(x, bins=bins, range=(lo, hi))
    skew = skewness(x) if x.size >= 3 else 0.0
    return Histogram(edges, counts.astype(np.int64), skew)


@dataclass(frozen=True)
class NetworkMetrics:
    n: int
    edges: int
    z: float
    C: float
    L: float
    mu: float
    skewness: float
    converged: bool
    centrality: np.ndarray | None = None

    def record(self) -> str:
        def num(x):
            return "nan" if math.isnan(x) else str(round(x, 6))

        return (
            f"n={self.n} edges={self.edges} z={num(self.z)} C={num(self.C)} "
            f"L={num(self.L)} mu={num(self.mu)} skew={num(self.skewness)} "
            f"converged={str(self.converged).lower()}"
        )


def network_metrics(g: ClausalGraph, with_centrality: bool = True) -> NetworkMetrics:
    """All metrics at once; undefined quantities come back as ``nan``
    instead of raising."""
    z = g.mean_degree
    c = avg_clustering(g)
    total, pairs = path_length_sums(g)
    l = total / pairs if pairs else math.nan
    mu = math.nan
    if pairs and z > 1:
        mu = small_world_ratio(c, l, g.n, z)
    skew = math.nan
    converged = False
    cent = None
    if with_centrality and g.num_edges:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            cent, converged, _ = eigenvector_centrality(g)
        skew = skewness(cent) if g.n >= 3 else 0.0
    return NetworkMetrics(g.n, g.num_edges, z, c, l, mu, skew, converged, cent)
