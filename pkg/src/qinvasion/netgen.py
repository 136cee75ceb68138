"""Static interaction networks: periodic square lattice, Newman-Watts, Barabasi-Albert."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from qinvasion.errors import DomainError

NETWORK_KINDS = ("RL", "NW", "SF")


@dataclass(frozen=True, eq=False)
class Network:
    """Immutable undirected simple graph stored as sorted CSR neighbor lists."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_neighbor_sets(cls, nbrs: list[set[int]]) -> "Network":
        indptr = np.zeros(len(nbrs) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(s) for s in nbrs])
        indices = np.fromiter((j for s in nbrs for j in sorted(s)), dtype=np.int64,
                              count=int(indptr[-1]))
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return cls(len(nbrs), indptr, indices)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return int(self.indptr[-1]) // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.n)]

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            for j in self.neighbors(i):
                if i < j:
                    yield i, int(j)

    def is_connected(self) -> bool:
        m = csr_matrix((np.ones(len(self.indices)), self.indices, self.indptr), shape=(self.n, self.n))
        return connected_components(m, directed=False, return_labels=False) == 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, Network) and self.n == other.n
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None


@dataclass(frozen=True)
class NetworkSpec:
    kind: str = "RL"
    side: int = 50
    p_nw: float = 0.5
    m0: int = 3
    m: int = 2
    n: int | None = None  # SF only; defaults to side**2

    @property
    def nodes(self) -> int:
        if self.kind == "SF" and self.n is not None:
            return self.n
        return self.side * self.side

    def validate(self) -> "NetworkSpec":
        if self.kind not in NETWORK_KINDS:
            raise DomainError(f"network kind must be one of {', '.join(NETWORK_KINDS)}, got {self.kind!r}")
        if self.kind in ("RL", "NW") and self.side < 3:
            raise DomainError(f"side must be >= 3, got {self.side!r}")
        if self.kind == "NW" and not 0.0 <= self.p_nw <= 1.0:
            raise DomainError(f"p_nw must lie in [0, 1], got {self.p_nw!r}")
        if self.kind == "SF" and not 1 <= self.m <= self.m0 < self.nodes:
            raise DomainError(f"need 1 <= m <= m0 < n, got m={self.m}, m0={self.m0}, n={self.nodes}")
        return self


def _lattice_sets(side: int) -> list[set[int]]:
    if side < 3:
        raise DomainError(f"side must be >= 3, got {side!r}")
    nbrs = []
    for r in range(side):
        for c in range(side):
            nbrs.append({
                ((r - 1) % side) * side + c,
                ((r + 1) % side) * side + c,
                r * side + (c - 1) % side,
                r * side + (c + 1) % side,
            })
    return nbrs


@lru_cache(maxsize=8)
def regular_lattice(side: int) -> Network:
    """side x side torus, von Neumann neighborhood, node id = row * side + col."""
    return Network.from_neighbor_sets(_lattice_sets(side))


def newman_watts(side: int, p_nw: float, rng: np.random.Generator) -> Network:
    """Lattice plus one random shortcut per lattice edge with probability p_nw.

    Shortcuts that would be self-loops or duplicate edges are redrawn, so the
    number added always equals the number of successful trials.
    """
    if not 0.0 <= p_nw <= 1.0:
        raise DomainError(f"p_nw must lie in [0, 1], got {p_nw!r}")
    nbrs = _lattice_sets(side)
    n = side * side
    shortcuts = int(np.count_nonzero(rng.random(2 * n) < p_nw))
    if 2 * n + shortcuts > n * (n - 1) // 2:
        raise DomainError(f"p_nw={p_nw} asks for more shortcuts than the {n}-node graph can hold")
    added = 0
    while added < shortcuts:
        i, j = (int(x) for x in rng.integers(0, n, size=2))
        if i == j or j in nbrs[i]:
            continue
        nbrs[i].add(j)
        nbrs[j].add(i)
        added += 1
    return Network.from_neighbor_sets(nbrs)


def barabasi_albert(n: int, m0: int, m: int, rng: np.random.Generator) -> Network:
    """Grow from a complete core of m0 nodes; each newcomer links to m distinct
    existing nodes drawn with probability proportional to degree."""
    # n == m0 is allowed and returns the bare core
    if not 1 <= m <= m0 <= n:
        raise DomainError(f"need 1 <= m <= m0 <= n, got n={n}, m0={m0}, m={m}")
    nbrs: list[set[int]] = [set(range(m0)) - {i} for i in range(m0)]
    # each node appears once per incident edge end
    ends = [i for i in range(m0) for _ in range(m0 - 1)]
    if not ends:
        ends = list(range(m0))
    for new in range(m0, n):
        targets: list[int] = []
        while len(targets) < m:
            t = ends[int(rng.integers(len(ends)))]
            if t not in targets:
                targets.append(t)
        nbrs.append(set(targets))
        for t in targets:
            nbrs[t].add(new)
            ends.extend((t, new))
    return Network.from_neighbor_sets(nbrs)


def build_network(spec: NetworkSpec, rng: np.random.Generator) -> Network:
    spec.validate()
    if spec.kind == "RL":
        net = regular_lattice(spec.side)
    elif spec.kind == "NW":
        net = newman_watts(spec.side, spec.p_nw, rng)
    else:
        net = barabasi_albert(spec.nodes, spec.m0, spec.m, rng)
    if not net.is_connected():
        raise RuntimeError(f"generated {spec.kind} network is disconnected")
    return net


def top_k_degree_nodes(net: Network, k: int) -> list[int]:
    """Node ids by degree descending, ties by ascending id."""
    if not 1 <= k <= net.n:
        raise DomainError(f"k must lie in [1, {net.n}], got {k!r}")
    order = np.lexsort((np.arange(net.n), -net.degrees))
    return [int(i) for i in order[:k]]


def degree_histogram(net: Network) -> dict[int, int]:
    values, counts = np.unique(net.degrees, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def ccdf_tail_slope(degrees: np.ndarray, k_min: int) -> float:
    """Least-squares slope of log CCDF against log degree over degrees >= k_min.

    CCDF(k) is the fraction of nodes with degree >= k, evaluated at each
    distinct observed degree.
    """
    degrees = np.sort(np.asarray(degrees))
    ks = np.unique(degrees[degrees >= k_min])
    if len(ks) < 2:
        raise DomainError(f"need at least two distinct degrees >= {k_min}")
    ccdf = 1.0 - np.searchsorted(degrees, ks, side="left") / len(degrees)
    slope, _ = np.polyfit(np.log(ks), np.log(ccdf), 1)
    return float(slope)
