"""
Johnson networks J(n, m).

Vertices are the m-subsets of {1, ..., n}, indexed by colexicographic rank.
Internally each subset is also kept as a bitmask (bit ``i - 1`` set iff
element ``i`` is present) so that graph distance is a popcount:
``d(v, w) = |v xor w| / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np
from scipy import sparse

from .errors import CapacityError, DomainError, IntegrityError

DEFAULT_SIZE_CAP = 10**6
DENSE_LIMIT = 1000


# ------------------------------------------------------------------
# colexicographic ranking
# ------------------------------------------------------------------

def colex_rank(subset) -> int:
    """Rank of a subset of {1, ..., n} in colexicographic order (0-based)."""
    return sum(comb(e - 1, i + 1) for i, e in enumerate(sorted(subset)))


def colex_unrank(rank: int, m: int) -> tuple[int, ...]:
    """Inverse of :func:`colex_rank` for m-subsets."""
    if rank < 0:
        raise DomainError(f"rank must be nonnegative, got {rank}")
    out = []
    for k in range(m, 0, -1):
        # largest c with comb(c, k) <= rank
        c = k - 1
        while comb(c + 1, k) <= rank:
            c += 1
        out.append(c + 1)
        rank -= comb(c, k)
    return tuple(reversed(out))


def _mask(subset) -> int:
    bits = 0
    for e in subset:
        bits |= 1 << (e - 1)
    return bits


def _subset(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


# ------------------------------------------------------------------
# graph types
# ------------------------------------------------------------------

@dataclass(frozen=True)
class JohnsonGraph:
    """The Johnson network J(n, m) with colex-ranked vertices.

    Build it through :func:`build_johnson`, which validates the parameters.
    """

    n: int
    m: int

    @property
    def N(self) -> int:
        return comb(self.n, self.m)

    @property
    def degree(self) -> int:
        return self.m * (self.n - self.m)

    @property
    def diameter(self) -> int:
        return self.m

    @cached_property
    def masks(self) -> np.ndarray:
        """Bitmask of every vertex, in rank order."""
        out = np.empty(self.N, dtype=np.int64)
        for r, c in enumerate(_colex_subsets(self.n, self.m)):
            out[r] = _mask(c)
        return out

    @cached_property
    def _index(self) -> dict[int, int]:
        return {int(b): r for r, b in enumerate(self.masks)}

    def subset(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return _subset(int(self.masks[v]))

    def rank(self, subset) -> int:
        subset = tuple(sorted(subset))
        if len(subset) != self.m or len(set(subset)) != self.m or not all(
            1 <= e <= self.n for e in subset
        ):
            raise DomainError(f"{subset} is not an {self.m}-subset of 1..{self.n}")
        return colex_rank(subset)

    def index_of_mask(self, mask: int) -> int:
        return self._index[mask]

    def distance(self, v: int, w: int) -> int:
        self._check_vertex(v)
        self._check_vertex(w)
        return (int(self.masks[v]) ^ int(self.masks[w])).bit_count() // 2

    def adjacent(self, v: int, w: int) -> bool:
        return self.distance(v, w) == 1

    def neighbors(self, v: int) -> list[int]:
        """Vertices reached by swapping one element in for one element out."""
        self._check_vertex(v)
        mask = int(self.masks[v])
        inside = [i for i in range(self.n) if mask >> i & 1]
        outside = [i for i in range(self.n) if not mask >> i & 1]
        return sorted(
            self._index[mask ^ (1 << i) ^ (1 << j)] for i in inside for j in outside
        )

    def distances_from(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return np.bitwise_count(self.masks ^ self.masks[v]).astype(np.int64) // 2

    def distance_table(self) -> np.ndarray:
        """Dense N x N matrix of graph distances."""
        if self.N > DENSE_LIMIT * 10:
            raise CapacityError(f"dense distance table for N={self.N} refused")
        x = self.masks[:, None] ^ self.masks[None, :]
        return np.bitwise_count(x).astype(np.int64) // 2

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.N:
            raise DomainError(f"vertex {v} out of range 0..{self.N - 1}")


def _colex_subsets(n: int, m: int):
    # combinations() yields lexicographic order; colex is lex on reversed tuples
    return sorted(combinations(range(1, n + 1), m), key=lambda c: c[::-1])


@dataclass(frozen=True)
class DistanceMatrices:
    """A_0..A_m; dense int arrays for N <= 1000, CSR arrays above that."""

    matrices: tuple

    @property
    def dense(self) -> bool:
        return isinstance(self.matrices[0], np.ndarray)

    def __getitem__(self, k):
        return self.matrices[k]

    def __len__(self) -> int:
        return len(self.matrices)


@dataclass(frozen=True)
class Stratification:
    reference: int
    strata: tuple[tuple[int, ...], ...]
    valencies: tuple[int, ...]
    unit_vectors: np.ndarray  # shape (m + 1, N)


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]

    @property
    def diameter(self) -> int:
        return len(self.b)


# ------------------------------------------------------------------
# operations
# ------------------------------------------------------------------

def build_johnson(n: int, m: int, size_cap: int = DEFAULT_SIZE_CAP) -> JohnsonGraph:
    """Construct J(n, m) after validating ``1 <= m <= n/2`` and the size cap."""
    if not (isinstance(n, int) and isinstance(m, int)):
        raise DomainError("n and m must be integers")
    if m < 1 or 2 * m > n:
        raise DomainError(f"need 1 <= m <= n/2, got n={n}, m={m}")
    if comb(n, m) > size_cap:
        raise CapacityError(f"C({n},{m}) = {comb(n, m)} exceeds size cap {size_cap}")
    return JohnsonGraph(n, m)


def adjacency_sparse(g: JohnsonGraph) -> sparse.csr_array:
    """A_1 built from the one-swap rule, without forming distance tables."""
    rows, cols = [], []
    for v in range(g.N):
        nb = g.neighbors(v)
        rows.extend([v] * len(nb))
        cols.extend(nb)
    data = np.ones(len(rows), dtype=np.int64)
    return sparse.csr_array((data, (rows, cols)), shape=(g.N, g.N))


def distance_matrices(g: JohnsonGraph) -> DistanceMatrices:
    """A_k[i, j] = 1 iff subsets i and j share exactly m - k elements."""
    if g.N <= DENSE_LIMIT:
        D = g.distance_table()
        return DistanceMatrices(tuple((D == k).astype(np.int64) for k in range(g.m + 1)))
    mats = []
    for k in range(g.m + 1):
        rows, cols = [], []
        for v in range(g.N):
            w = np.flatnonzero(g.distances_from(v) == k)
            rows.append(np.full(w.size, v))
            cols.append(w)
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        mats.append(
            sparse.csr_array((np.ones(r.size, dtype=np.int64), (r, c)), shape=(g.N, g.N))
        )
    return DistanceMatrices(tuple(mats))


def intersection_numbers(g: JohnsonGraph) -> IntersectionArray:
    """Count b_l and c_l by brute force and check they are well defined.

    For N <= 1000 every (reference, vertex) pair is checked; above that only
    reference vertex 0 is used.

    Raises
    ------
    IntegrityError
        If some count varies across vertices at the same distance.
    """
    m = g.m
    if g.N <= DENSE_LIMIT:
        D = g.distance_table()
        A1 = (D == 1).astype(np.int64)
        pairs = {k: D == k for k in range(m + 1)}
        # (M_j @ A1)[u, v] = #{w ~ v : d(u, w) = j}
        counts = {k: pairs[k].astype(np.int64) @ A1 for k in range(m + 1)}
    else:
        D = g.distances_from(0)[None, :]
        A1 = adjacency_sparse(g)
        pairs = {k: D == k for k in range(m + 1)}
        counts = {k: np.asarray((A1 @ pairs[k][0].astype(np.int64)))[None, :] for k in range(m + 1)}

    def _constant(vals, label):
        u = np.unique(vals)
        if u.size != 1:
            raise IntegrityError(f"{label} not constant: {u.tolist()}")
        return int(u[0])

    b = tuple(_constant(counts[l + 1][pairs[l]], f"b_{l}") for l in range(m))
    c = tuple(_constant(counts[l - 1][pairs[l]], f"c_{l}") for l in range(1, m + 1))
    return IntersectionArray(b, c)


def stratify(g: JohnsonGraph, reference: int = 0) -> Stratification:
    """Partition the vertices by distance from ``reference``."""
    dist = g.distances_from(reference)
    strata = tuple(tuple(np.flatnonzero(dist == k).tolist()) for k in range(g.m + 1))
    valencies = tuple(len(s) for s in strata)
    phi = np.zeros((g.m + 1, g.N))
    for k, s in enumerate(strata):
        phi[k, list(s)] = 1.0 / np.sqrt(len(s))
    phi.setflags(write=False)
    return Stratification(reference, strata, valencies, phi)


def antipode(g: JohnsonGraph, v: int) -> int:
    """The unique vertex at distance m from ``v``: its set complement."""
    if g.n != 2 * g.m:
        raise DomainError(f"antipode needs n = 2m; J({g.n},{g.m}) has {comb(g.n - g.m, g.m)} vertices at distance m")
    g._check_vertex(v)
    full = (1 << g.n) - 1
    return g._index[full ^ int(g.masks[v])]


def bfs_distances(g: JohnsonGraph, source: int) -> np.ndarray:
    """Graph distances by breadth-first search over the one-swap neighbours.

    Independent of the popcount rule; kept as a cross-check.
    """
    dist = np.full(g.N, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in g.neighbors(v):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist
