"""Regular undirected graphs, spectral expansion, and stationary walks.

Graphs are stored as dense symmetric nonnegative integer adjacency matrices
with constant row sum ``d``; multi-edges and self-loops are allowed and count
with multiplicity (a self-loop of multiplicity m contributes m to its row
sum).  The spectral expansion is the largest ABSOLUTE nontrivial eigenvalue
of ``A / d``: the quoted "second largest eigenvalue" phrasing is weaker than
the contraction property ``||A x|| <= lambda ||x||`` on the complement of the
all-ones vector that the tail bounds actually consume, so the absolute-value
definition is implemented (bipartite graphs report lambda = 1, i.e.
non-expanding).

Edge-list text format: a header line ``n d``, then one ``u v m`` line per
undirected edge with multiplicity ``m``, vertices 0-indexed, each unordered
pair listed once (self-loops as ``u u m``).  The loader validates symmetry
and d-regularity.

Walk sampling is deterministic in the seed: walk ``i`` of a batch draws from
the PCG64 stream keyed ``(seed, DOMAIN_WALK, i)``, so estimates do not depend
on chunking or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ArgumentError, NumericalError
from .rng import DOMAIN_GRAPH, DOMAIN_WALK, stream


@dataclass(frozen=True)
class RegularGraph:
    """d-regular undirected multigraph on vertices ``0 .. n-1``."""

    n: int
    degree: int
    adjacency: np.ndarray

    def __init__(self, adjacency: np.ndarray):
        adj = np.asarray(adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ArgumentError(f"adjacency must be square, got {adj.shape}")
        if not np.issubdtype(adj.dtype, np.integer):
            if not np.all(adj == np.round(adj)):
                raise ArgumentError("adjacency entries must be integers")
            adj = adj.astype(np.int64)
        else:
            adj = adj.astype(np.int64)
        n = adj.shape[0]
        if n < 2:
            raise ArgumentError(f"graph needs at least 2 vertices, got {n}")
        if np.any(adj < 0):
            raise ArgumentError("adjacency entries must be nonnegative")
        if not np.array_equal(adj, adj.T):
            raise ArgumentError("adjacency must be symmetric")
        sums = adj.sum(axis=1)
        if not np.all(sums == sums[0]):
            raise ArgumentError(f"rows must share one sum, got {sums}")
        d = int(sums[0])
        if d < 1:
            raise ArgumentError("degree must be at least 1")
        adj = np.ascontiguousarray(adj)
        adj.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "adjacency", adj)

    def edge_slots(self) -> np.ndarray:
        """(n, d) table: row u lists neighbors of u, each repeated by multiplicity."""
        out = np.empty((self.n, self.degree), dtype=np.int64)
        for u in range(self.n):
            out[u] = np.repeat(np.arange(self.n), self.adjacency[u])
        return out


@dataclass(frozen=True)
class WalkSample:
    vertices: tuple[int, ...]
    seed: int
    length: int


def normalized_adjacency(g: RegularGraph) -> np.ndarray:
    """``A / d``: symmetric, doubly stochastic, top eigenvalue 1 at the all-ones vector."""
    return g.adjacency.astype(np.float64) / g.degree


def spectral_expansion(g: RegularGraph) -> float:
    """Largest absolute nontrivial eigenvalue of ``A / d``."""
    try:
        vals = np.linalg.eigvalsh(normalized_adjacency(g))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigensolver failed on adjacency: {exc}") from exc
    vals = np.sort(vals)[::-1]  # drop one copy of the trivial eigenvalue 1
    rest = vals[1:]
    return float(np.max(np.abs(rest)))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def gen_complete(n: int) -> RegularGraph:
    if n < 2:
        raise ArgumentError(f"complete graph needs n >= 2, got {n}")
    return RegularGraph(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))


def gen_cycle(n: int) -> RegularGraph:
    if n < 2:
        raise ArgumentError(f"cycle needs n >= 2, got {n}")
    adj = np.zeros((n, n), dtype=np.int64)
    if n == 2:
        adj[0, 1] = adj[1, 0] = 2  # double edge keeps degree 2
    else:
        for u in range(n):
            adj[u, (u + 1) % n] += 1
            adj[(u + 1) % n, u] += 1
    return RegularGraph(adj)


def gen_hypercube(dim: int) -> RegularGraph:
    if dim < 1:
        raise ArgumentError(f"hypercube needs dim >= 1, got {dim}")
    n = 1 << dim
    adj = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for b in range(dim):
            adj[u, u ^ (1 << b)] = 1
    return RegularGraph(adj)


def gen_random_regular(n: int, d: int, seed: int) -> RegularGraph:
    """Permutation-model d-regular multigraph, deterministic in ``seed``.

    Sums floor(d/2) random permutations with their inverses; an odd degree
    adds a random perfect matching (requiring even n, hence the n*d parity
    condition).  Fixed points and 2-cycles of the permutations produce
    self-loops and multi-edges, which are allowed.
    """
    if n < 2 or d < 1:
        raise ArgumentError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if (n * d) % 2 != 0:
        raise ArgumentError(f"n * d must be even, got n={n}, d={d}")
    rng = stream(seed, DOMAIN_GRAPH)
    adj = np.zeros((n, n), dtype=np.int64)
    for _ in range(d // 2):
        perm = rng.permutation(n)
        for u, v in enumerate(perm):
            adj[u, v] += 1
            adj[v, u] += 1
    if d % 2 == 1:
        pairing = rng.permutation(n)
        for a, b in pairing.reshape(-1, 2):
            adj[a, b] += 1
            adj[b, a] += 1
    return RegularGraph(adj)


# ---------------------------------------------------------------------------
# Walks
# ---------------------------------------------------------------------------

def sample_walk(g: RegularGraph, length: int, seed: int, walk_index: int = 0) -> WalkSample:
    """Stationary walk: uniform start, then uniform over the d edge slots."""
    if length < 1:
        raise ArgumentError(f"walk length must be >= 1, got {length}")
    slots = g.edge_slots()
    rng = stream(seed, DOMAIN_WALK, walk_index)
    v = int(rng.integers(g.n))
    verts = [v]
    if length > 1:
        choices = rng.integers(g.degree, size=length - 1)
        for c in choices:
            v = int(slots[v, c])
            verts.append(v)
    return WalkSample(vertices=tuple(verts), seed=seed, length=length)


def sample_walks_array(
    g: RegularGraph, length: int, num_walks: int, seed: int, start_index: int = 0
) -> np.ndarray:
    """Vertex matrix (num_walks, length) for walks ``start_index .. +num_walks``.

    Row i reproduces ``sample_walk(g, length, seed, start_index + i)`` exactly,
    so a batch can be recomputed in any chunking.
    """
    if length < 1:
        raise ArgumentError(f"walk length must be >= 1, got {length}")
    slots = g.edge_slots()
    out = np.empty((num_walks, length), dtype=np.int64)
    starts = np.empty(num_walks, dtype=np.int64)
    steps = np.empty((num_walks, max(length - 1, 1)), dtype=np.int64)
    for i in range(num_walks):
        rng = stream(seed, DOMAIN_WALK, start_index + i)
        starts[i] = rng.integers(g.n)
        if length > 1:
            steps[i] = rng.integers(g.degree, size=length - 1)
    out[:, 0] = starts
    for j in range(1, length):
        out[:, j] = slots[out[:, j - 1], steps[:, j - 1]]
    return out


# ---------------------------------------------------------------------------
# Edge-list serialization
# ---------------------------------------------------------------------------

def save_edge_list(g: RegularGraph, path: str | Path) -> None:
    lines = [f"{g.n} {g.degree}"]
    for u in range(g.n):
        for v in range(u, g.n):
            m = int(g.adjacency[u, v])
            if m > 0:
                lines.append(f"{u} {v} {m}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_edge_list(path: str | Path) -> RegularGraph:
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ArgumentError("empty edge-list file")
    header = text[0].split()
    if len(header) != 2:
        raise ArgumentError(f"header must be 'n d', got {text[0]!r}")
    n, d = int(header[0]), int(header[1])
    adj = np.zeros((n, n), dtype=np.int64)
    for line in text[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ArgumentError(f"edge lines must be 'u v m', got {line!r}")
        u, v, m = (int(p) for p in parts)
        if not (0 <= u < n and 0 <= v < n):
            raise ArgumentError(f"vertex out of range in {line!r}")
        adj[u, v] += m
        if u != v:
            adj[v, u] += m
    g = RegularGraph(adj)
    if g.degree != d:
        raise ArgumentError(f"header degree {d} does not match adjacency degree {g.degree}")
    return g
