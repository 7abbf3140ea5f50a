"""Undirected graph construction and Laplacian assembly.

Deterministic families (rings, paths, planar lattices) and seeded random
families (regular-random, small-world, binomial, preferential attachment),
a combinatorial Laplacian builder, connectivity checks, and a plain-text
edge-list format.

Conventions
-----------
Nodes are labeled ``0 .. n-1``.  Edges are unordered pairs stored as
``(i, j)`` with ``i < j``.  For ring-based families (``ring``,
``watts-strogatz``) the parameter ``k`` counts neighbors *per side*, so the
node degree is ``2k``.  For ``regular-random`` graphs ``k`` is the full
degree, and for ``barabasi-albert`` it is the number of edges attached by
each arriving node.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import GenerationError
from .rng import check_seed, derive_seed, rng_from

DETERMINISTIC_FAMILIES = (
    "ring",
    "path",
    "triangular-lattice",
    "square-lattice",
    "hexagonal-lattice",
)
RANDOM_FAMILIES = (
    "regular-random",
    "watts-strogatz",
    "erdos-renyi",
    "barabasi-albert",
)
FAMILIES = DETERMINISTIC_FAMILIES + RANDOM_FAMILIES
LATTICE_KINDS = ("triangular", "square", "hexagonal")

_CONNECTIVITY_RETRIES = 100


def _norm(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: node count plus a canonical sorted edge tuple.

    Rejects self-loops, duplicate edges and out-of-range labels at
    construction time; edge order and endpoint order are normalized, so
    two graphs with the same edge set compare equal.
    """

    n_nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError(f"graph needs at least one node, got {self.n_nodes}")
        seen: set[tuple[int, int]] = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise ValueError(f"edge ({i}, {j}) out of range for {self.n_nodes} nodes")
            e = _norm(int(i), int(j))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


@dataclass(frozen=True)
class GraphSpec:
    """Declarative description of a graph to build.

    ``n``/``k``/``p`` are interpreted per family (see module docstring);
    lattices take ``rows``/``cols`` instead of ``n``.  ``seed`` only matters
    for random families.  With ``require_connected`` set, random families are
    resampled with derived seeds until connected (bounded retries).
    """

    family: str
    n: int | None = None
    k: int | None = None
    p: float | None = None
    rows: int | None = None
    cols: int | None = None
    seed: int = 0
    require_connected: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown graph family {self.family!r}; choose from {FAMILIES}")
        check_seed(self.seed)
        lattice = self.family.endswith("-lattice")
        if lattice:
            if self.rows is None or self.cols is None:
                raise ValueError(f"{self.family} requires rows and cols")
            if self.n is not None:
                raise ValueError(f"{self.family} takes rows/cols, not n")
        else:
            if self.n is None:
                raise ValueError(f"{self.family} requires n")
            if self.rows is not None or self.cols is not None:
                raise ValueError(f"{self.family} does not take rows/cols")
        needs_k = self.family in ("ring", "watts-strogatz", "regular-random", "barabasi-albert")
        if needs_k and self.k is None:
            raise ValueError(f"{self.family} requires k")
        if not needs_k and self.k is not None:
            raise ValueError(f"{self.family} does not take k")
        needs_p = self.family in ("watts-strogatz", "erdos-renyi")
        if needs_p and self.p is None:
            raise ValueError(f"{self.family} requires p")
        if not needs_p and self.p is not None:
            raise ValueError(f"{self.family} does not take p")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.n is not None and self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if lattice and (self.rows < 2 or self.cols < 2):
            raise ValueError(f"lattice requires rows >= 2 and cols >= 2, got {self.rows}x{self.cols}")


def gen_ring(n: int, k: int) -> Graph:
    """Ring of ``n`` nodes, each joined to its ``k`` nearest neighbors per side.

    Every node has degree ``2k`` and the graph has ``n*k`` edges.  Requires
    ``n >= 3`` and ``1 <= k <= (n - 1) // 2`` so that no wrap-around edge is
    counted twice.
    """
    if n < 3:
        raise ValueError(f"ring requires n >= 3, got {n}")
    if not 1 <= k <= (n - 1) // 2:
        raise ValueError(f"ring requires 1 <= k <= (n-1)//2 = {(n - 1) // 2}, got k={k}")
    edges = [_norm(i, (i + off) % n) for i in range(n) for off in range(1, k + 1)]
    return Graph(n, tuple(edges))


def gen_path(n: int) -> Graph:
    """Path of ``n >= 2`` nodes: edges (i, i+1)."""
    if n < 2:
        raise ValueError(f"path requires n >= 2, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def gen_lattice(kind: str, rows: int, cols: int) -> Graph:
    """Finite planar lattice patch with open (non-periodic) boundary.

    ``square``: rows x cols grid, interior degree 4.  ``triangular``: the
    grid plus one parallel diagonal per unit cell, interior degree 6.
    ``hexagonal``: brick-wall layout, full horizontal rows with vertical
    edges at alternating parity, so every degree is at most 3.  Node (r, c)
    has index ``r * cols + c``.
    """
    if kind not in LATTICE_KINDS:
        raise ValueError(f"unknown lattice kind {kind!r}; choose from {LATTICE_KINDS}")
    if rows < 2 or cols < 2:
        raise ValueError(f"lattice requires rows >= 2 and cols >= 2, got {rows}x{cols}")

    def node(r: int, c: int) -> int:
        return r * cols + c

    edges: list[tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((node(r, c), node(r, c + 1)))
            if r + 1 < rows:
                if kind in ("triangular", "square"):
                    edges.append((node(r, c), node(r + 1, c)))
                elif (r + c) % 2 == 0:
                    edges.append((node(r, c), node(r + 1, c)))
            if kind == "triangular" and r + 1 < rows and c + 1 < cols:
                edges.append((node(r, c), node(r + 1, c + 1)))
    return Graph(rows * cols, tuple(edges))


def _erdos_renyi(n: int, p: float, rng: np.random.Generator) -> set[tuple[int, int]]:
    # one Bernoulli draw per unordered pair, row-major over the upper triangle
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.size) < p
    return set(zip(iu[mask].tolist(), ju[mask].tolist()))


def _watts_strogatz(n: int, k: int, p: float, rng: np.random.Generator) -> set[tuple[int, int]]:
    # classic single-pass rewiring over the base ring, by node then by offset;
    # the far endpoint moves to a uniform non-self, non-duplicate target
    if n < 3 or not 1 <= k <= (n - 1) // 2:
        raise GenerationError(f"watts-strogatz requires n >= 3 and 1 <= k <= (n-1)//2, got n={n}, k={k}")
    edges = {_norm(i, (i + off) % n) for i in range(n) for off in range(1, k + 1)}
    degree = [2 * k] * n
    for u in range(n):
        for off in range(1, k + 1):
            if rng.random() >= p:
                continue
            if degree[u] >= n - 1:
                continue
            v = (u + off) % n
            while True:
                w = int(rng.integers(n))
                if w != u and _norm(u, w) not in edges:
                    break
            edges.remove(_norm(u, v))
            edges.add(_norm(u, w))
            degree[v] -= 1
            degree[w] += 1
    return edges


def _regular_random(n: int, k: int, rng: np.random.Generator) -> set[tuple[int, int]]:
    # stub-pairing with rejection: shuffle the stub multiset, pair consecutive
    # stubs, recycle the pairs that would form loops or duplicates; restart
    # from scratch whenever the leftover stubs cannot form any legal edge
    if not 0 < k < n:
        raise GenerationError(f"regular-random requires 0 < k < n, got n={n}, k={k}")
    if (n * k) % 2:
        raise GenerationError(f"regular-random requires n*k even, got n={n}, k={k}")
    for _ in range(200):
        edges: set[tuple[int, int]] = set()
        stubs = np.repeat(np.arange(n), k)
        stalled = 0
        while stubs.size and stalled < 50:
            rng.shuffle(stubs)
            leftover: list[int] = []
            for u, v in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
                e = _norm(u, v)
                if u != v and e not in edges:
                    edges.add(e)
                else:
                    leftover.append(u)
                    leftover.append(v)
            stalled = stalled + 1 if len(leftover) == len(stubs) else 0
            stubs = np.asarray(leftover, dtype=np.int64)
            if stubs.size and not _has_legal_pair(stubs, edges):
                break
        if not stubs.size:
            return edges
    raise GenerationError(f"could not realize a simple {k}-regular graph on {n} nodes")


def _has_legal_pair(stubs: np.ndarray, edges: set[tuple[int, int]]) -> bool:
    nodes = sorted(set(stubs.tolist()))
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            if (nodes[a], nodes[b]) not in edges:
                return True
    return False


def _barabasi_albert(n: int, k: int, rng: np.random.Generator) -> set[tuple[int, int]]:
    # seed with a star on k+1 nodes, then attach each new node to k distinct
    # targets drawn degree-proportionally (repeated-node list, duplicates
    # rejected, i.e. sampling without replacement)
    if not 1 <= k <= n - 1:
        raise GenerationError(f"barabasi-albert requires 1 <= k <= n-1, got n={n}, k={k}")
    edges = {(0, leaf) for leaf in range(1, k + 1)}
    repeated = [0] * k + list(range(1, k + 1))
    for new in range(k + 1, n):
        chosen: set[int] = set()
        while len(chosen) < k:
            chosen.add(repeated[int(rng.integers(len(repeated)))])
        targets = sorted(chosen)
        for t in targets:
            edges.add(_norm(new, t))
        repeated.extend(targets)
        repeated.extend([new] * k)
    return edges


def gen_random(spec: GraphSpec) -> Graph:
    """Build one realization of a random-family spec.

    The same (spec, seed) always yields the identical edge set.  When
    ``require_connected`` is set, disconnected draws are rejected and
    retried with seeds derived from (seed, attempt), up to a fixed bound.
    """
    if spec.family not in RANDOM_FAMILIES:
        raise ValueError(f"{spec.family!r} is not a random family")
    attempts = _CONNECTIVITY_RETRIES if spec.require_connected else 1
    for attempt in range(attempts):
        rng = rng_from(spec.seed, attempt)
        if spec.family == "erdos-renyi":
            edges = _erdos_renyi(spec.n, spec.p, rng)
        elif spec.family == "watts-strogatz":
            edges = _watts_strogatz(spec.n, spec.k, spec.p, rng)
        elif spec.family == "regular-random":
            edges = _regular_random(spec.n, spec.k, rng)
        else:
            edges = _barabasi_albert(spec.n, spec.k, rng)
        g = Graph(spec.n, tuple(edges))
        if not spec.require_connected or is_connected(g):
            return g
    raise GenerationError(
        f"no connected {spec.family} realization in {attempts} attempts (seed {spec.seed})"
    )


def build_graph(spec: GraphSpec) -> Graph:
    """Dispatch a GraphSpec to the matching generator."""
    if spec.family == "ring":
        return gen_ring(spec.n, spec.k)
    if spec.family == "path":
        return gen_path(spec.n)
    if spec.family.endswith("-lattice"):
        return gen_lattice(spec.family.removesuffix("-lattice"), spec.rows, spec.cols)
    return gen_random(spec)


def build_laplacian(g: Graph) -> np.ndarray:
    """Dense combinatorial Laplacian: degree on the diagonal, -1 per edge.

    Symmetric, rows sum to zero, positive semi-definite; all entries are
    integer-valued (stored as float64, hence exact).
    """
    lap = np.zeros((g.n_nodes, g.n_nodes))
    for i, j in g.edges:
        lap[i, j] = -1.0
        lap[j, i] = -1.0
        lap[i, i] += 1.0
        lap[j, j] += 1.0
    return lap


def degrees(g: Graph) -> np.ndarray:
    ends = np.fromiter((x for e in g.edges for x in e), dtype=np.int64, count=2 * g.n_edges)
    return np.bincount(ends, minlength=g.n_nodes)


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability from node 0."""
    if g.n_nodes == 1:
        return True
    adj = g.adjacency_lists()
    seen = np.zeros(g.n_nodes, dtype=bool)
    seen[0] = True
    frontier = [0]
    count = 1
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    nxt.append(w)
        frontier = nxt
    return count == g.n_nodes


def write_edge_list(g: Graph, path) -> None:
    """Plain-text edge list: first line the node count, then one 'i j' per line."""
    with open(path, "w") as fh:
        fh.write(f"{g.n_nodes}\n")
        for i, j in g.edges:
            fh.write(f"{i} {j}\n")


def read_edge_list(path) -> Graph:
    """Parse the edge-list format; malformed lines and bad edges raise ValueError."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty edge-list file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}: first line must be the node count, got {lines[0]!r}") from None
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: expected 'i j', got {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if not i < j:
            raise ValueError(f"{path}: edges must satisfy i < j, got {ln!r}")
        edges.append((i, j))
    return Graph(n, tuple(edges))


def ensemble_specs(spec: GraphSpec, realizations: int, master_seed: int):
    """Yield per-realization specs with seeds mixed from (master_seed, index)."""
    if realizations < 1:
        raise ValueError(f"realizations must be >= 1, got {realizations}")
    for i in range(realizations):
        yield replace(spec, seed=derive_seed(master_seed, i))
