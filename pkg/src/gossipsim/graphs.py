"""Regular graphs: construction, dynamic sequences, conductance and spectra.

A :class:`GraphSnapshot` is one simple d-regular graph on vertices
``0..n-1``. Adjacency is stored as an ``(n, d)`` integer array with sorted
rows, which keeps every per-round protocol operation a single vectorized
gather. Complete graphs are represented implicitly (no adjacency array) so
that very large instances fit in memory; both representations answer the
same queries.

Dynamic graphs are small frozen specs that produce ``snapshot(t)``
deterministically: per-round randomness is derived as
``rng_for(spec_seed, t)`` (a splitmix64 chain, see :mod:`gossipsim.seeds`),
so a sequence is reproducible across runs and across trials.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import (
    DegreeError,
    EmptyOrFullSet,
    IoError,
    ParityError,
    RangeError,
    RetryExhausted,
    SizeGuardExceeded,
)
from .seeds import rng_for

__all__ = [
    "GraphSnapshot",
    "SpectralReport",
    "MixingCheck",
    "StaticGraph",
    "CyclicGraphs",
    "ResampledRegular",
    "MatchingSequence",
    "DynamicGraphSpec",
    "as_vertex_mask",
    "complete_graph",
    "cycle_graph",
    "matching_graph",
    "generate_random_regular",
    "conductance",
    "edges_between",
    "ordered_pairs_between",
    "phi_k",
    "spectral_lambda",
    "mixing_lemma_check",
    "conductance_lower_bound",
    "is_connected",
    "save_graph",
    "load_graph",
    "parse_graph_spec",
]

SPECTRAL_SIZE_GUARD = 8192
PHI_K_SUBSET_GUARD = 10_000_000


@dataclass(eq=False)
class GraphSnapshot:
    """One simple d-regular graph at one round.

    ``adj`` is an ``(n, d)`` array whose row ``v`` lists the neighbors of
    ``v`` in ascending order, or ``None`` for the implicit complete graph
    (every other vertex is a neighbor). Construction validates regularity,
    symmetry and simplicity.
    """

    n: int
    d: int
    adj: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 2:
            raise RangeError(f"need at least 2 vertices, got {self.n}")
        if self.d < 1:
            raise DegreeError(f"degree must be >= 1, got {self.d}")
        if self.d >= self.n:
            raise DegreeError(f"degree {self.d} must be < n = {self.n}")
        if (self.n * self.d) % 2 != 0:
            raise ParityError(f"n*d must be even, got n={self.n}, d={self.d}")
        if self.adj is not None:
            self.adj = np.ascontiguousarray(self.adj, dtype=np.int64)
            self._validate_adjacency()

    @property
    def is_complete(self) -> bool:
        return self.adj is None

    def _validate_adjacency(self):
        adj = self.adj
        if adj.shape != (self.n, self.d):
            raise DegreeError(f"adjacency shape {adj.shape} != ({self.n}, {self.d})")
        if adj.min() < 0 or adj.max() >= self.n:
            raise RangeError("neighbor index out of range")
        ids = np.arange(self.n)
        if np.any(adj == ids[:, None]):
            raise RangeError("self-loop in adjacency")
        if self.d > 1 and not np.all(adj[:, 1:] > adj[:, :-1]):
            raise RangeError("neighbor rows must be strictly ascending (sorted, no duplicates)")
        rows = np.repeat(ids, self.d)
        forward = np.sort(rows * self.n + adj.ravel())
        backward = np.sort(adj.ravel() * self.n + rows)
        if not np.array_equal(forward, backward):
            raise RangeError("adjacency is not symmetric")

    # -- queries ----------------------------------------------------------

    def neighbors(self, v: int) -> np.ndarray:
        if self.adj is not None:
            return self.adj[v]
        others = np.arange(self.n - 1, dtype=np.int64)
        others[v:] += 1
        return others

    def sample_neighbors(self, vertices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One uniformly random neighbor per vertex in ``vertices``."""
        if len(vertices) == 0:
            return np.empty(0, dtype=np.int64)
        if self.adj is not None:
            return self.adj[vertices, rng.integers(0, self.d, size=len(vertices))]
        draw = rng.integers(0, self.n - 1, size=len(vertices))
        return draw + (draw >= vertices)

    def marked_degrees(self, mark: np.ndarray) -> np.ndarray:
        """Number of marked neighbors of every vertex; ``mark`` is a bool mask."""
        if self.adj is not None:
            return mark[self.adj].sum(axis=1)
        return int(mark.sum()) - mark.astype(np.int64)

    def edges(self):
        """Iterate undirected edges as (u, v) with u < v."""
        if self.adj is not None:
            for u in range(self.n):
                for v in self.adj[u]:
                    if u < v:
                        yield u, int(v)
        else:
            yield from itertools.combinations(range(self.n), 2)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        if self.adj is not None:
            rows = np.repeat(np.arange(self.n), self.d)
            a[rows, self.adj.ravel()] = 1.0
        else:
            a[:] = 1.0
            np.fill_diagonal(a, 0.0)
        return a


@dataclass(frozen=True)
class SpectralReport:
    """Nontrivial spectral radius of the normalized adjacency matrix.

    ``lam`` is the largest magnitude among all eigenvalues except one copy
    of the trivial top eigenvalue 1. ``eigenvalues`` is the full spectrum in
    ascending order.
    """

    lam: float
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class MixingCheck:
    """Result of checking the expander mixing inequalities on one (S, T) pair.

    Slacks are (bound - deviation); nonnegative slack means the inequality
    holds. Pair counts are ordered pairs, which equal the plain edge count
    whenever S and T are disjoint (the only way the bounds get used here).
    """

    weak_ok: bool
    strong_ok: bool
    corollary_ok: bool
    weak_slack: float
    strong_slack: float
    corollary_lower_slack: float
    corollary_upper_slack: float
    pairs_st: int
    lam: float


def as_vertex_mask(n: int, s) -> np.ndarray:
    """Normalize a vertex set (bool mask or iterable of ints) to a bool mask."""
    if isinstance(s, np.ndarray) and s.dtype == bool:
        if s.shape != (n,):
            raise RangeError(f"mask length {s.shape} != ({n},)")
        return s
    mask = np.zeros(n, dtype=bool)
    idx = np.asarray(list(s), dtype=np.int64)
    if len(idx) and (idx.min() < 0 or idx.max() >= n):
        raise RangeError("vertex id out of range")
    mask[idx] = True
    return mask


# -- constructors ----------------------------------------------------------


def _snapshot_from_neighbor_lists(n: int, d: int, lists: list[list[int]]) -> GraphSnapshot:
    adj = np.empty((n, d), dtype=np.int64)
    for v, nbrs in enumerate(lists):
        if len(nbrs) != d:
            raise DegreeError(f"vertex {v} has degree {len(nbrs)}, expected {d}")
        adj[v] = sorted(nbrs)
    return GraphSnapshot(n=n, d=d, adj=adj)


def from_edge_list(n: int, edges) -> GraphSnapshot:
    """Build a snapshot from undirected edges, validating d-regularity."""
    lists: list[list[int]] = [[] for _ in range(n)]
    seen = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise RangeError(f"self-loop ({u},{v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise RangeError(f"duplicate edge {key}")
        seen.add(key)
        lists[u].append(v)
        lists[v].append(u)
    degrees = {len(x) for x in lists}
    if len(degrees) != 1:
        raise DegreeError(f"graph is not regular, degrees {sorted(degrees)}")
    return _snapshot_from_neighbor_lists(n, degrees.pop(), lists)


def complete_graph(n: int) -> GraphSnapshot:
    """K_n, stored implicitly so that very large n stays cheap."""
    return GraphSnapshot(n=n, d=n - 1, adj=None)


def cycle_graph(n: int) -> GraphSnapshot:
    if n < 3:
        raise RangeError(f"cycle needs n >= 3, got {n}")
    ids = np.arange(n, dtype=np.int64)
    adj = np.sort(np.stack([(ids - 1) % n, (ids + 1) % n], axis=1), axis=1)
    return GraphSnapshot(n=n, d=2, adj=adj)


def matching_graph(pairs) -> GraphSnapshot:
    """Perfect matching (d = 1) from a list of disjoint vertex pairs."""
    pairs = [(int(u), int(v)) for u, v in pairs]
    n = 2 * len(pairs)
    adj = np.full((n, 1), -1, dtype=np.int64)
    for u, v in pairs:
        adj[u, 0] = v
        adj[v, 0] = u
    return GraphSnapshot(n=n, d=1, adj=adj)


def generate_random_regular(
    n: int, d: int, seed: int, max_retries: int = 10_000
) -> GraphSnapshot:
    """Random simple d-regular graph from the stub-pairing model.

    Stubs are paired uniformly at random; pairs that would create a
    self-loop or multi-edge are thrown back and re-paired, and the whole
    graph is rejected and redrawn when no valid pairing of the leftover
    stubs exists. Deterministic given ``seed``; raises
    :class:`RetryExhausted` after ``max_retries`` whole-graph rejections.
    """
    if (n * d) % 2 != 0:
        raise ParityError(f"n*d must be even, got n={n}, d={d}")
    if d >= n:
        raise DegreeError(f"degree {d} must be < n = {n}")
    if d < 1 or n < 2:
        raise DegreeError(f"need d >= 1 and n >= 2, got d={d}, n={n}")

    rng = rng_for(seed)

    def suitable(edges: set, leftovers: dict) -> bool:
        if not leftovers:
            return True
        nodes = list(leftovers)
        for u, v in itertools.combinations(nodes, 2):
            if (min(u, v), max(u, v)) not in edges:
                return True
        return False

    def try_pairing():
        edges: set[tuple[int, int]] = set()
        stubs = np.repeat(np.arange(n, dtype=np.int64), d)
        while len(stubs):
            leftovers: dict[int, int] = {}
            rng.shuffle(stubs)
            it = iter(stubs.tolist())
            for u, v in zip(it, it):
                if u > v:
                    u, v = v, u
                if u != v and (u, v) not in edges:
                    edges.add((u, v))
                else:
                    leftovers[u] = leftovers.get(u, 0) + 1
                    leftovers[v] = leftovers.get(v, 0) + 1
            if not suitable(edges, leftovers):
                return None
            stubs = np.array(
                [node for node, count in leftovers.items() for _ in range(count)],
                dtype=np.int64,
            )
        return edges

    for _ in range(max_retries):
        edges = try_pairing()
        if edges is not None:
            return from_edge_list(n, edges)
    raise RetryExhausted(f"no simple {d}-regular graph found in {max_retries} attempts")


# -- cuts and conductance ---------------------------------------------------


def ordered_pairs_between(g: GraphSnapshot, a, b) -> int:
    """Number of ordered adjacent pairs (x, y) with x in A and y in B."""
    a = as_vertex_mask(g.n, a)
    b = as_vertex_mask(g.n, b)
    return int(g.marked_degrees(b)[a].sum())


def edges_between(g: GraphSnapshot, a, b) -> int:
    """Number of edges {u, w} with u in A and w in B (each edge counted once)."""
    a = as_vertex_mask(g.n, a)
    b = as_vertex_mask(g.n, b)
    both = a & b
    inside = ordered_pairs_between(g, both, both) // 2
    return ordered_pairs_between(g, a, b) - inside


def conductance(g: GraphSnapshot, s) -> float:
    """Cut edges of S over the smaller of vol(S) and vol(V \\ S)."""
    s = as_vertex_mask(g.n, s)
    size = int(s.sum())
    if size == 0 or size == g.n:
        raise EmptyOrFullSet(f"set size {size} of {g.n}")
    cut = ordered_pairs_between(g, s, ~s)
    return cut / (g.d * min(size, g.n - size))


def phi_k(g: GraphSnapshot, k: int) -> float:
    """Exact min conductance over all nonempty vertex sets of size <= k.

    Exhaustive, guarded by the number of subsets it would enumerate
    (practically n up to ~22).
    """
    if k < 1:
        raise RangeError(f"k must be >= 1, got {k}")
    k = min(k, g.n - 1)
    total = 0
    for size in range(1, k + 1):
        total += math.comb(g.n, size)
        if total > PHI_K_SUBSET_GUARD:
            raise SizeGuardExceeded(
                f"{total}+ subsets exceeds the {PHI_K_SUBSET_GUARD} enumeration guard"
            )

    nbr_bits = [0] * g.n
    for v in range(g.n):
        for w in g.neighbors(v):
            nbr_bits[v] |= 1 << int(w)

    best = 1.0
    for size in range(1, k + 1):
        vol = g.d * min(size, g.n - size)
        for combo in itertools.combinations(range(g.n), size):
            s_bits = 0
            for v in combo:
                s_bits |= 1 << v
            cut = sum((nbr_bits[v] & ~s_bits).bit_count() for v in combo)
            best = min(best, cut / vol)
    return best


def conductance_lower_bound(lam: float, set_size: int, n: int) -> float:
    """Certified floor (1 - lambda) * (1 - |S|/n), valid for |S| <= n/2."""
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lambda must be in [0, 1], got {lam}")
    if not 1 <= set_size <= n / 2:
        raise RangeError(f"set size must be in [1, n/2], got {set_size} of {n}")
    return (1.0 - lam) * (1.0 - set_size / n)


# -- spectra ---------------------------------------------------------------


def spectral_lambda(g: GraphSnapshot, tol: float = 1e-9) -> SpectralReport:
    """Eigenvalues of the normalized adjacency A/d via a dense symmetric solve."""
    if g.n > SPECTRAL_SIZE_GUARD:
        raise SizeGuardExceeded(f"n = {g.n} exceeds dense eigensolver guard {SPECTRAL_SIZE_GUARD}")
    m = g.adjacency_matrix()
    m /= g.d
    eigenvalues = np.linalg.eigvalsh(m)
    top = eigenvalues[-1]
    if abs(top - 1.0) > max(tol, 1e-8):
        raise RangeError(f"top normalized eigenvalue {top} is not 1; graph invalid?")
    lam = float(np.max(np.abs(eigenvalues[:-1]))) if g.n > 1 else 0.0
    lam = min(lam, 1.0) if lam <= 1.0 + tol else lam
    if lam > 1.0:
        raise RangeError(f"nontrivial eigenvalue magnitude {lam} > 1")
    return SpectralReport(lam=lam, eigenvalues=eigenvalues)


def mixing_lemma_check(g: GraphSnapshot, s, t, slack_tol: float = 1e-9) -> MixingCheck:
    """Check the weak/strong mixing inequalities and the cut corollary.

    Weak: |e(S,T) - d|S||T|/n| <= lambda * d * sqrt(|S||T|).
    Strong: |e(S,T) - d|S||T|/n| <= lambda * (d/n) * sqrt(|S||Sc||T||Tc|).
    Corollary: (1 +- lambda) * (d/n) * |S||Sc| brackets e(S, V \\ S).
    """
    s = as_vertex_mask(g.n, s)
    t = as_vertex_mask(g.n, t)
    if not s.any() or not t.any():
        raise EmptyOrFullSet("S and T must be nonempty")
    lam = spectral_lambda(g).lam
    n, d = g.n, g.d
    ns, nt = int(s.sum()), int(t.sum())

    pairs = ordered_pairs_between(g, s, t)
    deviation = abs(pairs - d * ns * nt / n)
    weak_bound = lam * d * math.sqrt(ns * nt)
    strong_bound = lam * (d / n) * math.sqrt(ns * (n - ns) * nt * (n - nt))

    cut = ordered_pairs_between(g, s, ~s)
    expected_cut = (d / n) * ns * (n - ns)
    cor_lower = cut - (1.0 - lam) * expected_cut
    cor_upper = (1.0 + lam) * expected_cut - cut

    return MixingCheck(
        weak_ok=deviation <= weak_bound + slack_tol,
        strong_ok=deviation <= strong_bound + slack_tol,
        corollary_ok=cor_lower >= -slack_tol and cor_upper >= -slack_tol,
        weak_slack=weak_bound - deviation,
        strong_slack=strong_bound - deviation,
        corollary_lower_slack=cor_lower,
        corollary_upper_slack=cor_upper,
        pairs_st=pairs,
        lam=lam,
    )


def is_connected(g: GraphSnapshot) -> bool:
    if g.is_complete:
        return True
    visited = np.zeros(g.n, dtype=bool)
    frontier = np.array([0], dtype=np.int64)
    visited[0] = True
    while len(frontier):
        nxt = np.unique(g.adj[frontier].ravel())
        nxt = nxt[~visited[nxt]]
        visited[nxt] = True
        frontier = nxt
    return bool(visited.all())


# -- file format -------------------------------------------------------------


def save_graph(g: GraphSnapshot, path) -> None:
    """Write the graph as a header line ``n d`` plus one ``u v`` line per edge."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{g.n} {g.d}\n")
            for u, v in g.edges():
                fh.write(f"{u} {v}\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def load_graph(path) -> GraphSnapshot:
    """Read the ``n d`` / ``u v`` format and validate all snapshot invariants."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise RangeError(f"{path}: empty graph file")
    try:
        n, d = (int(x) for x in lines[0].split())
        edges = []
        for ln in lines[1:]:
            u, v = (int(x) for x in ln.split())
            if not u < v:
                raise RangeError(f"{path}: edge {u} {v} must satisfy u < v")
            edges.append((u, v))
    except ValueError as exc:
        raise RangeError(f"{path}: malformed line: {exc}") from exc
    g = from_edge_list(n, edges)
    if g.d != d:
        raise DegreeError(f"{path}: header degree {d} but edges give degree {g.d}")
    return g


# -- dynamic graph sequences -------------------------------------------------


@dataclass(frozen=True, eq=False)
class StaticGraph:
    """The same snapshot every round."""

    graph: GraphSnapshot

    @property
    def n(self) -> int:
        return self.graph.n

    def snapshot(self, t: int) -> GraphSnapshot:
        return self.graph


@dataclass(frozen=True, eq=False)
class CyclicGraphs:
    """Cycle through a fixed list of snapshots, one per round."""

    graphs: tuple[GraphSnapshot, ...]

    def __post_init__(self):
        if not self.graphs:
            raise RangeError("need at least one snapshot")
        if len({g.n for g in self.graphs}) != 1:
            raise RangeError("all snapshots must share the same vertex count")

    @property
    def n(self) -> int:
        return self.graphs[0].n

    def snapshot(self, t: int) -> GraphSnapshot:
        return self.graphs[t % len(self.graphs)]


@dataclass(frozen=True)
class ResampledRegular:
    """A fresh random d-regular graph each round, seeded per round."""

    n: int
    d: int
    seed: int

    def snapshot(self, t: int) -> GraphSnapshot:
        return _resampled_snapshot(self, t)


@dataclass(frozen=True)
class MatchingSequence:
    """A fresh uniformly random perfect matching (d = 1) each round."""

    n: int
    seed: int

    def __post_init__(self):
        if self.n % 2 != 0:
            raise ParityError(f"matching sequence needs even n, got {self.n}")

    def snapshot(self, t: int) -> GraphSnapshot:
        return _matching_snapshot(self, t)


@lru_cache(maxsize=128)
def _resampled_snapshot(spec: ResampledRegular, t: int) -> GraphSnapshot:
    from .seeds import mix_seed

    return generate_random_regular(spec.n, spec.d, seed=mix_seed(spec.seed, t))


@lru_cache(maxsize=128)
def _matching_snapshot(spec: MatchingSequence, t: int) -> GraphSnapshot:
    from .seeds import mix_seed

    perm = rng_for(mix_seed(spec.seed, t)).permutation(spec.n)
    return matching_graph(perm.reshape(-1, 2))


DynamicGraphSpec = StaticGraph | CyclicGraphs | ResampledRegular | MatchingSequence


def parse_graph_spec(text: str) -> DynamicGraphSpec:
    """Parse the CLI graph spec.

    Supported forms: ``complete:N``, ``cycle:N``, ``regular:N,D[,seed=S]``
    (one static random regular graph), ``dynamic-regular:N,D[,seed=S]``
    (resampled each round), ``matching:N[,seed=S]`` and ``file:PATH``.
    """
    head, sep, rest = text.strip().partition(":")
    if not sep:
        raise RangeError(f"bad graph spec {text!r}: missing ':'")
    head = head.lower()
    if head == "file":
        return StaticGraph(load_graph(rest))

    parts = [p.strip() for p in rest.split(",") if p.strip()]
    seed = 0
    plain: list[int] = []
    try:
        for p in parts:
            if p.startswith("seed="):
                seed = int(p[5:])
            else:
                plain.append(int(p))
        if head == "complete" and len(plain) == 1:
            return StaticGraph(complete_graph(plain[0]))
        if head == "cycle" and len(plain) == 1:
            return StaticGraph(cycle_graph(plain[0]))
        if head == "regular" and len(plain) == 2:
            return StaticGraph(generate_random_regular(plain[0], plain[1], seed=seed))
        if head == "dynamic-regular" and len(plain) == 2:
            return ResampledRegular(n=plain[0], d=plain[1], seed=seed)
        if head == "matching" and len(plain) == 1:
            return MatchingSequence(n=plain[0], seed=seed)
    except ValueError as exc:
        raise RangeError(f"bad graph spec {text!r}: {exc}") from exc
    raise RangeError(f"bad graph spec {text!r}")
