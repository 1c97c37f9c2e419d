"""Immutable undirected graph plus the traversal and subgraph primitives.

Node ids are dense integers ``0..node_count-1``.  Input files may use
arbitrary string labels; they are relabelled on load and the original
labels are kept so every output can be translated back.  Node sets are
plain ``frozenset[int]`` throughout; wherever ordering matters the API
returns sorted sequences.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised when an edge-list or community file cannot be parsed."""


class UnknownNodeError(KeyError):
    """Raised when a node id or label is not part of the graph."""


class IsolatedNodeError(ValueError):
    """Raised when an operation requires the node to have at least one edge."""


class PathNotFoundError(Exception):
    """Raised when no path exists between the requested endpoints."""


NodeSet = frozenset  # alias for readability in signatures


class Graph:
    """Simple undirected graph: no self-loops, no parallel edges.

    Instances are immutable after construction and safe to read from many
    threads at once.
    """

    __slots__ = ("_adj", "_labels", "_label_ids", "_edge_count", "_cc",
                 "dropped_self_loops", "dropped_duplicates")

    def __init__(self, adjacency: Sequence[Sequence[int]],
                 labels: Sequence[str] | None = None,
                 dropped_self_loops: int = 0,
                 dropped_duplicates: int = 0):
        self._adj = [tuple(sorted(set(ns))) for ns in adjacency]
        n = len(self._adj)
        for u, ns in enumerate(self._adj):
            for v in ns:
                if not 0 <= v < n:
                    raise ValueError(f"neighbor id {v} out of range")
                if v == u:
                    raise ValueError(f"self-loop on node {u}")
        self._labels = [str(x) for x in labels] if labels is not None \
            else [str(i) for i in range(n)]
        if len(self._labels) != n:
            raise ValueError("label count does not match node count")
        self._label_ids = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._label_ids) != n:
            raise ValueError("duplicate node labels")
        self._edge_count = sum(len(ns) for ns in self._adj) // 2
        self._cc: dict[int, float] = {}
        self.dropped_self_loops = dropped_self_loops
        self.dropped_duplicates = dropped_duplicates

    @classmethod
    def from_labeled_edges(cls, edges: Iterable[tuple[str, str]]) -> "Graph":
        """Build a graph from label pairs; labels intern in first-appearance
        order, self-loops and duplicates drop silently."""
        labels: list[str] = []
        ids: dict[str, int] = {}

        def intern(tok) -> int:
            tok = str(tok)
            if tok not in ids:
                ids[tok] = len(labels)
                labels.append(tok)
            return ids[tok]

        seen: set[tuple[int, int]] = set()
        loops = dupes = 0
        for a, b in edges:
            u, v = intern(a), intern(b)
            if u == v:
                loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                dupes += 1
            else:
                seen.add(key)
        adj: list[list[int]] = [[] for _ in range(len(labels))]
        for u, v in seen:
            adj[u].append(v)
            adj[v].append(u)
        return cls(adj, labels=labels, dropped_self_loops=loops,
                   dropped_duplicates=dupes)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]],
                   node_count: int | None = None) -> "Graph":
        """Build a graph from integer id pairs; dedups and drops self-loops."""
        seen: set[tuple[int, int]] = set()
        loops = dupes = 0
        hi = -1
        for a, b in edges:
            hi = max(hi, a, b)
            if a == b:
                loops += 1
                continue
            key = (a, b) if a < b else (b, a)
            if key in seen:
                dupes += 1
                continue
            seen.add(key)
        n = max(node_count or 0, hi + 1)
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in seen:
            adj[a].append(b)
            adj[b].append(a)
        return cls(adj, dropped_self_loops=loops, dropped_duplicates=dupes)

    # -- basic accessors --------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def nodes(self) -> range:
        return range(len(self._adj))

    def __contains__(self, u: int) -> bool:
        return 0 <= u < len(self._adj)

    def neighbors(self, u: int) -> tuple[int, ...]:
        self._check(u)
        return self._adj[u]

    def degree(self, u: int) -> int:
        self._check(u)
        return len(self._adj[u])

    def adjacent(self, u: int, v: int) -> bool:
        ns = self._adj[u]
        i = bisect_left(ns, v)
        return i < len(ns) and ns[i] == v

    def total_volume(self) -> int:
        return 2 * self._edge_count

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, ns in enumerate(self._adj):
            for v in ns:
                if u < v:
                    yield u, v

    def label(self, u: int) -> str:
        self._check(u)
        return self._labels[u]

    def id_for(self, label: str) -> int:
        try:
            return self._label_ids[label]
        except KeyError:
            raise UnknownNodeError(f"unknown node label {label!r}") from None

    def has_label(self, label: str) -> bool:
        return label in self._label_ids

    def _check(self, u: int) -> None:
        if not 0 <= u < len(self._adj):
            raise UnknownNodeError(f"unknown node id {u}")


class SubgraphView:
    """Read-only view of the subgraph induced by ``members`` on ``parent``.

    All operations see only edges with both endpoints in ``members``;
    degrees (and therefore volumes and conductances) are view-internal.
    """

    __slots__ = ("parent", "members", "_adj")

    def __init__(self, parent: Graph, members: Iterable[int]):
        self.parent = parent
        self.members = frozenset(members)
        for u in self.members:
            parent._check(u)
        self._adj = {
            u: tuple(v for v in parent.neighbors(u) if v in self.members)
            for u in sorted(self.members)
        }

    @property
    def node_count(self) -> int:
        return len(self.members)

    @property
    def edge_count(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def nodes(self) -> tuple[int, ...]:
        return tuple(self._adj)

    def __contains__(self, u: int) -> bool:
        return u in self.members

    def neighbors(self, u: int) -> tuple[int, ...]:
        self._check(u)
        return self._adj[u]

    def degree(self, u: int) -> int:
        self._check(u)
        return len(self._adj[u])

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def total_volume(self) -> int:
        return 2 * self.edge_count

    def label(self, u: int) -> str:
        return self.parent.label(u)

    def _check(self, u: int) -> None:
        if u not in self.members:
            raise UnknownNodeError(f"node id {u} not in view")


GraphLike = Graph | SubgraphView


def load_edge_list(path) -> Graph:
    """Parse a whitespace-separated edge list (``#`` lines are comments).

    Self-loops and duplicate edges are dropped (counts are kept on the
    returned graph).  Labels are relabelled to dense ids in order of first
    appearance.
    """
    labels: list[str] = []
    label_ids: dict[str, int] = {}

    def intern(tok: str) -> int:
        i = label_ids.get(tok)
        if i is None:
            i = len(labels)
            label_ids[tok] = i
            labels.append(tok)
        return i

    edges: set[tuple[int, int]] = set()
    loops = dupes = 0
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise GraphFormatError(
                    f"{path}: line {lineno}: expected two labels, got {len(toks)}")
            a, b = intern(toks[0]), intern(toks[1])
            if a == b:
                loops += 1
                continue
            key = (a, b) if a < b else (b, a)
            if key in edges:
                dupes += 1
                continue
            edges.add(key)
    adj: list[list[int]] = [[] for _ in range(len(labels))]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return Graph(adj, labels=labels,
                 dropped_self_loops=loops, dropped_duplicates=dupes)


def clustering_coefficient(g: GraphLike, u: int) -> float:
    """Triangle density among ``u``'s neighbors; 0 when degree < 2."""
    if isinstance(g, Graph) and u in g._cc:
        return g._cc[u]
    ns = g.neighbors(u)
    d = len(ns)
    if d < 2:
        value = 0.0
    else:
        tri = 0
        for i in range(d):
            for j in range(i + 1, d):
                if g.adjacent(ns[i], ns[j]):
                    tri += 1
        value = 2.0 * tri / (d * (d - 1))
    if isinstance(g, Graph):
        g._cc[u] = value
    return value


def ego_network(g: Graph, u: int, l: int) -> SubgraphView:
    """View over all nodes at shortest-path distance <= l from ``u``."""
    g._check(u)
    if l < 0:
        raise ValueError("hop count must be >= 0")
    seen = {u}
    frontier = [u]
    for _ in range(l):
        nxt = []
        for w in frontier:
            for v in g.neighbors(w):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return SubgraphView(g, seen)


def bfs_expand(g: Graph, seed: Iterable[int], rounds: int) -> frozenset:
    """Seed plus everything reachable within ``rounds`` hops of any seed node."""
    seen = set(seed)
    if not seen:
        raise ValueError("seed set must be nonempty")
    for u in seen:
        g._check(u)
    frontier = list(seen)
    for _ in range(rounds):
        nxt = []
        for w in frontier:
            for v in g.neighbors(w):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def connected_components(view: SubgraphView) -> list[frozenset]:
    """Maximal connected sets of the view, ordered by smallest member id."""
    unvisited = set(view.members)
    comps = []
    for start in sorted(view.members):
        if start not in unvisited:
            continue
        comp = {start}
        unvisited.discard(start)
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for v in view.neighbors(w):
                if v in unvisited:
                    unvisited.discard(v)
                    comp.add(v)
                    queue.append(v)
        comps.append(frozenset(comp))
    return comps


def shortest_path(view: GraphLike, src: int, dst: int) -> list[int]:
    """One BFS shortest path from ``src`` to ``dst`` inclusive of endpoints.

    Ties are broken by expanding neighbors in ascending id order, so the
    returned path is deterministic.
    """
    view._check(src)
    view._check(dst)
    if src == dst:
        return [src]
    parent = {src: src}
    queue = deque([src])
    while queue:
        w = queue.popleft()
        for v in view.neighbors(w):
            if v not in parent:
                parent[v] = w
                if v == dst:
                    path = [dst]
                    while path[-1] != src:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(v)
    raise PathNotFoundError(f"no path from {src} to {dst} within the view")
