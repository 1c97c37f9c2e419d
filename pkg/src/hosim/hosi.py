"""Higher-order structural importance (HoSI) scores.

Scores are read off short diffusions that run inside a small sampled view
around each seed node: the seed's top neighbors by clustering coefficient,
then those neighbors' top neighbors, capped at 101 nodes total.  Every
diffusion result is memoized in a :class:`DiffusionCache` shared across
queries, and the cache can be persisted to a text file for reuse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import (Graph, IsolatedNodeError, SubgraphView,
                    clustering_coefficient, ego_network)
from .walks import (DEFAULT_TELEPORT, ProbVector, arw_diffuse, lrw_diffuse,
                    ppr_diffuse)

VIEW_NODE_LIMIT = 101

CACHE_MAGIC = "hosim-cache"
CACHE_VERSION = 1


class CacheFingerprintError(ValueError):
    """Cache parameters do not match the parameters of the current run."""


@dataclass(frozen=True)
class CacheFingerprint:
    """Parameters a stored diffusion vector depends on."""
    kernel: str = "arw"
    l: int = 2
    k: int = 4
    neighbor_cap: int = 10
    teleport: float = DEFAULT_TELEPORT

    def __post_init__(self):
        if self.kernel not in ("arw", "ppr", "lrw"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        # teleport only affects ppr; normalize it away for the other kernels
        # so equal configurations compare equal.
        if self.kernel != "ppr" and self.teleport != DEFAULT_TELEPORT:
            object.__setattr__(self, "teleport", DEFAULT_TELEPORT)


class DiffusionCache:
    """Global memo of diffusion vectors keyed by seed node.

    Entries are write-once: the kernels are deterministic, so concurrent
    duplicate computations produce identical vectors and the first write
    wins.  ``view_sizes`` tracks how many nodes each diffusion ran over
    (for the scalability counters).
    """

    def __init__(self, fingerprint: CacheFingerprint | None = None):
        self.fingerprint = fingerprint or CacheFingerprint()
        self._store: dict[int, ProbVector] = {}
        self.view_sizes: dict[int, int] = {}
        self.view_size_total = 0
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._store)

    def __contains__(self, u: int) -> bool:
        return u in self._store

    def get(self, u: int) -> ProbVector | None:
        return self._store.get(u)

    def put(self, u: int, vector: ProbVector,
            view_size: int | None = None) -> None:
        if u in self._store:  # write-once
            return
        self._store[u] = vector
        if view_size is not None:
            self.view_sizes[u] = view_size
            self.view_size_total += view_size

    def items(self):
        return self._store.items()


def sample_neighbors(g: Graph, u: int, cap: int = 10) -> list[int]:
    """Up to ``cap`` neighbors of u with the highest clustering coefficient.

    Ties break by ascending node id.  The center node never counts toward
    the cap.
    """
    ns = g.neighbors(u)
    if len(ns) <= cap:
        return list(ns)
    ranked = sorted(ns, key=lambda v: (-clustering_coefficient(g, v), v))
    return ranked[:cap]


def build_diffusion_view(g: Graph, u: int, l: int = 2, cap: int = 10,
                         max_nodes: int = VIEW_NODE_LIMIT) -> SubgraphView:
    """View the diffusion from ``u`` runs in: ``l`` levels of neighbor
    sampling starting at u, truncated at ``max_nodes`` nodes.

    Insertion order is deterministic (center, then each level in rank
    order), so the truncation is too.
    """
    if g.degree(u) == 0:
        raise IsolatedNodeError(f"node {u} has no neighbors")
    members: list[int] = [u]
    member_set = {u}
    frontier = [u]
    for _ in range(l):
        nxt: list[int] = []
        for w in frontier:
            for v in sample_neighbors(g, w, cap):
                if v not in member_set:
                    member_set.add(v)
                    members.append(v)
                    nxt.append(v)
                    if len(members) >= max_nodes:
                        return SubgraphView(g, members)
        frontier = nxt
        if not frontier:
            break
    return SubgraphView(g, members)


def diffuse(g: Graph, u: int, cache: DiffusionCache) -> ProbVector:
    """Memoized k-step diffusion from u inside its sampled view.

    The kernel, step count, and sampling caps come from the cache
    fingerprint, so one cache never mixes configurations.
    """
    cached = cache.get(u)
    if cached is not None:
        cache.hits += 1
        return cached
    fp = cache.fingerprint
    view = build_diffusion_view(g, u, l=fp.l, cap=fp.neighbor_cap)
    if fp.kernel == "arw":
        vec = arw_diffuse(view, u, fp.k)
    elif fp.kernel == "ppr":
        vec = ppr_diffuse(view, u, fp.k, teleport=fp.teleport)
    else:
        vec = lrw_diffuse(view, u, fp.k)
    cache.misses += 1
    cache.put(u, vec, view.node_count)
    return vec


def hs_node_to_node(g: Graph, u: int, v: int, cache: DiffusionCache) -> float:
    """Diffusion mass node u places on node v (0 when v is out of reach)."""
    return diffuse(g, u, cache).get(v, 0.0)


def hs_subgraph_to_node(g: Graph, node_set: Iterable[int], u: int,
                        cache: DiffusionCache) -> float:
    """Mass from u's diffusion that lands inside ``node_set``."""
    vec = diffuse(g, u, cache)
    members = node_set if isinstance(node_set, (set, frozenset)) else set(node_set)
    if len(members) < len(vec):
        return sum(vec.get(v, 0.0) for v in members)
    return sum(m for v, m in vec.items() if v in members)


def hs_node(g: Graph, v: int, cache: DiffusionCache, cap: int = 100,
            sources=None) -> float:
    """Importance of v: total mass diffused onto v from the (up to ``cap``)
    highest-clustering-coefficient nodes of its l-distance ego network.

    ``sources``, when given, restricts the candidate diffusion seeds to
    that node set (the detection pipeline passes the sampled subgraph so
    only already-diffused nodes contribute).
    """
    g._check(v)
    if g.degree(v) == 0:
        return 0.0
    candidates = ego_network(g, v, cache.fingerprint.l).members
    if sources is not None:
        candidates = candidates & frozenset(sources)
    picked = [u for u in candidates if u != v]
    if len(picked) > cap:
        picked.sort(key=lambda u: (-clustering_coefficient(g, u), u))
        picked = picked[:cap]
    total = 0.0
    for u in sorted(picked):
        if g.degree(u) == 0:
            continue
        total += diffuse(g, u, cache).get(v, 0.0)
    return total


def cache_save(cache: DiffusionCache, path, g: Graph) -> None:
    """Write the cache as TSV: a versioned header, then one record per node
    (label, entry count, label/probability pairs at 17 significant digits)."""
    fp = cache.fingerprint
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{CACHE_MAGIC}\t{CACHE_VERSION}\t{fp.kernel}\t{fp.l}\t"
                 f"{fp.k}\t{fp.neighbor_cap}\t{fp.teleport:.17g}\n")
        for u in sorted(cache._store):
            vec = cache._store[u]
            parts = [g.label(u), str(len(vec))]
            for v in sorted(vec):
                parts.append(g.label(v))
                parts.append(f"{vec[v]:.17g}")
            fh.write("\t".join(parts) + "\n")


def cache_load(path, g: Graph,
               expect: CacheFingerprint | None = None) -> DiffusionCache:
    """Load a cache written by :func:`cache_save`.

    Raises :class:`CacheFingerprintError` when ``expect`` is given and the
    stored parameters differ.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if len(header) != 7 or header[0] != CACHE_MAGIC:
            raise CacheFingerprintError(f"{path}: not a diffusion cache file")
        if int(header[1]) != CACHE_VERSION:
            raise CacheFingerprintError(
                f"{path}: unsupported cache version {header[1]}")
        fp = CacheFingerprint(kernel=header[2], l=int(header[3]),
                              k=int(header[4]), neighbor_cap=int(header[5]),
                              teleport=float(header[6]))
        if expect is not None and fp != expect:
            raise CacheFingerprintError(
                f"{path}: cache fingerprint {fp} does not match current "
                f"parameters {expect}")
        cache = DiffusionCache(fp)
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                raise CacheFingerprintError(
                    f"{path}: line {lineno}: truncated record")
            u = g.id_for(parts[0])
            count = int(parts[1])
            if len(parts) != 2 + 2 * count:
                raise CacheFingerprintError(
                    f"{path}: line {lineno}: expected {count} entries")
            vec: ProbVector = {}
            for i in range(count):
                vec[g.id_for(parts[2 + 2 * i])] = float(parts[3 + 2 * i])
            cache.put(u, vec)
    return cache
