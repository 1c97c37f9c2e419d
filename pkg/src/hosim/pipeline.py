"""The detection pipeline: subgraph sampling, core-member identification,
and per-core-set community detection with addition/removal refinement.

The whole pipeline is a deterministic pure function of (graph, query,
params); the shared diffusion cache only memoizes deterministic results.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from .graph import (Graph, IsolatedNodeError, PathNotFoundError, SubgraphView,
                    bfs_expand, connected_components, shortest_path)
from .hosi import (CacheFingerprint, CacheFingerprintError, DiffusionCache,
                   hs_node, hs_subgraph_to_node)
from .walks import DEFAULT_TELEPORT, approximate_pr, prn_sweep


@dataclass(frozen=True)
class HosimParams:
    """Every tunable of the pipeline, with the stock defaults.

    ``delta_add``/``delta_remove`` default to the synthetic-benchmark
    setting (0.3/0.2); real networks want dataset-specific values.
    """
    l: int = 2
    k: int = 4
    n1: int = 100
    n2: int = 100
    n_iter: int = 10
    alpha: float = 0.99
    epsilon: float = 0.001
    delta_add: float = 0.3
    delta_remove: float = 0.2
    neighbor_cap: int = 10
    ego_cap: int = 100
    max_core_sets: int = 10
    seed_weight_base: float = 0.2
    seed_weight_core: float = 0.1
    seed_weight_query: float = 0.7
    kernel: str = "arw"
    teleport: float = DEFAULT_TELEPORT

    def __post_init__(self):
        if self.l < 0 or self.k < 0:
            raise ValueError("l and k must be >= 0")
        if self.n1 < 1 or self.n2 < 0 or self.n_iter < 1:
            raise ValueError("n1 >= 1, n2 >= 0, n_iter >= 1 required")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be > 0")
        if not 0.0 <= self.delta_remove <= self.delta_add <= 1.0:
            raise ValueError("need 0 <= delta_remove <= delta_add <= 1")
        if self.neighbor_cap < 1 or self.ego_cap < 1 or self.max_core_sets < 1:
            raise ValueError("caps must be >= 1")
        weights = (self.seed_weight_base + self.seed_weight_core
                   + self.seed_weight_query)
        if abs(weights - 1.0) > 1e-9:
            raise ValueError("seed weights must sum to 1")
        if self.kernel not in ("arw", "ppr", "lrw"):
            raise ValueError(f"unknown kernel {self.kernel!r}")

    def fingerprint(self) -> CacheFingerprint:
        return CacheFingerprint(kernel=self.kernel, l=self.l, k=self.k,
                                neighbor_cap=self.neighbor_cap,
                                teleport=self.teleport)

    def make_cache(self) -> DiffusionCache:
        return DiffusionCache(self.fingerprint())

    def with_overrides(self, **kwargs) -> "HosimParams":
        return replace(self, **kwargs)


@dataclass
class SampledRegion:
    """Output of the sampling stage."""
    g_sub: SubgraphView
    shell: frozenset
    g_union: SubgraphView


@dataclass
class DetectionResult:
    query: int
    communities: list
    core_sets: list
    diagnostics: dict = field(default_factory=dict)

    def to_record(self, g: Graph) -> dict:
        """JSON-ready record with original node labels."""
        return {
            "query": g.label(self.query),
            "communities": [[g.label(u) for u in sorted(c)]
                            for c in self.communities],
            "core_sets": [[g.label(u) for u in sorted(c)]
                          for c in self.core_sets],
            "diagnostics": self.diagnostics,
        }


def _check_cache(params: HosimParams, cache: DiffusionCache) -> None:
    if cache.fingerprint != params.fingerprint():
        raise CacheFingerprintError(
            f"cache fingerprint {cache.fingerprint} does not match "
            f"params {params.fingerprint()}")


def sample_subgraph(g: Graph, v_q: int, params: HosimParams,
                    cache: DiffusionCache) -> SampledRegion:
    """Grow and trim a working subgraph around the query node.

    1. BFS from the query until the ball holds at least n1 nodes.
    2. Run the push diffusion from the query inside that ball and keep the
       top-n1 nodes by probability (the query is always kept).
    3. Expand n2/n_iter times by the frontier nodes with the highest
       subgraph-to-node scores, n_iter per round.
    4. The shell is the two-hop BFS fringe; g_union glues it on.
    """
    _check_cache(params, cache)
    g._check(v_q)
    if g.degree(v_q) == 0:
        raise IsolatedNodeError(f"query node {v_q} is isolated")

    ball = {v_q}
    frontier = [v_q]
    while len(ball) < params.n1 and frontier:
        nxt = []
        for w in frontier:
            for v in g.neighbors(w):
                if v not in ball:
                    ball.add(v)
                    nxt.append(v)
        frontier = nxt

    # params.alpha is the walk-continuation probability; the push moves the
    # complementary fraction per step
    ball_view = SubgraphView(g, ball)
    push = approximate_pr(ball_view, {v_q: 1.0}, 1.0 - params.alpha,
                          params.epsilon)
    ranked = sorted(ball, key=lambda u: (-push.p.get(u, 0.0), u))
    members = set(ranked[:params.n1])
    if v_q not in members:
        members.discard(ranked[params.n1 - 1])
        members.add(v_q)

    rounds = -(-params.n2 // params.n_iter)  # ceil division
    for _ in range(rounds):
        frontier_nodes = set()
        for u in members:
            for v in g.neighbors(u):
                if v not in members:
                    frontier_nodes.add(v)
        if not frontier_nodes:
            break
        scored = sorted(
            ((hs_subgraph_to_node(g, members, u, cache), u)
             for u in frontier_nodes),
            key=lambda t: (-t[0], t[1]))
        for _, u in scored[:params.n_iter]:
            members.add(u)

    g_sub = SubgraphView(g, members)
    shell = bfs_expand(g, members, 2) - members
    g_union = SubgraphView(g, members | shell)
    return SampledRegion(g_sub=g_sub, shell=frozenset(shell), g_union=g_union)


def identify_core_members(region: SampledRegion, v_q: int,
                          params: HosimParams,
                          cache: DiffusionCache) -> list[frozenset]:
    """Split the nodes scoring above the query into connected core sets.

    Components are taken on the subgraph induced by the core members only.
    If more than ``max_core_sets`` components come out, the ones with the
    largest summed scores are kept.  An empty core set falls back to
    ``{v_q}`` so detection always has at least one seed set.
    """
    _check_cache(params, cache)
    g = region.g_sub.parent
    members = region.g_sub.members
    scores = {u: hs_node(g, u, cache, cap=params.ego_cap, sources=members)
              for u in region.g_sub.nodes()}
    threshold = scores[v_q]
    core = {u for u, s in scores.items() if s > threshold}
    if not core:
        return [frozenset({v_q})]
    comps = connected_components(SubgraphView(g, core))
    if len(comps) > params.max_core_sets:
        comps.sort(key=lambda c: (-sum(scores[u] for u in c), min(c)))
        comps = comps[:params.max_core_sets]
        comps.sort(key=min)
    return comps


def _seed_vector(v_q: int, core_node: int, seeds: frozenset,
                 params: HosimParams) -> dict:
    base = params.seed_weight_base / len(seeds)
    s = {u: base for u in seeds}
    s[v_q] += params.seed_weight_query
    s[core_node] += params.seed_weight_core
    return s


def detect_com(region: SampledRegion, members: frozenset, v_q: int,
               params: HosimParams, cache: DiffusionCache) -> frozenset:
    """Grow one community from a core-member set.

    Seeds are the nodes on a shortest query-to-core path plus the core
    node's neighbors inside g_sub; the query and core node get extra start
    mass.  The seeded push plus conductance sweep gives the raw community,
    then the addition and removal refinements run in turn.
    """
    _check_cache(params, cache)
    if not members:
        raise ValueError("core member set is empty")
    g = region.g_sub.parent
    sub_members = region.g_sub.members
    ranked = sorted(
        members,
        key=lambda u: (-hs_node(g, u, cache, params.ego_cap,
                                sources=sub_members), u))
    core_node = ranked[0]
    try:
        path = shortest_path(region.g_sub, v_q, core_node)
        seeds = frozenset(path) | set(region.g_sub.neighbors(core_node))
        s = _seed_vector(v_q, core_node, seeds, params)
    except PathNotFoundError:
        # Core set unreachable inside g_sub: seed from the query and the
        # members, with all the extra mass pooled on the query.
        seeds = frozenset({v_q}) | members
        base = params.seed_weight_base / len(seeds)
        s = {u: base for u in seeds}
        s[v_q] += params.seed_weight_core + params.seed_weight_query
    push = approximate_pr(region.g_union, s, 1.0 - params.alpha,
                          params.epsilon)
    com = prn_sweep(region.g_union, push.p, must_contain=v_q)
    com = add_operation(com, region, params.delta_add, cache)
    com = remove_operation(g, com, v_q, params.delta_remove, cache)
    return com


def add_operation(com: frozenset, region: SampledRegion, delta_add: float,
                  cache: DiffusionCache) -> frozenset:
    """Absorb external adjacency nodes whose score to the community exceeds
    ``delta_add``; repeats until a full scan adds nothing."""
    g = region.g_union.parent
    current = set(com)
    while True:
        frontier = sorted(
            v for u in current for v in region.g_union.neighbors(u)
            if v not in current)
        added = False
        for u in frontier:
            if u in current:
                continue
            if hs_subgraph_to_node(g, current, u, cache) > delta_add:
                current.add(u)
                added = True
        if not added:
            return frozenset(current)


def remove_operation(g: Graph, com: frozenset, v_q: int, delta_remove: float,
                     cache: DiffusionCache) -> frozenset:
    """Drop internal nodes whose score to the rest of the community falls
    below ``delta_remove``; the query node is never removed."""
    current = set(com)
    while True:
        removed = False
        for u in sorted(current):
            if u == v_q or len(current) <= 1:
                continue
            if g.degree(u) == 0:
                continue
            rest = current - {u}
            if hs_subgraph_to_node(g, rest, u, cache) < delta_remove:
                current.discard(u)
                removed = True
        if not removed:
            return frozenset(current)


def hosim(g: Graph, v_q: int, params: HosimParams | None = None,
          cache: DiffusionCache | None = None) -> DetectionResult:
    """Detect every local community of a single query node."""
    params = params or HosimParams()
    if cache is None:
        cache = params.make_cache()
    _check_cache(params, cache)
    g._check(v_q)
    if g.degree(v_q) == 0:
        raise IsolatedNodeError(f"query node {v_q} is isolated")

    hits0, misses0 = cache.hits, cache.misses
    sizes0 = cache.view_size_total
    t0 = time.perf_counter()
    region = sample_subgraph(g, v_q, params, cache)
    t1 = time.perf_counter()
    core_sets = identify_core_members(region, v_q, params, cache)
    t2 = time.perf_counter()
    communities: list[frozenset] = []
    for members in core_sets:
        com = detect_com(region, members, v_q, params, cache)
        if com not in communities:
            communities.append(com)
    t3 = time.perf_counter()

    n_diff = cache.misses - misses0
    new_view_nodes = cache.view_size_total - sizes0
    diagnostics = {
        "n_sub": region.g_sub.node_count,
        "n_shell": len(region.shell),
        "n_union": region.g_union.node_count,
        "n_core_sets": len(core_sets),
        "n_communities": len(communities),
        "n_diff": n_diff,
        "cache_hits": cache.hits - hits0,
        "n_nodes_avg": (new_view_nodes / n_diff) if n_diff else 0.0,
        "runtime_ms": {
            "sample": round(1000 * (t1 - t0), 3),
            "core": round(1000 * (t2 - t1), 3),
            "detect": round(1000 * (t3 - t2), 3),
            "total": round(1000 * (t3 - t0), 3),
        },
    }
    return DetectionResult(query=v_q, communities=communities,
                           core_sets=core_sets, diagnostics=diagnostics)
