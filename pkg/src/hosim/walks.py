"""Diffusion kernels: active random walk, PPR/lazy-walk comparators,
the approximate-PageRank push, and the conductance sweep.

A probability vector is a sparse ``dict[int, float]`` over view nodes.
All kernels are pure functions; iteration goes over sorted node ids so
results are bit-reproducible run to run.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .graph import GraphLike, IsolatedNodeError

ProbVector = dict  # dict[int, float]

# Teleport mass per step for the PPR comparator.  Kept small so that over a
# handful of steps the walk stays close to a plain random walk and the seed
# retains most of the mass.
DEFAULT_TELEPORT = 0.01


def _step(view: GraphLike, p: ProbVector) -> ProbVector:
    """One standard random-walk step p <- p * T with T = D^-1 A.

    Dangling nodes (view-degree 0) hold their mass unchanged so no mass is
    ever lost.
    """
    q: ProbVector = {}
    for u in sorted(p):
        mass = p[u]
        if mass == 0.0:
            continue
        ns = view.neighbors(u)
        if not ns:
            q[u] = q.get(u, 0.0) + mass
            continue
        share = mass / len(ns)
        for v in ns:
            q[v] = q.get(v, 0.0) + share
    return q


def _check_seed(view: GraphLike, seed: int) -> None:
    view._check(seed)
    if view.degree(seed) == 0:
        raise IsolatedNodeError(f"seed node {seed} is isolated in the view")


def arw_diffuse(view: GraphLike, seed: int, k: int) -> ProbVector:
    """Active random walk: after each standard step the mass sitting on the
    seed is pushed out to the seed's neighbors and the seed is zeroed.

    The returned vector has exactly zero mass on the seed for k >= 1.
    """
    _check_seed(view, seed)
    p: ProbVector = {seed: 1.0}
    ns = view.neighbors(seed)
    for _ in range(k):
        p = _step(view, p)
        mass = p.pop(seed, 0.0)
        if mass:
            share = mass / len(ns)
            for v in ns:
                p[v] = p.get(v, 0.0) + share
    return p


def ppr_diffuse(view: GraphLike, seed: int, k: int,
                teleport: float = DEFAULT_TELEPORT) -> ProbVector:
    """k iterations of p <- teleport * chi_seed + (1 - teleport) * p * T."""
    _check_seed(view, seed)
    if not 0.0 <= teleport <= 1.0:
        raise ValueError("teleport must be in [0, 1]")
    p: ProbVector = {seed: 1.0}
    for _ in range(k):
        q = _step(view, p)
        p = {u: (1.0 - teleport) * m for u, m in q.items()}
        p[seed] = p.get(seed, 0.0) + teleport
    return p


def lrw_diffuse(view: GraphLike, seed: int, k: int) -> ProbVector:
    """k iterations of the lazy walk p <- p * (I + T) / 2."""
    _check_seed(view, seed)
    p: ProbVector = {seed: 1.0}
    for _ in range(k):
        q = _step(view, p)
        nxt = {u: 0.5 * m for u, m in p.items()}
        for u, m in q.items():
            nxt[u] = nxt.get(u, 0.0) + 0.5 * m
        p = nxt
    return p


@dataclass
class PushState:
    """Result of the approximate-PageRank push loop."""
    p: ProbVector
    r: ProbVector
    pushes: int = 0


def approximate_pr(view: GraphLike, s: ProbVector, alpha: float,
                   epsilon: float) -> PushState:
    """Approximate PageRank via repeated lazy push.

    While some node u has r[u] >= epsilon * d(u):
        p[u] += alpha * r[u]
        r[v] += (1 - alpha) * r[u] / (2 d(u))   for each neighbor v
        r[u]  = (1 - alpha) * r[u] / 2

    The work queue is FIFO (seeded in ascending id order) for determinism.
    Dangling nodes never qualify; their mass stays in r.
    """
    if view.node_count == 0:
        raise ValueError("view is empty")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    for u in s:
        view._check(u)

    p: ProbVector = {}
    r: ProbVector = {u: m for u, m in s.items() if m != 0.0}

    def qualifies(u: int) -> bool:
        d = view.degree(u)
        return d > 0 and r.get(u, 0.0) >= epsilon * d

    queue = deque(u for u in sorted(r) if qualifies(u))
    queued = set(queue)
    pushes = 0
    while queue:
        u = queue.popleft()
        queued.discard(u)
        if not qualifies(u):
            continue
        ru = r[u]
        ns = view.neighbors(u)
        p[u] = p.get(u, 0.0) + alpha * ru
        spread = (1.0 - alpha) * ru / (2 * len(ns))
        for v in ns:
            r[v] = r.get(v, 0.0) + spread
        r[u] = (1.0 - alpha) * ru / 2.0
        pushes += 1
        for w in (u, *ns):
            if w not in queued and qualifies(w):
                queue.append(w)
                queued.add(w)
    return PushState(p=p, r=r, pushes=pushes)


def conductance(view: GraphLike, s: frozenset | set) -> float:
    """Cut edges of s divided by the smaller side's volume (view-internal).

    Returns +inf when the smaller side has zero volume.
    """
    members = set(s)
    if not members:
        raise ValueError("node set is empty")
    if len(members) >= view.node_count:
        raise ValueError("node set must be a proper subset of the view")
    total = view.total_volume()
    cut = 0
    vol = 0
    for u in members:
        ns = view.neighbors(u)
        vol += len(ns)
        for v in ns:
            if v not in members:
                cut += 1
    small = min(vol, total - vol)
    if small == 0:
        return math.inf if cut > 0 else 0.0
    return cut / small


def sweep_order(view: GraphLike, p: ProbVector) -> list[int]:
    """Support of p sorted by probability-per-degree descending.

    Dangling support nodes sort first; ties break by ascending id.
    """
    def key(u):
        d = view.degree(u)
        ratio = math.inf if d == 0 else p[u] / d
        return (-ratio, u)

    return sorted((u for u, m in p.items() if m > 0.0), key=key)


def prn_sweep(view: GraphLike, p: ProbVector, must_contain: int) -> frozenset:
    """Minimum-conductance prefix of the probability-per-degree ordering.

    If the global minimum prefix excludes ``must_contain``, the best prefix
    that includes it is returned instead.  Ties break toward the shorter
    prefix.
    """
    view._check(must_contain)
    order = sweep_order(view, p)
    if not order:
        raise ValueError("probability vector has empty support")
    if must_contain not in set(order):
        order.append(must_contain)
    must_pos = order.index(must_contain)

    total = view.total_volume()
    members: set[int] = set()
    vol = 0
    cut = 0
    best = (math.inf, -1)
    best_with = (math.inf, -1)
    for j, u in enumerate(order):
        internal = sum(1 for v in view.neighbors(u) if v in members)
        members.add(u)
        d = view.degree(u)
        vol += d
        cut += d - 2 * internal
        small = min(vol, total - vol)
        phi = math.inf if small == 0 else cut / small
        if phi < best[0]:
            best = (phi, j)
        if j >= must_pos and phi < best_with[0]:
            best_with = (phi, j)
    chosen = best if best[1] >= must_pos else best_with
    if chosen[1] < 0:
        chosen = (math.inf, len(order) - 1)
    return frozenset(order[:chosen[1] + 1])
