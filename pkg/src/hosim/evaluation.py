"""Jaccard F1 scoring of detected communities against ground truth.

Per query: every ground-truth community is matched to its best detection
(recall side), every detection to its best truth community (precision
side), and the two averages combine with a harmonic mean.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .graph import Graph, GraphFormatError


class CommunitySet:
    """A collection of node sets (ground truth or detections).

    Duplicate communities are removed on load; empty ones are dropped.
    """

    def __init__(self, communities: Iterable[Iterable[int]]):
        seen: set[frozenset] = set()
        self.communities: list[frozenset] = []
        for c in communities:
            fs = frozenset(c)
            if fs and fs not in seen:
                seen.add(fs)
                self.communities.append(fs)

    def __len__(self) -> int:
        return len(self.communities)

    def __iter__(self):
        return iter(self.communities)

    def containing(self, u: int) -> list[frozenset]:
        return [c for c in self.communities if u in c]

    def membership_count(self, u: int) -> int:
        return sum(1 for c in self.communities if u in c)

    def nodes(self) -> frozenset:
        out: set[int] = set()
        for c in self.communities:
            out |= c
        return frozenset(out)


def load_communities(path, g: Graph) -> CommunitySet:
    """One community per line, whitespace-separated node labels.

    Labels absent from the graph (degree-0 nodes never appear in an edge
    list) are skipped; the count is reported on the returned object.
    """
    comms: list[list[int]] = []
    skipped = 0
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc
    with fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            ids = []
            for tok in line.split():
                if g.has_label(tok):
                    ids.append(g.id_for(tok))
                else:
                    skipped += 1
            if ids:
                comms.append(ids)
    cs = CommunitySet(comms)
    cs.skipped_labels = skipped
    return cs


def jaccard(a: Iterable[int], b: Iterable[int]) -> float:
    sa, sb = set(a), set(b)
    if not sa and not sb:
        raise ValueError("both sets are empty")
    return len(sa & sb) / len(sa | sb)


@dataclass
class F1Record:
    query: int
    om: int
    n_detected: int
    recall_avg: float
    precision_avg: float
    f1: float
    runtime_ms: float = 0.0


def _unique_sets(communities) -> list[frozenset]:
    seen: set[frozenset] = set()
    out = []
    for c in communities:
        fs = frozenset(c)
        if fs and fs not in seen:
            seen.add(fs)
            out.append(fs)
    return out


def f1_for_query(truth: Sequence[frozenset],
                 detected: Sequence[frozenset]) -> tuple[float, float, float]:
    """(recall_avg, precision_avg, f1) for one query.

    Both collections are treated as sets of communities (duplicates are
    ignored).  An empty detection set scores 0 across the board.
    """
    truth = _unique_sets(truth)
    detected = _unique_sets(detected)
    if not truth:
        raise ValueError("query has no ground-truth community")
    if not detected:
        return 0.0, 0.0, 0.0
    recall_avg = sum(max(jaccard(c, d) for d in detected) for c in truth) \
        / len(truth)
    precision_avg = sum(max(jaccard(c, d) for c in truth) for d in detected) \
        / len(detected)
    if recall_avg + precision_avg == 0.0:
        return recall_avg, precision_avg, 0.0
    f1 = 2 * precision_avg * recall_avg / (precision_avg + recall_avg)
    return recall_avg, precision_avg, f1


@dataclass
class F1Report:
    records: list[F1Record] = field(default_factory=list)

    def bucket_means(self) -> dict[int, float]:
        buckets: dict[int, list[float]] = {}
        for rec in self.records:
            buckets.setdefault(rec.om, []).append(rec.f1)
        return {om: sum(v) / len(v) for om, v in sorted(buckets.items())}

    def mean_f1(self) -> float:
        if not self.records:
            return 0.0
        return sum(r.f1 for r in self.records) / len(self.records)

    def to_rows(self, g: Graph) -> list[list]:
        rows = [["query_label", "om", "n_detected", "recall_avg",
                 "precision_avg", "f1", "runtime_ms"]]
        for rec in sorted(self.records, key=lambda r: g.label(r.query)):
            rows.append([g.label(rec.query), rec.om, rec.n_detected,
                         f"{rec.recall_avg:.6f}", f"{rec.precision_avg:.6f}",
                         f"{rec.f1:.6f}", f"{rec.runtime_ms:.3f}"])
        return rows

    def write_csv(self, path, g: Graph) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            csv.writer(fh).writerows(self.to_rows(g))


def query_sampler(truth: CommunitySet, om: int, n: int,
                  rng_seed: int) -> list[int]:
    """n distinct nodes belonging to exactly ``om`` ground-truth communities.

    Seeded and reproducible; returns every candidate (in sorted order of
    the shuffled draw) when fewer than n exist.
    """
    counts: dict[int, int] = {}
    for c in truth:
        for u in c:
            counts[u] = counts.get(u, 0) + 1
    candidates = sorted(u for u, k in counts.items() if k == om)
    rng = random.Random(rng_seed)
    if len(candidates) <= n:
        return candidates
    return rng.sample(candidates, n)


def evaluate_batch(g: Graph, truth: CommunitySet, queries: Sequence[int],
                   detector: Callable[[int], Sequence[frozenset]],
                   workers: int = 1) -> F1Report:
    """Run ``detector`` on every query and score it against ``truth``.

    Queries absent from all ground-truth communities raise; buckets come
    from the per-query membership count. Workers > 1 parallelizes across
    queries (results are order-normalized).
    """
    for q in queries:
        if truth.membership_count(q) == 0:
            raise ValueError(
                f"query {g.label(q)} is in no ground-truth community")

    def run(q: int) -> F1Record:
        t0 = time.perf_counter()
        detected = detector(q)
        dt = 1000 * (time.perf_counter() - t0)
        truth_q = truth.containing(q)
        recall, precision, f1 = f1_for_query(truth_q, detected)
        return F1Record(query=q, om=len(truth_q), n_detected=len(detected),
                        recall_avg=recall, precision_avg=precision, f1=f1,
                        runtime_ms=dt)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run, queries))
    else:
        records = [run(q) for q in queries]
    records.sort(key=lambda r: g.label(r.query))
    return F1Report(records=records)
