"""FastAPI application: graphs live in process memory; every detection
against the same graph and parameter fingerprint shares one diffusion
cache, so repeat queries get warmer and cheaper."""

from __future__ import annotations

import random
import threading

from fastapi import FastAPI, HTTPException

from ..evaluation import evaluate_batch, load_communities, query_sampler
from ..generate import PlantedSpec, write_planted, generate_planted
from ..graph import (Graph, GraphFormatError, IsolatedNodeError,
                     UnknownNodeError, load_edge_list)
from ..hosi import (CacheFingerprintError, DiffusionCache, build_diffusion_view,
                    cache_load, cache_save)
from ..pipeline import HosimParams, hosim
from ..walks import arw_diffuse, lrw_diffuse, ppr_diffuse
from .schemas import (CacheInfo, CachePathRequest, DetectRequest,
                      DetectResponse, EvalRecordModel, EvalRequest,
                      EvalResponse, GenerateRequest, GenerateResponse,
                      GraphInfo, LoadGraphRequest, ParamsModel, StatsRequest,
                      StatsResponse, WalkEntry, WalkRequest, WalkResponse)


class GraphEntry:
    def __init__(self, graph_id: str, graph: Graph):
        self.graph_id = graph_id
        self.graph = graph
        self.caches: dict = {}
        self.lock = threading.Lock()

    def cache_for(self, params: HosimParams) -> DiffusionCache:
        fp = params.fingerprint()
        with self.lock:
            if fp not in self.caches:
                self.caches[fp] = DiffusionCache(fp)
            return self.caches[fp]

    def info(self) -> GraphInfo:
        return GraphInfo(graph_id=self.graph_id,
                         nodes=self.graph.node_count,
                         edges=self.graph.edge_count,
                         dropped_self_loops=self.graph.dropped_self_loops,
                         dropped_duplicates=self.graph.dropped_duplicates)


def _resolve(params: ParamsModel | None) -> HosimParams:
    try:
        return params.resolve() if params is not None else HosimParams()
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="hosim", version="0.1.0")
    registry: dict[str, GraphEntry] = {}
    registry_lock = threading.Lock()
    counter = {"n": 0}

    def entry_for(graph_id: str) -> GraphEntry:
        entry = registry.get(graph_id)
        if entry is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown graph {graph_id!r}")
        return entry

    def node_for(entry: GraphEntry, label: str) -> int:
        try:
            return entry.graph.id_for(label)
        except UnknownNodeError:
            raise HTTPException(status_code=404,
                                detail=f"unknown node label {label!r}")

    @app.get("/health")
    def health():
        return {"status": "ok", "graphs": len(registry)}

    @app.post("/graphs", response_model=GraphInfo)
    def load_graph(req: LoadGraphRequest):
        if (req.path is None) == (req.edges is None):
            raise HTTPException(status_code=422,
                                detail="provide exactly one of path, edges")
        try:
            if req.path is not None:
                graph = load_edge_list(req.path)
            else:
                graph = Graph.from_labeled_edges(req.edges)
        except GraphFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with registry_lock:
            gid = req.graph_id or f"g{counter['n']}"
            counter["n"] += 1
            if gid in registry:
                raise HTTPException(status_code=409,
                                    detail=f"graph {gid!r} already loaded")
            registry[gid] = GraphEntry(gid, graph)
        return registry[gid].info()

    @app.get("/graphs", response_model=list[GraphInfo])
    def list_graphs():
        return [entry.info() for entry in registry.values()]

    @app.get("/graphs/{graph_id}", response_model=GraphInfo)
    def get_graph(graph_id: str):
        return entry_for(graph_id).info()

    @app.delete("/graphs/{graph_id}")
    def drop_graph(graph_id: str):
        entry_for(graph_id)
        with registry_lock:
            registry.pop(graph_id, None)
        return {"dropped": graph_id}

    @app.post("/graphs/{graph_id}/detect", response_model=DetectResponse)
    def detect(graph_id: str, req: DetectRequest):
        entry = entry_for(graph_id)
        params = _resolve(req.params)
        v_q = node_for(entry, req.query)
        try:
            result = hosim(entry.graph, v_q, params, entry.cache_for(params))
        except IsolatedNodeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return DetectResponse(**result.to_record(entry.graph))

    @app.post("/graphs/{graph_id}/walk", response_model=WalkResponse)
    def walk(graph_id: str, req: WalkRequest):
        entry = entry_for(graph_id)
        if req.variant not in ("arw", "ppr", "lrw"):
            raise HTTPException(status_code=422,
                                detail=f"unknown variant {req.variant!r}")
        u = node_for(entry, req.node)
        g = entry.graph
        try:
            view = build_diffusion_view(g, u)
            if req.variant == "arw":
                vec = arw_diffuse(view, u, req.k)
            elif req.variant == "ppr":
                kwargs = {} if req.teleport is None \
                    else {"teleport": req.teleport}
                vec = ppr_diffuse(view, u, req.k, **kwargs)
            else:
                vec = lrw_diffuse(view, u, req.k)
        except IsolatedNodeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        entries = [WalkEntry(node=g.label(v), probability=p)
                   for v, p in sorted(vec.items(),
                                      key=lambda t: (-t[1], g.label(t[0])))]
        return WalkResponse(node=req.node, variant=req.variant, k=req.k,
                            entries=entries)

    @app.post("/graphs/{graph_id}/eval", response_model=EvalResponse)
    def evaluate(graph_id: str, req: EvalRequest):
        entry = entry_for(graph_id)
        params = _resolve(req.params)
        g = entry.graph
        try:
            truth = load_communities(req.communities_path, g)
        except GraphFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        queries: list[int] = []
        for om in req.om:
            queries.extend(query_sampler(truth, om, req.n,
                                         rng_seed=req.seed + om))
        if not queries:
            raise HTTPException(status_code=422,
                                detail="no queries matched the om buckets")
        cache = entry.cache_for(params)

        def detector(q: int):
            return hosim(g, q, params, cache).communities

        report = evaluate_batch(g, truth, queries, detector,
                                workers=req.workers)
        if req.out_csv:
            report.write_csv(req.out_csv, g)
        return EvalResponse(
            records=[EvalRecordModel(query=g.label(r.query), om=r.om,
                                     n_detected=r.n_detected,
                                     recall_avg=r.recall_avg,
                                     precision_avg=r.precision_avg,
                                     f1=r.f1, runtime_ms=r.runtime_ms)
                     for r in report.records],
            bucket_means=report.bucket_means(),
            mean_f1=report.mean_f1())

    @app.post("/graphs/{graph_id}/stats", response_model=StatsResponse)
    def stats(graph_id: str, req: StatsRequest):
        entry = entry_for(graph_id)
        params = _resolve(req.params)
        g = entry.graph
        cache = entry.cache_for(params)
        if req.queries:
            queries = [node_for(entry, lab) for lab in req.queries]
        else:
            rng = random.Random(req.seed)
            eligible = [u for u in g.nodes() if g.degree(u) > 0]
            if not eligible:
                raise HTTPException(status_code=422, detail="graph is empty")
            queries = rng.sample(eligible, min(req.n, len(eligible)))
        diags = []
        for q in queries:
            try:
                diags.append(hosim(g, q, params, cache).diagnostics)
            except IsolatedNodeError as exc:
                raise HTTPException(status_code=422, detail=str(exc))

        def avg(key, sub=None):
            vals = [d[key] if sub is None else d[key][sub] for d in diags]
            return sum(vals) / len(vals)

        return StatsResponse(n_queries=len(queries),
                             n_diff_avg=avg("n_diff"),
                             n_nodes_avg=avg("n_nodes_avg"),
                             n_sub_avg=avg("n_sub"),
                             n_union_avg=avg("n_union"),
                             runtime_ms_avg=avg("runtime_ms", "total"))

    @app.post("/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest):
        try:
            spec = PlantedSpec.chain(req.sizes, p_in=req.p_in, p_out=req.p_out,
                                     overlap=req.overlap, seed=req.seed,
                                     core_skew=req.core_skew,
                                     overlap_degree=req.overlap_degree)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if (req.out_edges is None) != (req.out_communities is None):
            raise HTTPException(
                status_code=422,
                detail="out_edges and out_communities go together")
        if req.out_edges:
            nodes, edges = write_planted(spec, req.out_edges,
                                         req.out_communities)
        else:
            g, _ = generate_planted(spec)
            nodes, edges = g.node_count, g.edge_count
        return GenerateResponse(nodes=nodes, edges=edges,
                                communities=len(spec.block_sizes),
                                out_edges=req.out_edges,
                                out_communities=req.out_communities)

    @app.post("/graphs/{graph_id}/cache/export", response_model=CacheInfo)
    def cache_export(graph_id: str, req: CachePathRequest):
        entry = entry_for(graph_id)
        params = _resolve(req.params)
        cache = entry.cache_for(params)
        cache_save(cache, req.path, entry.graph)
        fp = cache.fingerprint
        return CacheInfo(entries=len(cache), kernel=fp.kernel, k=fp.k, l=fp.l)

    @app.post("/graphs/{graph_id}/cache/import", response_model=CacheInfo)
    def cache_import(graph_id: str, req: CachePathRequest):
        entry = entry_for(graph_id)
        params = _resolve(req.params)
        try:
            cache = cache_load(req.path, entry.graph,
                               expect=params.fingerprint())
        except CacheFingerprintError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except (OSError, UnknownNodeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with entry.lock:
            entry.caches[cache.fingerprint] = cache
        fp = cache.fingerprint
        return CacheInfo(entries=len(cache), kernel=fp.kernel, k=fp.k, l=fp.l)

    return app


app = create_app()
