"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..pipeline import HosimParams


class ParamsModel(BaseModel):
    """Optional overrides of the pipeline parameters."""
    l: Optional[int] = None
    k: Optional[int] = None
    n1: Optional[int] = None
    n2: Optional[int] = None
    n_iter: Optional[int] = None
    alpha: Optional[float] = None
    epsilon: Optional[float] = None
    delta_add: Optional[float] = None
    delta_remove: Optional[float] = None
    neighbor_cap: Optional[int] = None
    ego_cap: Optional[int] = None
    max_core_sets: Optional[int] = None
    kernel: Optional[str] = None
    teleport: Optional[float] = None

    def resolve(self) -> HosimParams:
        overrides = {k: v for k, v in self.model_dump().items()
                     if v is not None}
        return HosimParams(**overrides)


class LoadGraphRequest(BaseModel):
    path: Optional[str] = None
    edges: Optional[list[tuple[str, str]]] = None
    graph_id: Optional[str] = None


class GraphInfo(BaseModel):
    graph_id: str
    nodes: int
    edges: int
    dropped_self_loops: int = 0
    dropped_duplicates: int = 0


class DetectRequest(BaseModel):
    query: str
    params: Optional[ParamsModel] = None


class DetectResponse(BaseModel):
    query: str
    communities: list[list[str]]
    core_sets: list[list[str]]
    diagnostics: dict


class WalkRequest(BaseModel):
    node: str
    variant: str = "arw"
    k: int = 4
    teleport: Optional[float] = None


class WalkEntry(BaseModel):
    node: str
    probability: float


class WalkResponse(BaseModel):
    node: str
    variant: str
    k: int
    entries: list[WalkEntry]


class EvalRequest(BaseModel):
    communities_path: str
    om: list[int] = Field(default_factory=lambda: [1, 2])
    n: int = 20
    seed: int = 0
    workers: int = 1
    params: Optional[ParamsModel] = None
    out_csv: Optional[str] = None


class EvalRecordModel(BaseModel):
    query: str
    om: int
    n_detected: int
    recall_avg: float
    precision_avg: float
    f1: float
    runtime_ms: float


class EvalResponse(BaseModel):
    records: list[EvalRecordModel]
    bucket_means: dict[int, float]
    mean_f1: float


class StatsRequest(BaseModel):
    n: int = 10
    seed: int = 0
    queries: Optional[list[str]] = None
    params: Optional[ParamsModel] = None


class StatsResponse(BaseModel):
    n_queries: int
    n_diff_avg: float
    n_nodes_avg: float
    n_sub_avg: float
    n_union_avg: float
    runtime_ms_avg: float


class GenerateRequest(BaseModel):
    sizes: list[int]
    p_in: float
    p_out: float
    overlap: int = 0
    seed: int = 0
    core_skew: float = 0.0
    overlap_degree: Optional[int] = None
    out_edges: Optional[str] = None
    out_communities: Optional[str] = None


class GenerateResponse(BaseModel):
    nodes: int
    edges: int
    communities: int
    out_edges: Optional[str] = None
    out_communities: Optional[str] = None


class CachePathRequest(BaseModel):
    path: str
    params: Optional[ParamsModel] = None


class CacheInfo(BaseModel):
    entries: int
    kernel: str
    k: int
    l: int
