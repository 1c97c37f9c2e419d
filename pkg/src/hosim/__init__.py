"""Multiple local community detection for a single query node, driven by
higher-order structural importance scores."""

from .graph import (Graph, GraphFormatError, IsolatedNodeError,
                    PathNotFoundError, SubgraphView, UnknownNodeError,
                    bfs_expand, clustering_coefficient, connected_components,
                    ego_network, load_edge_list, shortest_path)
from .hosi import (CacheFingerprint, CacheFingerprintError, DiffusionCache,
                   build_diffusion_view, cache_load, cache_save, diffuse,
                   hs_node, hs_node_to_node, hs_subgraph_to_node,
                   sample_neighbors)
from .pipeline import (DetectionResult, HosimParams, SampledRegion,
                       add_operation, detect_com, hosim,
                       identify_core_members, remove_operation,
                       sample_subgraph)
from .evaluation import (CommunitySet, F1Record, F1Report, evaluate_batch,
                         f1_for_query, jaccard, load_communities,
                         query_sampler)
from .generate import PlantedSpec, generate_planted, write_planted
from .walks import (DEFAULT_TELEPORT, PushState, approximate_pr, arw_diffuse,
                    conductance, lrw_diffuse, ppr_diffuse, prn_sweep)

__version__ = "0.1.0"
