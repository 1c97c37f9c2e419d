"""Command-line entry points.

Thin wrappers over the library: each subcommand parses flags, calls the
same functions the HTTP service uses, and formats the output.  Exit codes:
0 success, 1 I/O or parse error, 2 unknown entity, 3 degenerate input
(isolated query node).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .evaluation import evaluate_batch, load_communities, query_sampler
from .generate import PlantedSpec, write_planted
from .graph import (GraphFormatError, IsolatedNodeError, UnknownNodeError,
                    load_edge_list)
from .hosi import (CacheFingerprintError, build_diffusion_view, cache_load,
                   cache_save)
from .pipeline import HosimParams, hosim
from .walks import arw_diffuse, lrw_diffuse, ppr_diffuse

EXIT_OK = 0
EXIT_IO = 1
EXIT_UNKNOWN = 2
EXIT_DEGENERATE = 3


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta-add", type=float, default=None)
    p.add_argument("--delta-remove", type=float, default=None)
    p.add_argument("--kernel", choices=("arw", "ppr", "lrw"), default=None)
    p.add_argument("--teleport", type=float, default=None)
    p.add_argument("--k", type=int, default=None, dest="k_steps")


def _params_from(args) -> HosimParams:
    overrides = {}
    for flag, name in (("delta_add", "delta_add"),
                       ("delta_remove", "delta_remove"),
                       ("kernel", "kernel"), ("teleport", "teleport"),
                       ("k_steps", "k")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[name] = value
    return HosimParams(**overrides)


def _cache_path(args) -> str | None:
    # the environment variable wins over the flag
    return os.environ.get("HOSIM_CACHE") or getattr(args, "cache", None)


def _open_cache(args, g, params):
    path = _cache_path(args)
    if path and os.path.exists(path):
        return cache_load(path, g, expect=params.fingerprint()), path
    return params.make_cache(), path


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_detect(args) -> int:
    g = load_edge_list(args.graph)
    params = _params_from(args)
    v_q = g.id_for(args.query)
    cache, cache_path = _open_cache(args, g, params)
    result = hosim(g, v_q, params, cache)
    if cache_path:
        cache_save(cache, cache_path, g)
    _emit(json.dumps(result.to_record(g)) + "\n", args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = load_edge_list(args.graph)
    if not args.communities:
        print("eval requires --communities", file=sys.stderr)
        return EXIT_IO
    truth = load_communities(args.communities, g)
    params = _params_from(args)
    cache, cache_path = _open_cache(args, g, params)
    oms = [int(x) for x in args.om.split(",") if x]
    queries = []
    for om in oms:
        queries.extend(query_sampler(truth, om, args.n, rng_seed=args.seed + om))
    if not queries:
        print("no queries matched the requested om buckets", file=sys.stderr)
        return EXIT_DEGENERATE

    def detector(q):
        return hosim(g, q, params, cache).communities

    report = evaluate_batch(g, truth, queries, detector, workers=args.workers)
    if args.out:
        report.write_csv(args.out, g)
    else:
        for row in report.to_rows(g):
            print(",".join(str(x) for x in row))
    print("om\tn\tmean_f1")
    buckets = report.bucket_means()
    per_bucket_n = {}
    for rec in report.records:
        per_bucket_n[rec.om] = per_bucket_n.get(rec.om, 0) + 1
    for om in sorted(buckets):
        print(f"{om}\t{per_bucket_n[om]}\t{buckets[om]:.4f}")
    if cache_path:
        cache_save(cache, cache_path, g)
    return EXIT_OK


def cmd_gen(args) -> int:
    sizes = []
    for tok in args.sizes.split(","):
        tok = tok.strip()
        if "x" in tok:
            size, reps = tok.split("x")
            sizes.extend([int(size)] * int(reps))
        elif tok:
            sizes.append(int(tok))
    spec = PlantedSpec.chain(sizes, p_in=args.p_in, p_out=args.p_out,
                             overlap=args.overlap, seed=args.seed,
                             core_skew=args.core_skew,
                             overlap_degree=args.overlap_degree)
    nodes, edges = write_planted(spec, args.out_edges, args.out_communities)
    print(f"wrote {nodes} nodes, {edges} edges, "
          f"{len(sizes)} communities")
    return EXIT_OK


def cmd_walk(args) -> int:
    g = load_edge_list(args.graph)
    u = g.id_for(args.node)
    k = args.k_steps if args.k_steps is not None else 4
    view = build_diffusion_view(g, u)
    if args.variant == "arw":
        vec = arw_diffuse(view, u, k)
    elif args.variant == "ppr":
        kwargs = {} if args.teleport is None else {"teleport": args.teleport}
        vec = ppr_diffuse(view, u, k, **kwargs)
    else:
        vec = lrw_diffuse(view, u, k)
    lines = [f"{g.label(v)}\t{p:.12g}"
             for v, p in sorted(vec.items(),
                                key=lambda t: (-t[1], g.label(t[0])))]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    g = load_edge_list(args.graph)
    params = _params_from(args)
    cache, cache_path = _open_cache(args, g, params)
    if args.queries_file:
        with open(args.queries_file, "r", encoding="utf-8") as fh:
            labels = [line.strip() for line in fh if line.strip()]
        queries = [g.id_for(lab) for lab in labels]
    else:
        rng = random.Random(args.seed)
        eligible = [u for u in g.nodes() if g.degree(u) > 0]
        queries = rng.sample(eligible, min(args.n, len(eligible)))
    if not queries:
        print("no eligible query nodes", file=sys.stderr)
        return EXIT_DEGENERATE
    diags = [hosim(g, q, params, cache).diagnostics for q in queries]

    def avg(key, sub=None):
        vals = [d[key] if sub is None else d[key][sub] for d in diags]
        return sum(vals) / len(vals)

    print(f"n_queries\t{len(queries)}")
    print(f"n_diff\t{avg('n_diff'):.2f}")
    print(f"n_nodes\t{avg('n_nodes_avg'):.2f}")
    print(f"n_sub\t{avg('n_sub'):.2f}")
    print(f"n_union\t{avg('n_union'):.2f}")
    print(f"runtime_ms\t{avg('runtime_ms', 'total'):.2f}")
    if cache_path:
        cache_save(cache, cache_path, g)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hosim",
        description="Multiple local community detection for a query node.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect the communities of one node")
    p.add_argument("--graph", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--cache", default=None)
    p.add_argument("--out", default=None)
    _add_param_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="score detections against ground truth")
    p.add_argument("--graph", required=True)
    p.add_argument("--communities", default=None)
    p.add_argument("--om", default="1,2")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cache", default=None)
    p.add_argument("--out", default=None)
    _add_param_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a planted benchmark graph")
    p.add_argument("--sizes", required=True,
                   help="comma list; NxM repeats, e.g. 25x4000")
    p.add_argument("--overlap", type=int, default=0)
    p.add_argument("--p-in", type=float, required=True, dest="p_in")
    p.add_argument("--p-out", type=float, required=True, dest="p_out")
    p.add_argument("--core-skew", type=float, default=0.0, dest="core_skew")
    p.add_argument("--overlap-degree", type=int, default=None,
                   dest="overlap_degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-edges", required=True)
    p.add_argument("--out-communities", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("walk", help="print one node's diffusion vector")
    p.add_argument("--graph", required=True)
    p.add_argument("--node", required=True)
    p.add_argument("--variant", choices=("arw", "ppr", "lrw"), default="arw")
    p.add_argument("--teleport", type=float, default=None)
    p.add_argument("--k", type=int, default=None, dest="k_steps")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("stats", help="per-query pipeline counters")
    p.add_argument("--graph", required=True)
    p.add_argument("--queries-file", default=None)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache", default=None)
    _add_param_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IsolatedNodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except UnknownNodeError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (GraphFormatError, CacheFingerprintError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
