"""Command line interface: extract, stats, analyze, generate, profile,
spectrum, select.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal invariant
violation.  ``CHARNET_SEED`` overrides the default seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analytics
from .extract import AliasError, AliasTable, WindowConfig, extract_pipeline
from .features import FEATURE_NAMES, feature_vector, laplacian_spectrum, spectral_histogram
from .genmodels import MODELS, generate_samples, match_parameters
from .graph import GraphError, GraphStats, global_stats, read_graph, write_gexf, write_graph
from .learn.select import CLASSIFIERS, select_model

DEFAULT_SEED = 1729
EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 2, 3, 4


class InvariantError(RuntimeError):
    pass


def default_seed() -> int:
    raw = os.environ.get("CHARNET_SEED")
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _stats_text(stats: GraphStats) -> str:
    rows = [GraphStats.HEADER, stats.row()]
    text = _csv_text(rows)
    if stats.disconnected:
        text += "# disconnected: distances computed on the largest component\n"
    return text


# ---------------------------------------------------------------------------
# subcommands


def cmd_extract(args) -> None:
    aliases = AliasTable.from_csv(_read_text(args.aliases))
    g = extract_pipeline(_read_text(args.text), aliases, WindowConfig(args.distance))
    for path in (args.out_edges, args.out_nodes):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
    write_graph(g, args.out_edges, args.out_nodes)
    if args.gexf:
        _write(Path(args.gexf), write_gexf(g))
    sys.stdout.write(_stats_text(global_stats(g)))


def cmd_stats(args) -> None:
    sys.stdout.write(_stats_text(global_stats(read_graph(args.edges, args.nodes))))


def cmd_analyze(args) -> None:
    g = read_graph(args.edges, args.nodes)
    out = Path(args.out_dir)
    measures = analytics.MEASURES if args.measure == "all" else (args.measure,)
    results = {}
    for m in measures:
        scores = analytics.centrality(g, m)
        if m == "pagerank" and g.n and abs(sum(scores.values.values()) - 1.0) > 1e-8:
            raise InvariantError("PageRank does not sum to 1")
        results[m] = scores
        rows = [("Id", "Label", "Score")]
        rows += [(v, g.labels[v], repr(scores.values[v])) for v in scores.ranked()]
        _write(out / f"{m}.csv", _csv_text(rows))
    part = analytics.louvain(g, seed=args.seed)
    if abs(part.q - analytics.modularity(g, part.assignment)) > 1e-9:
        raise InvariantError("Louvain modularity disagrees with recomputation")
    rows = [("Id", "Label", "Community")] + [(v, g.labels[v], part.assignment[v]) for v in range(g.n)]
    _write(out / "communities.csv", _csv_text(rows))
    _write(out / "modularity.txt", f"{part.q!r}\n")

    # top twelve by PageRank, printed in increasing PageRank order
    pr = results.get("pagerank") or analytics.pagerank(g)
    top = list(reversed(pr.ranked()[:12]))
    header = ["Label", *[m for m in measures]]
    lines = [header]
    for v in top:
        lines.append([g.labels[v], *[f"{results[m].values[v]:.4g}" for m in measures]])
    sys.stdout.write(_csv_text(lines))
    sys.stdout.write("# closeness is mean hop distance: lower means more central\n")


def cmd_generate(args) -> None:
    g = read_graph(args.match, args.nodes).unweighted()
    model = args.model.upper()
    params = match_parameters(g, model)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(args.count - 1)))
    for i, sample in enumerate(generate_samples(params, args.seed, args.count, stream=MODELS.index(model))):
        write_graph(sample, out / f"{args.model.lower()}_{i:0{width}d}.csv")


def cmd_profile(args) -> None:
    g = read_graph(args.edges, args.nodes)
    mode = "profiles" if args.mode in ("profiles", "profiles_only") else "full"
    fv = feature_vector(g, mode)
    sys.stdout.write(_csv_text([fv.names, [int(v) for v in fv.values]]))


def cmd_spectrum(args) -> None:
    g = read_graph(args.edges, args.nodes).unweighted()
    eigs = laplacian_spectrum(g)
    rows = [("Index", "Eigenvalue")] + [(i, repr(float(x))) for i, x in enumerate(eigs)]
    text = _csv_text(rows)
    if args.histogram:
        hist = spectral_histogram(eigs)
        text = _csv_text([FEATURE_NAMES[-5:], hist.tolist()])
    sys.stdout.write(text)


def _select_one(path, nodes, mode, seed, samples):
    return select_model(read_graph(path, nodes), mode=mode, seed=seed, samples=samples)


def cmd_select(args) -> None:
    mode = "profiles" if args.mode in ("profiles", "profiles_only") else "full"
    if args.batch:
        files = sorted(Path(args.batch).glob("*.csv"))
        if not files:
            raise GraphError(f"no edge CSV files in {args.batch}")
        jobs = [(f, None, mode, args.seed, args.samples) for f in files]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                reports = list(pool.map(_select_one, *zip(*jobs)))
        else:
            reports = [_select_one(*j) for j in jobs]
        counts = {c: {m: 0 for m in MODELS} for c in CLASSIFIERS}
        rows = [("File", *CLASSIFIERS)]
        for f, rep in zip(files, reports):
            rows.append((f.name, *[rep.selected[c] for c in CLASSIFIERS]))
            for c in CLASSIFIERS:
                counts[c][rep.selected[c]] += 1
        agg = [("Classifier", *MODELS)] + [(c, *[counts[c][m] for m in MODELS]) for c in CLASSIFIERS]
        _write(Path(args.out), _csv_text(agg))
        if args.csv:
            _write(Path(args.csv), _csv_text(rows))
        sys.stdout.write(_csv_text(agg))
        return
    if not args.edges:
        raise argparse.ArgumentTypeError("an edge CSV or --batch directory is required")
    report = _select_one(args.edges, args.nodes, mode, args.seed, args.samples)
    _write(Path(args.out), report.to_json())
    if args.csv:
        _write(Path(args.csv), report.to_csv())
    sys.stdout.write(report.to_csv())


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="charnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    seed = default_seed()

    def graph_args(sp, edges_required=True):
        if edges_required:
            sp.add_argument("edges", help="edge CSV (Source,Target,Weight)")
        sp.add_argument("--nodes", help="node CSV (Id,Label)")

    sp = sub.add_parser("extract", help="build a character network from text")
    sp.add_argument("text")
    sp.add_argument("aliases", help="alias CSV: canonical name, then aliases")
    sp.add_argument("--distance", type=int, default=15)
    sp.add_argument("--out-nodes", default="nodes.csv")
    sp.add_argument("--out-edges", default="edges.csv")
    sp.add_argument("--gexf")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("stats", help="global metrics of a network")
    graph_args(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("analyze", help="centralities and Louvain communities")
    graph_args(sp)
    sp.add_argument("--measure", default="all", choices=("all", *analytics.MEASURES))
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--seed", type=int, default=seed)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("generate", help="random graphs matched to a network")
    sp.add_argument("--model", required=True, type=str.lower, choices=("pa", "er", "cl", "cfg"))
    sp.add_argument("--match", required=True, help="edge CSV of the target network")
    sp.add_argument("--nodes")
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("profile", help="3-/4-profile (and spectral bins) feature vector")
    graph_args(sp)
    sp.add_argument("--mode", default="full", choices=("full", "profiles", "profiles_only"))
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("spectrum", help="normalized Laplacian eigenvalues")
    graph_args(sp)
    sp.add_argument("--histogram", action="store_true", help="emit the five-bin histogram instead")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("select", help="random graph model selection")
    sp.add_argument("edges", nargs="?")
    sp.add_argument("--nodes")
    sp.add_argument("--batch", help="directory of edge CSVs to aggregate")
    sp.add_argument("--mode", default="full", choices=("full", "profiles", "profiles_only"))
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--out", default="report.json")
    sp.add_argument("--csv", help="also write the classifier-by-model score matrix")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_select)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (GraphError, AliasError, ValueError, OSError, UnicodeDecodeError) as exc:
        print(f"charnet {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvariantError, AssertionError) as exc:
        print(f"charnet {args.command}: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
