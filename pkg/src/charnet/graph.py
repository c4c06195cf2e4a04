"""Undirected weighted graphs, CSV/GEXF input and output, global metrics."""

from __future__ import annotations

import csv
import io
import math
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

GEXF_NS = "http://www.gexf.net/1.2draft"


class GraphError(ValueError):
    """Raised for malformed graph input."""


class Graph:
    """Immutable simple undirected graph with positive edge weights.

    Nodes are the dense ids ``0..n-1``; each carries a string label.  Edges
    are keyed by ``(u, v)`` with ``u < v``.  Parallel edges given to the
    constructor are merged by summing their weights.
    """

    __slots__ = ("_labels", "_edges", "_nbrs")

    def __init__(
        self,
        labels: Sequence[str],
        edges: Iterable[tuple[int, int, float]] | Iterable[tuple[int, int]] = (),
    ):
        n = len(labels)
        merged: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) == 3:
                u, v, w = e
                w = float(w)
            else:
                u, v = e
                w = 1.0
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (w > 0 and math.isfinite(w)):
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, 0.0) + w
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in merged:
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._labels = tuple(str(s) for s in labels)
        self._edges = dict(sorted(merged.items()))
        self._nbrs = tuple(frozenset(s) for s in nbrs)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls([str(i) for i in range(n)])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels: Sequence[str] | None = None) -> "Graph":
        return cls([str(i) for i in range(n)] if labels is None else labels, edges)

    @classmethod
    def from_adjacency(cls, a: np.ndarray, labels: Sequence[str] | None = None) -> "Graph":
        a = np.asarray(a)
        n = a.shape[0]
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls.from_edges(n, zip(iu.tolist(), ju.tolist(), a[iu, ju].tolist()), labels)

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def edges(self) -> Mapping[tuple[int, int], float]:
        return MappingProxyType(self._edges)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(s) for s in self._nbrs], dtype=np.int64)

    def weight(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        return self._edges.get(key, 0.0)

    def weighted_degrees(self) -> np.ndarray:
        out = np.zeros(self.n)
        for (u, v), w in self._edges.items():
            out[u] += w
            out[v] += w
        return out

    def adjacency(self, weighted: bool = False) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=float if weighted else np.int64)
        for (u, v), w in self._edges.items():
            a[u, v] = a[v, u] = w if weighted else 1
        return a

    def unweighted(self) -> "Graph":
        return Graph(self._labels, ((u, v) for u, v in self._edges))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with node ``v`` moved to position ``perm[v]``."""
        labels = [""] * self.n
        for v, p in enumerate(perm):
            labels[p] = self._labels[v]
        return Graph(labels, ((perm[u], perm[v], w) for (u, v), w in self._edges.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._labels == other._labels and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._labels, tuple(self._edges.items())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def complement(g: Graph) -> Graph:
    """Graph on the same nodes whose edges are exactly the non-edges of ``g``."""
    n = g.n
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in g.edges]
    return Graph(g.labels, edges)


# ---------------------------------------------------------------------------
# CSV


def _read_rows(text: str, required: Sequence[str], what: str) -> tuple[dict[str, int], list[list[str]]]:
    reader = csv.reader(io.StringIO(text.lstrip("﻿")))
    try:
        header = next(reader)
    except StopIteration:
        raise GraphError(f"{what} CSV is empty") from None
    cols = {h.strip().lower(): i for i, h in enumerate(header)}
    missing = [r for r in required if r.lower() not in cols]
    if missing:
        raise GraphError(f"{what} CSV header is missing {', '.join(missing)}")
    rows = [row for row in reader if row and any(c.strip() for c in row)]
    return cols, rows


def load_edge_csv(node_csv: str | None, edge_csv: str) -> Graph:
    """Build a graph from Gephi-style node (``Id,Label``) and edge
    (``Source,Target,Weight``) CSV text.

    Ids are mapped to dense indices in order of first declaration.  When
    ``node_csv`` is None the node set is taken from the edge rows and labels
    are the ids themselves.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    if node_csv is not None:
        cols, rows = _read_rows(node_csv, ("Id", "Label"), "node")
        for row in rows:
            nid = row[cols["id"]].strip()
            if nid in index:
                raise GraphError(f"duplicate node id {nid!r}")
            index[nid] = len(labels)
            labels.append(row[cols["label"]] if cols["label"] < len(row) else nid)

    cols, rows = _read_rows(edge_csv, ("Source", "Target", "Weight"), "edge")
    edges = []
    for lineno, row in enumerate(rows, start=2):
        try:
            s, t, w = (row[cols[k]].strip() for k in ("source", "target", "weight"))
        except IndexError:
            raise GraphError(f"edge row {lineno}: too few columns") from None
        for x in (s, t):
            if x not in index:
                if node_csv is not None:
                    raise GraphError(f"edge row {lineno}: unknown node id {x!r}")
                index[x] = len(labels)
                labels.append(x)
        try:
            weight = float(w)
        except ValueError:
            raise GraphError(f"edge row {lineno}: non-numeric weight {w!r}") from None
        if not weight > 0:
            raise GraphError(f"edge row {lineno}: non-positive weight {w!r}")
        if s == t:
            raise GraphError(f"edge row {lineno}: self-loop on {s!r}")
        edges.append((index[s], index[t], weight))
    return Graph(labels, edges)


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def node_csv_text(g: Graph) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["Id", "Label"])
    for i, label in enumerate(g.labels):
        out.writerow([i, label])
    return buf.getvalue()


def edge_csv_text(g: Graph) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["Source", "Target", "Weight"])
    for (u, v), w in g.edges.items():
        out.writerow([u, v, _fmt_weight(w)])
    return buf.getvalue()


def read_graph(edge_path, node_path=None) -> Graph:
    with open(edge_path, encoding="utf-8", newline="") as fh:
        edge_text = fh.read()
    node_text = None
    if node_path is not None:
        with open(node_path, encoding="utf-8", newline="") as fh:
            node_text = fh.read()
    return load_edge_csv(node_text, edge_text)


def write_graph(g: Graph, edge_path, node_path=None) -> None:
    with open(edge_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(edge_csv_text(g))
    if node_path is not None:
        with open(node_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(node_csv_text(g))


# ---------------------------------------------------------------------------
# GEXF


def write_gexf(g: Graph) -> str:
    """Serialize ``g`` as an undirected, weighted GEXF 1.2 document."""
    ET.register_namespace("", GEXF_NS)
    root = ET.Element(f"{{{GEXF_NS}}}gexf", {"version": "1.2"})
    graph = ET.SubElement(root, f"{{{GEXF_NS}}}graph", {"mode": "static", "defaultedgetype": "undirected"})
    nodes = ET.SubElement(graph, f"{{{GEXF_NS}}}nodes")
    for i, label in enumerate(g.labels):
        ET.SubElement(nodes, f"{{{GEXF_NS}}}node", {"id": str(i), "label": label})
    edges = ET.SubElement(graph, f"{{{GEXF_NS}}}edges")
    for k, ((u, v), w) in enumerate(g.edges.items()):
        ET.SubElement(
            edges,
            f"{{{GEXF_NS}}}edge",
            {"id": str(k), "source": str(u), "target": str(v), "weight": repr(float(w))},
        )
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def read_gexf(text: str) -> Graph:
    root = ET.fromstring(text)

    def local(tag: str) -> str:
        return tag.rsplit("}", 1)[-1]

    graph = next((c for c in root if local(c.tag) == "graph"), None)
    if graph is None:
        raise GraphError("GEXF document has no <graph> element")
    index: dict[str, int] = {}
    labels: list[str] = []
    edges = []
    for section in graph:
        kind = local(section.tag)
        for el in section:
            if kind == "nodes" and local(el.tag) == "node":
                index[el.get("id")] = len(labels)
                labels.append(el.get("label", el.get("id")))
            elif kind == "edges" and local(el.tag) == "edge":
                try:
                    edges.append((index[el.get("source")], index[el.get("target")], float(el.get("weight", "1"))))
                except KeyError as exc:
                    raise GraphError(f"GEXF edge references unknown node {exc}") from None
    return Graph(labels, edges)


# ---------------------------------------------------------------------------
# global metrics


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    avg_degree: float
    avg_weighted_degree: float
    diameter: int
    edge_density: float
    avg_distance: float
    clustering_coeff: float
    disconnected: bool = False
    distances_defined: bool = True

    HEADER = (
        "Nodes", "Edges", "Avg. Degree", "Avg. Weighted Degree", "Diameter",
        "Edge Density", "Avg. Distance", "Clust. Coeff.",
    )

    def row(self) -> list[str]:
        return [
            str(self.node_count), str(self.edge_count), f"{self.avg_degree:.2f}",
            f"{self.avg_weighted_degree:.2f}", str(self.diameter), f"{self.edge_density:.3f}",
            f"{self.avg_distance:.2f}", f"{self.clustering_coeff:.3f}",
        ]


def bfs_distances(g: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, largest first (ties by smallest node)."""
    seen: set[int] = set()
    comps = []
    for s in range(g.n):
        if s not in seen:
            comp = sorted(bfs_distances(g, s))
            seen.update(comp)
            comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def local_clustering(g: Graph) -> np.ndarray:
    out = np.zeros(g.n)
    for v in range(g.n):
        nb = g.neighbors(v)
        d = len(nb)
        if d < 2:
            continue
        links = sum(len(g.neighbors(u) & nb) for u in nb) // 2
        out[v] = links / (d * (d - 1) / 2)
    return out


def global_stats(g: Graph) -> GraphStats:
    """Global summary row.  Distances are hop counts on the largest
    connected component; clustering averages the local coefficient over all
    nodes, counting degree < 2 nodes as 0."""
    n, m = g.n, g.edge_count
    avg_degree = 2 * m / n if n else 0.0
    avg_wdeg = float(g.weighted_degrees().mean()) if n else 0.0
    density = m / math.comb(n, 2) if n >= 2 else 0.0
    clustering = float(local_clustering(g).mean()) if n else 0.0
    if n < 2:
        return GraphStats(n, m, avg_degree, avg_wdeg, 0, density, 0.0, clustering,
                          disconnected=False, distances_defined=False)
    comps = connected_components(g)
    lcc = comps[0]
    diameter, total = 0, 0
    for s in lcc:
        dist = bfs_distances(g, s)
        diameter = max(diameter, max(dist.values()))
        total += sum(dist.values())
    pairs = len(lcc) * (len(lcc) - 1)
    return GraphStats(
        n, m, avg_degree, avg_wdeg, diameter, density,
        total / pairs if pairs else 0.0, clustering,
        disconnected=len(comps) > 1, distances_defined=pairs > 0,
    )
