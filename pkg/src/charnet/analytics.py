"""Centrality measures and Louvain community detection on weighted graphs.

Distances used by closeness and betweenness are hop counts; weights enter
only through weighted degree, eigencentrality, PageRank and modularity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import Graph, bfs_distances, connected_components

MEASURES = ("weighted_degree", "closeness", "betweenness", "eigencentrality", "pagerank")


@dataclass(frozen=True)
class CentralityScores:
    measure: str
    values: dict[int, float]
    # nodes whose score is undefined and reported as 0 (e.g. singleton closeness)
    undefined: frozenset[int] = frozenset()

    def ranked(self) -> list[int]:
        """Node ids from most to least central (closeness: smallest first)."""
        sign = 1 if self.measure == "closeness" else -1
        return sorted(self.values, key=lambda v: (sign * self.values[v], v))


@dataclass(frozen=True)
class Partition:
    assignment: dict[int, int]
    q: float

    @property
    def communities(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in sorted(self.assignment.items()):
            out.setdefault(c, []).append(v)
        return [out[c] for c in sorted(out)]


def weighted_degree(g: Graph) -> CentralityScores:
    wd = g.weighted_degrees()
    return CentralityScores("weighted_degree", {v: float(wd[v]) for v in range(g.n)})


def closeness(g: Graph) -> CentralityScores:
    """Mean hop distance to the other nodes of the same component (lower is
    more central)."""
    values, undefined = {}, set()
    for v in range(g.n):
        dist = bfs_distances(g, v)
        if len(dist) == 1:
            values[v] = 0.0
            undefined.add(v)
        else:
            values[v] = sum(dist.values()) / (len(dist) - 1)
    return CentralityScores("closeness", values, frozenset(undefined))


def betweenness(g: Graph) -> CentralityScores:
    """Unnormalized Brandes betweenness over unordered endpoint pairs."""
    n = g.n
    total = np.zeros(n)
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in sorted(g.neighbors(v)):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                total[w] += delta[w]
    return CentralityScores("betweenness", {v: float(total[v]) / 2.0 for v in range(n)})


def eigencentrality(g: Graph, tol: float = 1e-10, max_iter: int = 100_000) -> CentralityScores:
    """Leading eigenvector of the weighted adjacency matrix, scaled to max 1.

    Iterates on ``A + I`` so bipartite components (stars, paths) converge.
    Each component is solved separately and scaled by its leading
    eigenvalue before the global max normalization.
    """
    if g.edge_count == 0:
        raise ValueError("eigencentrality is undefined on a graph without edges")
    a = g.adjacency(weighted=True)
    x = np.zeros(g.n)
    for comp in connected_components(g):
        if len(comp) == 1:
            continue
        sub = a[np.ix_(comp, comp)] + np.eye(len(comp))
        v = np.ones(len(comp)) / len(comp)
        for _ in range(max_iter):
            nxt = sub @ v
            nxt /= nxt.max()
            done = np.max(np.abs(nxt - v)) < tol
            v = nxt
            if done:
                break
        lam = float((sub @ v).max()) - 1.0
        x[comp] = v * lam
    x /= x.max()
    return CentralityScores("eigencentrality", {v: float(x[v]) for v in range(g.n)})


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-10, max_iter: int = 100_000) -> CentralityScores:
    """Weighted PageRank; nodes without edges redistribute uniformly."""
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    n = g.n
    if n == 0:
        return CentralityScores("pagerank", {})
    a = g.adjacency(weighted=True)
    out = a.sum(axis=1)
    dangling = out == 0
    p = np.divide(a, out[:, None], out=np.zeros_like(a), where=~dangling[:, None])
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = damping * (x @ p + x[dangling].sum() / n) + (1.0 - damping) / n
        nxt /= nxt.sum()
        done = np.abs(nxt - x).sum() < tol
        x = nxt
        if done:
            break
    return CentralityScores("pagerank", {v: float(x[v]) for v in range(n)})


def centrality(g: Graph, measure: str) -> CentralityScores:
    funcs = {
        "weighted_degree": weighted_degree,
        "closeness": closeness,
        "betweenness": betweenness,
        "eigencentrality": eigencentrality,
        "pagerank": pagerank,
    }
    return funcs[measure](g)


# ---------------------------------------------------------------------------
# communities


def modularity(g: Graph, assignment: Mapping[int, int]) -> float:
    """Weighted Newman modularity of ``assignment``."""
    missing = [v for v in range(g.n) if v not in assignment]
    if missing:
        raise ValueError(f"nodes without a community: {missing[:5]}")
    total = sum(g.edges.values())
    if total == 0:
        return 0.0
    inside: dict[int, float] = {}
    strength: dict[int, float] = {}
    for (u, v), w in g.edges.items():
        cu, cv = assignment[u], assignment[v]
        if cu == cv:
            inside[cu] = inside.get(cu, 0.0) + w
        strength[cu] = strength.get(cu, 0.0) + w
        strength[cv] = strength.get(cv, 0.0) + w
    return sum(inside.get(c, 0.0) / total - (s / (2 * total)) ** 2 for c, s in strength.items())


@dataclass
class _Level:
    # adjacency without self-loops, self-loop weight, and strength per node
    adj: list[dict[int, float]]
    loops: list[float]
    k: list[float] = field(init=False)

    def __post_init__(self):
        self.k = [sum(a.values()) + 2 * s for a, s in zip(self.adj, self.loops)]


def _move_nodes(level: _Level, total: float, order: np.ndarray) -> list[int]:
    n = len(level.adj)
    comm = list(range(n))
    tot = list(level.k)
    improved = True
    while improved:
        improved = False
        for i in order:
            i = int(i)
            ki, own = level.k[i], comm[i]
            links: dict[int, float] = {}
            for j, w in level.adj[i].items():
                links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[own] -= ki
            stay = links.get(own, 0.0) / total - tot[own] * ki / (2 * total * total)
            best, best_gain = own, stay
            for c in sorted(links):
                if c == own:
                    continue
                gain = links[c] / total - tot[c] * ki / (2 * total * total)
                if gain > best_gain + 1e-12:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != own:
                comm[i] = best
                improved = True
    return comm


def louvain(g: Graph, seed: int = 0, min_gain: float = 1e-9) -> Partition:
    """Two-phase Louvain modularity optimization.

    Node sweep order is a seeded permutation per level; among improving
    moves the highest gain wins, ties going to the lowest community id.
    """
    rng = np.random.default_rng(seed)
    total = sum(g.edges.values())
    membership = list(range(g.n))
    if total == 0:
        return Partition({v: v for v in range(g.n)}, 0.0)
    adj: list[dict[int, float]] = [dict() for _ in range(g.n)]
    for (u, v), w in g.edges.items():
        adj[u][v] = w
        adj[v][u] = w
    level = _Level(adj, [0.0] * g.n)
    q = modularity(g, dict(enumerate(membership)))
    while True:
        comm = _move_nodes(level, total, rng.permutation(len(level.adj)))
        ids = {c: i for i, c in enumerate(sorted(set(comm)))}
        comm = [ids[c] for c in comm]
        candidate = [comm[c] for c in membership]
        new_q = modularity(g, dict(enumerate(candidate)))
        if new_q - q <= min_gain:
            break
        membership, q = candidate, new_q
        size = len(ids)
        new_adj: list[dict[int, float]] = [dict() for _ in range(size)]
        loops = [0.0] * size
        for i, nbrs in enumerate(level.adj):
            ci = comm[i]
            loops[ci] += level.loops[i]
            for j, w in nbrs.items():
                cj = comm[j]
                if ci == cj:
                    if i < j:
                        loops[ci] += w
                else:
                    new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
        level = _Level(new_adj, loops)
        if size == 1:
            break
    # renumber communities by first appearance in node order
    ids: dict[int, int] = {}
    for c in membership:
        ids.setdefault(c, len(ids))
    assignment = {v: ids[c] for v, c in enumerate(membership)}
    return Partition(assignment, modularity(g, assignment))
