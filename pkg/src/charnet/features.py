"""Label-invariant graph summaries used as model-selection features.

* 3-profile: induced counts of the four graphs on 3 nodes, H0..H3.
* 4-profile: induced counts of the eleven graphs on 4 nodes, F0..F10.
* Spectral histogram: normalized-Laplacian eigenvalues in five bins over [0, 2].

Motif order (edges of each representative on nodes 0..3)::

    F0  empty                F6  claw       01 02 03
    F1  01                   F7  4-cycle    01 12 23 03
    F2  01 23                F8  paw        01 12 02 23
    F3  01 12                F9  diamond    01 12 23 03 02
    F4  01 12 23 (path)      F10 K4
    F5  01 12 02 (triangle)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph

PROFILE3_NAMES = ("H0", "H1", "H2", "H3")
PROFILE4_NAMES = tuple(f"F{i}" for i in range(11))
BIN_NAMES = ("B1", "B2", "B3", "B4", "B5")
BIN_EDGES = np.array([0.0, 0.4, 0.8, 1.2, 1.6, 2.0])
FEATURE_NAMES = PROFILE3_NAMES + PROFILE4_NAMES + BIN_NAMES
SPECTRUM_TOL = 1e-9

# the six node pairs of a 4-node graph, bit k of an edge mask <-> PAIRS[k]
PAIRS = tuple(itertools.combinations(range(4), 2))
_BIT = {p: 1 << k for k, p in enumerate(PAIRS)}

MOTIF_EDGES = (
    (),
    ((0, 1),),
    ((0, 1), (2, 3)),
    ((0, 1), (1, 2)),
    ((0, 1), (1, 2), (2, 3)),
    ((0, 1), (1, 2), (0, 2)),
    ((0, 1), (0, 2), (0, 3)),
    ((0, 1), (1, 2), (2, 3), (0, 3)),
    ((0, 1), (1, 2), (0, 2), (2, 3)),
    ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)),
    PAIRS,
)
MOTIF_EDGE_COUNTS = tuple(len(e) for e in MOTIF_EDGES)
# F_k -> index of its complement motif
COMPLEMENT = (10, 9, 7, 8, 4, 6, 5, 2, 3, 1, 0)


def mask_of(edges) -> int:
    out = 0
    for u, v in edges:
        out |= _BIT[(u, v) if u < v else (v, u)]
    return out


def canonical_mask(mask: int) -> int:
    """Smallest edge mask over all 24 relabelings of the 4 nodes."""
    best = 64
    for perm in itertools.permutations(range(4)):
        m = 0
        for k, (u, v) in enumerate(PAIRS):
            if mask >> k & 1:
                a, b = perm[u], perm[v]
                m |= _BIT[(a, b) if a < b else (b, a)]
        best = min(best, m)
    return best


def _build_class_table() -> tuple[int, ...]:
    canon = {canonical_mask(mask_of(e)): k for k, e in enumerate(MOTIF_EDGES)}
    if len(canon) != 11:
        raise AssertionError("motif representatives are not pairwise non-isomorphic")
    return tuple(canon[canonical_mask(mask)] for mask in range(64))


# edge mask of an induced 4-node subgraph -> motif index
MASK_CLASS = _build_class_table()


def _containment_matrix() -> list[list[int]]:
    """``M[i][j]`` = number of edge subsets of F_j isomorphic to F_i."""
    out = [[0] * 11 for _ in range(11)]
    for j, edges in enumerate(MOTIF_EDGES):
        full = mask_of(edges)
        sub = full
        while True:
            out[MASK_CLASS[sub]][j] += 1
            if sub == 0:
                break
            sub = (sub - 1) & full
    return out


CONTAINMENT = _containment_matrix()


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    mode: str

    def __post_init__(self):
        want = {"full": 20, "profiles": 15}[self.mode]
        if self.values.shape != (want,):
            raise ValueError(f"{self.mode} feature vector must have length {want}")

    @property
    def names(self) -> tuple[str, ...]:
        return FEATURE_NAMES[: self.values.size]


def _require(g: Graph, k: int) -> None:
    if g.n < k:
        raise ValueError(f"{k}-profile needs at least {k} nodes, got {g.n}")


def _local_counts(g: Graph):
    a = g.adjacency()
    d = a.sum(axis=1)
    a2 = a @ a
    tri = (a2 * a).sum(axis=1) // 2  # triangles through each node
    return a, d, a2, tri


def profile3(g: Graph) -> np.ndarray:
    """Induced counts (H0, H1, H2, H3) over all node triples."""
    _require(g, 3)
    n, m = g.n, g.edge_count
    _, d, _, tri = _local_counts(g)
    triangles = int(tri.sum()) // 3
    wedges = int((d * (d - 1) // 2).sum())
    h3 = triangles
    h2 = wedges - 3 * triangles
    h1 = m * (n - 2) - 2 * h2 - 3 * h3
    h0 = math.comb(n, 3) - h1 - h2 - h3
    return np.array([h0, h1, h2, h3], dtype=np.int64)


def subgraph_counts4(g: Graph) -> list[int]:
    """Non-induced copies of each F_k on 4-node sets of ``g``."""
    n, m = g.n, g.edge_count
    a, d, a2, tri = _local_counts(g)
    d = d.astype(object)
    triangles = int(tri.sum()) // 3
    wedges = int(sum(x * (x - 1) // 2 for x in d))
    src, dst = np.nonzero(np.triu(a, 1))
    codeg = a2[src, dst]
    offdiag = np.triu(a2, 1)
    # K4: each one is seen from its 6 edges, and inside the common
    # neighbourhood of an edge every remaining edge is counted twice
    common = a[src] * a[dst]
    k4 = int(((common @ a) * common).sum()) // 12
    return [
        math.comb(n, 4),
        m * math.comb(n - 2, 2),
        math.comb(m, 2) - wedges,
        wedges * (n - 3),
        int(((d[src] - 1) * (d[dst] - 1)).sum()) - 3 * triangles if m else 0,
        triangles * (n - 3),
        int(sum(x * (x - 1) * (x - 2) // 6 for x in d)),
        int((offdiag * (offdiag - 1) // 2).sum()) // 2,
        int(sum(int(t) * (x - 2) for t, x in zip(tri, d))),
        int((codeg * (codeg - 1) // 2).sum()),
        k4,
    ]


def profile4(g: Graph) -> np.ndarray:
    """Induced counts F0..F10 over all 4-node sets.

    Non-induced pattern counts come from degree, codegree and triangle
    statistics and are converted to induced counts by exact back
    substitution through the motif containment matrix.
    """
    _require(g, 4)
    counts = subgraph_counts4(g)
    induced = [0] * 11
    for j in sorted(range(11), key=lambda k: -MOTIF_EDGE_COUNTS[k]):
        induced[j] = counts[j] - sum(CONTAINMENT[j][k] * induced[k] for k in range(11) if k != j)
    return np.array(induced, dtype=np.int64)


def profile4_oracle(g: Graph, max_nodes: int = 40) -> np.ndarray:
    """Brute-force 4-profile: classify every induced 4-node subgraph."""
    _require(g, 4)
    if g.n > max_nodes:
        raise ValueError(f"oracle limited to {max_nodes} nodes, got {g.n}")
    adj = g.adjacency().astype(bool)
    out = [0] * 11
    for quad in itertools.combinations(range(g.n), 4):
        mask = 0
        for k, (i, j) in enumerate(PAIRS):
            if adj[quad[i], quad[j]]:
                mask |= 1 << k
        out[MASK_CLASS[mask]] += 1
    return np.array(out, dtype=np.int64)


def normalized_laplacian(g: Graph) -> np.ndarray:
    a = g.adjacency().astype(float)
    d = a.sum(axis=1)
    nz = d > 0
    inv_sqrt = np.zeros_like(d)
    inv_sqrt[nz] = 1.0 / np.sqrt(d[nz])
    return np.diag(nz.astype(float)) - inv_sqrt[:, None] * a * inv_sqrt[None, :]


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """Ascending eigenvalues of ``I - D^-1/2 A D^-1/2``; isolated nodes give 0."""
    if g.n == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(normalized_laplacian(g))


def spectral_histogram(eigs) -> np.ndarray:
    """Counts in [0,.4), [.4,.8), [.8,1.2), [1.2,1.6), [1.6,2]."""
    eigs = np.asarray(eigs, dtype=float)
    bad = (eigs < -SPECTRUM_TOL) | (eigs > 2.0 + SPECTRUM_TOL)
    if bad.any():
        raise ValueError(f"eigenvalue outside [0, 2]: {eigs[bad][0]!r}")
    idx = np.searchsorted(BIN_EDGES, np.clip(eigs, 0.0, 2.0), side="right") - 1
    return np.bincount(np.minimum(idx, 4), minlength=5).astype(np.int64)


def feature_vector(g: Graph, mode: str = "full") -> FeatureVector:
    """Raw counts H0..H3, F0..F10 and, in ``full`` mode, bins B1..B5."""
    if mode not in ("full", "profiles"):
        raise ValueError(f"unknown feature mode {mode!r}")
    g = g.unweighted()
    parts = [profile3(g), profile4(g)]
    if mode == "full":
        parts.append(spectral_histogram(laplacian_spectrum(g)))
    return FeatureVector(np.concatenate(parts).astype(float), mode)
