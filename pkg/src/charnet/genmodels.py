"""Random graph models with parameters matched to a target graph.

Models: preferential attachment (PA), binomial/Erdos-Renyi (ER), Chung-Lu
expected-degree graphs (CL) and the configuration model (CFG).

Randomness comes from numpy's PCG64 generator.  A sample stream is derived
from a 64-bit base seed and a sample index through ``numpy.random.SeedSequence``
so each sample is reproducible on its own (see ``sample_rng``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

MODELS = ("PA", "CL", "ER", "CFG")


@dataclass(frozen=True)
class ModelParams:
    model: str
    n: int
    m: int | None = None
    p: float | None = None
    w: tuple[float, ...] | None = field(default=None)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == "PA" and not (self.m is not None and 1 <= self.m < self.n):
            raise ValueError(f"PA needs 1 <= m < n, got m={self.m}, n={self.n}")
        if self.model == "ER" and not (self.p is not None and 0.0 <= self.p <= 1.0):
            raise ValueError(f"ER needs 0 <= p <= 1, got {self.p}")
        if self.model in ("CL", "CFG"):
            if self.w is None or len(self.w) != self.n or min(self.w, default=0) < 0:
                raise ValueError("CL/CFG need a non-negative weight vector of length n")
            if self.model == "CFG" and int(sum(self.w)) % 2:
                raise ValueError("CFG degree sequence has an odd sum")

    def as_dict(self) -> dict:
        out = {"model": self.model, "n": self.n}
        if self.m is not None:
            out["m"] = self.m
        if self.p is not None:
            out["p"] = self.p
        if self.w is not None:
            out["w"] = list(self.w)
        return out


def sample_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 stream for ``(seed, *keys)``; no keys gives the base stream."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, keys)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def _as_rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else sample_rng(rng)


def match_parameters(g: Graph, model: str) -> ModelParams:
    """Parameters of ``model`` chosen to mimic ``g`` (size, edge count,
    degree sequence)."""
    n, e = g.n, g.edge_count
    if n < 2:
        raise ValueError("need at least two nodes to match parameters")
    if model == "PA":
        if e == 0:
            raise ValueError("cannot match PA to a graph without edges")
        # 2/n + 2m = 2|E|/n  =>  m = (|E| - 1)/n
        m = max(1, math.floor((e - 1) / n + 0.5))
        return ModelParams("PA", n, m=min(m, n - 1))
    if model == "ER":
        return ModelParams("ER", n, p=e / math.comb(n, 2))
    if model in ("CL", "CFG"):
        return ModelParams(model, n, w=tuple(int(d) for d in g.degrees()))
    raise ValueError(f"unknown model {model!r}")


def gen_pa(n: int, m: int, rng: np.random.Generator | int) -> Graph:
    """Preferential attachment grown from a clique on ``m + 1`` nodes.

    Each arriving node picks ``m`` distinct targets with probability
    proportional to degree before its arrival (draw, reject repeats).
    """
    if not 1 <= m < n:
        raise ValueError(f"PA needs 1 <= m < n, got m={m}, n={n}")
    rng = _as_rng(rng)
    edges = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]
    # every endpoint occurrence; uniform draws from it are degree-proportional
    ends = [x for e in edges for x in e]
    for new in range(m + 1, n):
        targets: list[int] = []
        while len(targets) < m:
            t = ends[int(rng.integers(len(ends)))]
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, new))
            ends.extend((t, new))
    return Graph.from_edges(n, edges)


def gen_er(n: int, p: float, rng: np.random.Generator | int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = _as_rng(rng)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def cl_probabilities(w) -> np.ndarray:
    """Edge probabilities ``min(1, w_i w_j / sum(w))`` (zero diagonal)."""
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise ValueError("expected degrees must be non-negative")
    total = w.sum()
    if total == 0:
        return np.zeros((w.size, w.size))
    p = np.minimum(1.0, np.outer(w, w) / total)
    np.fill_diagonal(p, 0.0)
    return p


def gen_cl(w, rng: np.random.Generator | int) -> Graph:
    p = cl_probabilities(w)
    rng = _as_rng(rng)
    n = p.shape[0]
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p[iu, ju]
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def gen_cfg(w, rng: np.random.Generator | int, return_discards: bool = False):
    """Configuration model by uniform stub matching.

    Self-loops and repeated edges produced by the matching are dropped, so
    realized degrees never exceed ``w``.  With ``return_discards`` the number
    of dropped stub pairs is returned as well.
    """
    w = np.asarray(w, dtype=np.int64)
    if np.any(w < 0):
        raise ValueError("degrees must be non-negative")
    if int(w.sum()) % 2:
        raise ValueError("stub count is odd")
    n = w.size
    stubs = _as_rng(rng).permutation(np.repeat(np.arange(n), w))
    edges: set[tuple[int, int]] = set()
    discards = 0
    for u, v in stubs.reshape(-1, 2).tolist():
        key = (u, v) if u < v else (v, u)
        if u == v or key in edges:
            discards += 1
        else:
            edges.add(key)
    g = Graph.from_edges(n, sorted(edges))
    return (g, discards) if return_discards else g


def generate(params: ModelParams, rng: np.random.Generator) -> Graph:
    if params.model == "PA":
        return gen_pa(params.n, params.m, rng)
    if params.model == "ER":
        return gen_er(params.n, params.p, rng)
    if params.model == "CL":
        return gen_cl(params.w, rng)
    return gen_cfg(params.w, rng)


def generate_samples(params: ModelParams, seed: int, count: int, stream: int = 0) -> list[Graph]:
    """``count`` independent samples; sample ``i`` draws from
    ``sample_rng(seed, stream, i)``."""
    return [generate(params, sample_rng(seed, stream, i)) for i in range(count)]


def skewed_expected_degrees(n: int, avg_degree: float, exponent: float = 0.6) -> tuple[float, ...]:
    """Zipf-like expected degrees ``c * (i+1)^-exponent`` with mean ``avg_degree``,
    capped at ``n - 1`` (the cap's excess is spread over the uncapped nodes)."""
    raw = (np.arange(1, n + 1, dtype=float)) ** -exponent
    w = raw * avg_degree * n / raw.sum()
    for _ in range(n):
        over = w > n - 1
        if not over.any():
            break
        excess = (w[over] - (n - 1)).sum()
        w[over] = n - 1
        free = ~over & (w < n - 1)
        w[free] += excess * w[free] / w[free].sum()
    return tuple(float(x) for x in w)
