"""Synthetic graphs: generalized preferential attachment and the erased
configuration model with a Pareto-tailed degree law.

Both generators are deterministic for a fixed config (seed included) and
emit graphs satisfying every Graph invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class ParetoTail:
    """Degree tail with survival function c * x**(-gamma) for x > x_prime.

    gamma is the tail exponent (> 1 so the mean is finite), c the scale,
    x_prime the lower cutoff below which the law is not specified.
    """

    gamma: float
    c: float
    x_prime: float

    def __post_init__(self):
        if self.gamma <= 1.0:
            raise ValueError(f"tail exponent gamma must be > 1, got {self.gamma}")
        if self.c <= 0.0:
            raise ValueError(f"scale c must be > 0, got {self.c}")
        if self.x_prime <= 0.0:
            raise ValueError(f"cutoff x_prime must be > 0, got {self.x_prime}")
        if self.survival(self.x_prime) > 1.0 + 1e-12:
            raise ValueError(
                f"c * x_prime**-gamma = {self.survival(self.x_prime):.4g} exceeds 1; "
                "raise x_prime or lower c")

    def survival(self, x: float) -> float:
        return self.c * x ** (-self.gamma)

    def quantile(self, u: float) -> float:
        """Inverse of the survival function: x with survival(x) = u."""
        return (self.c / u) ** (1.0 / self.gamma)


@dataclass(frozen=True)
class PAConfig:
    """Preferential-attachment parameters.

    Each new node attaches `edges_per_node` edges to existing nodes chosen
    with probability proportional to (degree + attractiveness). The degree
    tail exponent this targets is 2 + attractiveness / edges_per_node.
    """

    n: int
    edges_per_node: int = 1
    attractiveness: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.edges_per_node < 1:
            raise ValueError(f"edges_per_node must be >= 1, got {self.edges_per_node}")
        if self.attractiveness < -self.edges_per_node:
            raise ValueError(
                f"attractiveness must be >= -edges_per_node, got {self.attractiveness}")


@dataclass(frozen=True)
class ConfigModelConfig:
    n: int
    tail: ParetoTail
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")


def generate_pa(cfg: PAConfig) -> Graph:
    """Grow a connected simple graph by preferential attachment.

    Sampling proportional to (degree + A) uses the standard stub-list
    mixture for A >= 0: pick an endpoint of a uniform random stub with
    probability 2E/(2E + A*t), else a uniform existing node. For
    -edges_per_node < A < 0 it falls back to rejection from the stub list.

    Returns:
        Graph with n nodes and roughly edges_per_node * n edges.
    """
    n, m, a = cfg.n, cfg.edges_per_node, cfg.attractiveness
    rng = np.random.default_rng(cfg.seed)
    src = np.empty(n * m, dtype=np.int64)
    dst = np.empty(n * m, dtype=np.int64)
    n_edges = 0
    # each node appears once per incident stub; grows to ~2*m*n entries
    stubs: list[int] = []
    degs = np.zeros(n, dtype=np.int64)

    for t in range(1, n):
        want = min(m, t)
        targets: set[int] = set()
        if t <= m:
            targets = set(range(t))
        else:
            total_stub = len(stubs)
            while len(targets) < want:
                if a >= 0.0:
                    u = rng.random() * (total_stub + a * t)
                    cand = stubs[int(u)] if u < total_stub else int(rng.integers(t))
                else:
                    cand = stubs[int(rng.random() * total_stub)]
                    d = degs[cand]
                    if rng.random() * d >= d + a:
                        continue
                targets.add(cand)
        for v in targets:
            src[n_edges] = t
            dst[n_edges] = v
            n_edges += 1
            stubs.append(t)
            stubs.append(v)
            degs[t] += 1
            degs[v] += 1

    edges = np.stack([src[:n_edges], dst[:n_edges]], axis=1)
    return Graph.from_edges(edges, n=n)


def sample_degrees(tail: ParetoTail, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. degrees: ceil of a tail variate, clamped at ceil(x')."""
    u = rng.random(n)
    floor_deg = math.ceil(tail.x_prime)
    p_tail = min(1.0, tail.survival(tail.x_prime))
    x = np.full(n, float(floor_deg))
    in_tail = u < p_tail
    x[in_tail] = (tail.c / u[in_tail]) ** (1.0 / tail.gamma)
    degs = np.ceil(x).astype(np.int64)
    return np.maximum(degs, floor_deg)


def pair_stubs(degrees: np.ndarray, rng: np.random.Generator,
               n: int | None = None) -> Graph:
    """Erased configuration model from an explicit degree sequence.

    Stubs are paired by a uniform random permutation; self-loops are then
    dropped and multi-edges collapsed, so realized degrees can fall below
    the prescribed ones. An odd degree sum is fixed by incrementing the
    first node's degree.
    """
    degrees = np.asarray(degrees, dtype=np.int64).copy()
    if n is None:
        n = len(degrees)
    if degrees.sum() % 2 == 1:
        degrees[0] += 1
    stubs = np.repeat(np.arange(len(degrees), dtype=np.int64), degrees)
    rng.shuffle(stubs)
    edges = stubs.reshape(-1, 2)
    return Graph.from_edges(edges, n=n)


def generate_config_model(cfg: ConfigModelConfig) -> Graph:
    g_rng = np.random.default_rng(cfg.seed)
    degrees = sample_degrees(cfg.tail, cfg.n, g_rng)
    return pair_stubs(degrees, g_rng, n=cfg.n)


def hill_estimate(degrees: np.ndarray, top_fraction: float = 0.01) -> float:
    """Hill estimator of the degree tail exponent from the upper order stats.

    Uses the top `top_fraction` of the sample: the reciprocal of the mean
    log-excess over the (k+1)-th largest value.
    """
    x = np.sort(np.asarray(degrees, dtype=np.float64))[::-1]
    k = max(2, int(len(x) * top_fraction))
    if k + 1 > len(x):
        raise ValueError("sample too small for the requested top fraction")
    logs = np.log(x[:k]) - np.log(x[k])
    mean_excess = logs.mean()
    if mean_excess <= 0.0:
        raise ValueError("degenerate tail: all top-order statistics equal")
    return 1.0 / mean_excess
