"""Closed-form analytics for the jumping random walk.

Stationary distribution, steady-state jump probability, exact and
asymptotic expected hitting times to the top node, extreme-value
predictors for the largest degrees under a Pareto tail, and the Poisson
machinery behind the stopping rules.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph, exact_top_k
from .generators import ParetoTail


class UnreachableTargetError(RuntimeError):
    """The hitting-time system is singular: some state cannot reach the target."""


@dataclass(frozen=True)
class StationaryDist:
    alpha: float
    probs: np.ndarray

    def max_prob(self) -> float:
        return float(self.probs.max())


def stationary(g: Graph, alpha: float) -> StationaryDist:
    """Stationary distribution of the walk: probs[i] = (d_i+alpha)/(2|E|+n*alpha).

    Requires alpha > 0, or alpha == 0 on a graph without isolated nodes
    (otherwise the walk's long-run distribution is undefined).
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0 and (g.n == 0 or g.degrees.min() == 0):
        raise ValueError("alpha=0 with an isolated node: stationary law undefined")
    denom = 2.0 * g.m_edges + g.n * alpha
    return StationaryDist(alpha, (g.degrees + alpha) / denom)


def jump_probability(g: Graph, alpha: float) -> float:
    """Steady-state probability that a step is a jump: n*alpha/(2|E|+n*alpha)."""
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0:
        return 0.0
    return g.n * alpha / (2.0 * g.m_edges + g.n * alpha)


def expected_return_time_max(g: Graph, alpha: float) -> float:
    """Expected return time to the largest-degree node, 1/pi_max."""
    pi = stationary(g, alpha)
    return 1.0 / pi.max_prob()


def return_time_from_constants(n: float, avg_degree: float, alpha: float,
                               d_max: float) -> float:
    """Return-time formula (2|E|+n*alpha)/(d_max+alpha) with 2|E| = n*avg_degree.

    Convenience for checking published summary figures without the graph.
    """
    return (n * avg_degree + n * alpha) / (d_max + alpha)


def transition_matrix(g: Graph, alpha: float, dense_cap: int = 2000) -> np.ndarray:
    """Dense one-step kernel: p_ij = (alpha/n + [i~j]) / (d_i + alpha)."""
    if g.n > dense_cap:
        raise ValueError(
            f"n={g.n} exceeds dense cap {dense_cap}; use Monte Carlo instead")
    if alpha == 0.0 and g.degrees.min() == 0:
        raise ValueError("alpha=0 with an isolated node: kernel undefined")
    n = g.n
    P = np.full((n, n), alpha / n)
    rows = np.repeat(np.arange(n), g.degrees)
    P[rows, g.neighbors] += 1.0
    P /= (g.degrees + alpha)[:, None]
    return P


def _reaches_target(g: Graph, target: int) -> bool:
    """True when every node can reach `target` along edges (alpha = 0 case)."""
    seen = np.zeros(g.n, dtype=bool)
    seen[target] = True
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in g.neighbors_of(u):
            if not seen[v]:
                seen[v] = True
                queue.append(int(v))
    return bool(seen.all())


def hitting_time_exact(g: Graph, alpha: float, target: int,
                       nu: int | np.ndarray | None = None,
                       dense_cap: int = 2000) -> float:
    """Exact expected hitting time to `target` by a dense linear solve.

    Solves (I - P_t) h = 1 where P_t is the kernel with the target's row
    and column removed, then averages h under the initial distribution.

    Parameters
    ----------
    nu : None for the uniform initial distribution, an int for a fixed
        start node, or a length-n probability vector. Mass on the target
        contributes hitting time 0.
    dense_cap : refuse graphs larger than this (the solve is O(n^3)).
    """
    if not 0 <= target < g.n:
        raise IndexError(f"target {target} out of range [0, {g.n})")
    if g.n > dense_cap:
        raise ValueError(
            f"n={g.n} exceeds dense cap {dense_cap}; use Monte Carlo instead")
    if alpha == 0.0:
        if g.degrees.min() == 0 or not _reaches_target(g, target):
            raise UnreachableTargetError(
                "unreachable target: alpha=0 and the graph does not connect "
                "every node to the target")
    P = transition_matrix(g, alpha, dense_cap=dense_cap)
    idx = np.delete(np.arange(g.n), target)
    A = np.eye(g.n - 1) - P[np.ix_(idx, idx)]
    b = np.ones(g.n - 1)
    try:
        h = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise UnreachableTargetError(f"singular hitting-time system: {exc}") from exc
    if not np.all(np.isfinite(h)) or np.max(np.abs(A @ h - b)) > 1e-6 * max(1.0, np.abs(h).max()):
        raise UnreachableTargetError("singular hitting-time system: solve did not converge")

    if nu is None:
        return float(h.sum() / g.n)
    if np.isscalar(nu) or isinstance(nu, (int, np.integer)):
        start = int(nu)
        if not 0 <= start < g.n:
            raise IndexError(f"start node {start} out of range [0, {g.n})")
        if start == target:
            return 0.0
        pos = start - 1 if start > target else start
        return float(h[pos])
    nu = np.asarray(nu, dtype=np.float64)
    if nu.shape != (g.n,):
        raise ValueError(f"nu must have length n={g.n}")
    if abs(nu.sum() - 1.0) > 1e-9 or nu.min() < 0.0:
        raise ValueError("nu must be a probability vector")
    return float(nu[idx] @ h)


def hitting_time_asymptotic(g: Graph, alpha: float) -> float:
    """Leading-term expected hitting time to the top-degree node.

    (sum of the other degrees + (n-1)*alpha) / (d_max + 2*alpha*(1-1/n)),
    valid from any initial distribution; the vanishing remainder is not
    computed. The target is the unique max-degree node under the
    (-degree, id) tie rule.
    """
    if g.n < 2:
        raise ValueError("need at least 2 nodes")
    top = exact_top_k(g, 1)[0]
    num = float(g.degrees.sum() - top.degree) + (g.n - 1) * alpha
    den = top.degree + 2.0 * alpha * (1.0 - 1.0 / g.n)
    return num / den


@dataclass(frozen=True)
class EvtPrediction:
    """Predicted largest degrees and their normalizing constants.

    d1 is the predicted maximum; dj[i] predicts the (i+2)-th largest, so
    dj covers ranks 2..k. delta = 1/gamma; a_n and b_n are the usual
    extreme-value normalizing sequences for the Pareto tail.
    """

    d1: float
    dj: np.ndarray
    delta: float
    a_n: float
    b_n: float

    def degree_at_rank(self, j: int) -> float:
        if j < 1:
            raise ValueError(f"rank must be >= 1, got {j}")
        if j == 1:
            return self.d1
        return float(self.dj[j - 2])


_MAX_VARIANTS = ("median", "mode", "mean")


def evt_predict(tail: ParetoTail, n: int, k: int,
                max_variant: str = "median") -> EvtPrediction:
    """Predict the k largest degrees of n i.i.d. Pareto-tailed draws.

    For ranks j = 2..k the prediction is the high quantile at exceedance
    (j-1)/n:  n^(1/gamma) * [C^(1/gamma) (j-1)^(-1/gamma) - C^(1/gamma) + 1].
    The maximum replaces (j-1) with a location statistic of the Frechet
    limit; the default is the median, log(2) (natural log), the variant
    flag switches to the mode or the mean, which are documented as less
    robust and are not the tested path.
    """
    gamma, c = tail.gamma, tail.c
    if gamma <= 1.0:
        raise ValueError(f"gamma must be > 1 (finite mean), got {gamma}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if max_variant not in _MAX_VARIANTS:
        raise ValueError(f"max_variant must be one of {_MAX_VARIANTS}")
    delta = 1.0 / gamma
    n_d = float(n) ** delta
    c_d = c ** delta
    if max_variant == "median":
        factor = math.log(2.0) ** (-delta)
    elif max_variant == "mode":
        factor = (1.0 + delta) ** (-delta)
    else:
        factor = math.gamma(1.0 - delta)
    d1 = n_d * (c_d * factor - c_d + 1.0)
    ranks = np.arange(2, k + 1, dtype=np.float64)
    dj = n_d * (c_d * (ranks - 1.0) ** (-delta) - c_d + 1.0)
    return EvtPrediction(d1=d1, dj=dj, delta=delta,
                         a_n=delta * c_d * n_d, b_n=c_d * n_d)


def poisson_error_bound(pis, m: int) -> float:
    """Upper bound on the probability of missing a true top-k node.

    2 * (1 - prod_j (1 - exp(-m * pi_j))) for the given top-k stationary
    probabilities. The raw value can exceed 1; clamp only for display.
    """
    pis = np.asarray(pis, dtype=np.float64)
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if np.any(pis <= 0.0) or np.any(pis >= 1.0):
        raise ValueError("stationary probabilities must lie strictly in (0, 1)")
    return float(2.0 * (1.0 - np.prod(1.0 - np.exp(-float(m) * pis))))


def expected_correct_count(pis, m: int, mode: str = "exact") -> float:
    """Expected number of true top-k nodes seen in m i.i.d. samples.

    mode="exact" evaluates sum_j (1 - (1-pi_j)^m); mode="poisson" its
    Poisson approximation sum_j (1 - exp(-m*pi_j)).
    """
    pis = np.asarray(pis, dtype=np.float64)
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if mode == "exact":
        return float(np.sum(1.0 - (1.0 - pis) ** float(m)))
    if mode == "poisson":
        return float(np.sum(1.0 - np.exp(-float(m) * pis)))
    raise ValueError(f"mode must be 'exact' or 'poisson', got {mode!r}")
