"""Random walk with uniform jumps, plus near-i.i.d. sample streams.

One step from node i either jumps, with probability alpha/(d_i + alpha),
to a node chosen uniformly among all n (the current node included), or
moves to a uniform neighbor of i. This two-stage draw realizes exactly the
kernel p_ij = (alpha/n + [i~j]) / (d_i + alpha) without materializing any
matrix rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Union

import numpy as np

from .graph import Graph

_BLOCK = 4096


class WalkStuckError(RuntimeError):
    """Walk cannot leave a zero-degree node when the jump rate is zero."""


@dataclass(frozen=True)
class EveryStep:
    """Emit every visited node."""


@dataclass(frozen=True)
class Thinned:
    """Skip a transient, then keep each visit independently with probability q."""

    transient: int = 100
    q: float = 0.5

    def __post_init__(self):
        if self.transient < 0:
            raise ValueError(f"transient must be >= 0, got {self.transient}")
        if not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must be in (0, 1], got {self.q}")


Mode = Union[EveryStep, Thinned]


@dataclass(frozen=True)
class WalkConfig:
    alpha: float
    seed: int | tuple = 0
    max_steps: int = 1_000_000
    mode: Mode = EveryStep()

    def __post_init__(self):
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


class Sample(NamedTuple):
    node: int
    step_index: int  # raw walk step at which the node was visited


class WalkState:
    """Mutable cursor of a single walk; confine each instance to one thread."""

    __slots__ = ("current", "steps_taken", "jumps_taken", "rng", "_buf", "_pos")

    def __init__(self, current: int, rng: np.random.Generator):
        self.current = current
        self.steps_taken = 0
        self.jumps_taken = 0
        self.rng = rng
        self._buf: list[float] = []
        self._pos = 0

    @classmethod
    def start(cls, g: Graph, cfg: WalkConfig, start: int | None = None) -> "WalkState":
        """State at a fixed node, or at a uniform node when start is None."""
        rng = np.random.default_rng(cfg.seed)
        cur = int(rng.integers(g.n)) if start is None else start
        if not 0 <= cur < g.n:
            raise IndexError(f"start node {cur} out of range [0, {g.n})")
        return cls(cur, rng)

    def _uniform(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = self.rng.random(_BLOCK).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u


def step(g: Graph, s: WalkState, alpha: float) -> int:
    """Advance the walk one step and return the new current node."""
    cur = s.current
    d = int(g.degrees[cur])
    if d == 0 and alpha == 0.0:
        raise WalkStuckError("stuck: zero degree, zero jump rate")
    p_jump = alpha / (d + alpha)
    r = s._uniform()
    if r < p_jump:
        # reuse the branch uniform: r/p_jump is uniform given the jump
        nxt = min(int(r / p_jump * g.n), g.n - 1)
        s.jumps_taken += 1
    else:
        idx = min(int((r - p_jump) / (1.0 - p_jump) * d), d - 1)
        nxt = int(g.neighbors[g.offsets[cur] + idx])
    s.current = nxt
    s.steps_taken += 1
    return nxt


class _Tables:
    """Plain-list views of a graph for the hot walking loops."""

    __slots__ = ("n", "offsets", "neighbors", "p_jump")

    def __init__(self, g: Graph, alpha: float):
        self.n = g.n
        self.offsets = g.offsets.tolist()
        self.neighbors = g.neighbors.tolist()
        denom = g.degrees + alpha
        # sentinel -1 marks zero-degree nodes with alpha == 0 (walk is stuck)
        p = np.full(g.n, -1.0)
        ok = denom > 0.0
        p[ok] = alpha / denom[ok]
        self.p_jump = p.tolist()


def _walk_to_target(t: _Tables, rng: np.random.Generator, start: int,
                    target: int, max_steps: int) -> int | None:
    """Steps until the first visit to target, or None on timeout."""
    if start == target:
        return 0
    cur = start
    steps = 0
    n = t.n
    offsets, neighbors, p_jump = t.offsets, t.neighbors, t.p_jump
    while steps < max_steps:
        block = rng.random(min(_BLOCK, max_steps - steps)).tolist()
        for r in block:
            pj = p_jump[cur]
            if r < pj:
                cur = min(int(r / pj * n), n - 1)
            else:
                if pj < 0.0:
                    raise WalkStuckError("stuck: zero degree, zero jump rate")
                lo = offsets[cur]
                d = offsets[cur + 1] - lo
                cur = neighbors[lo + min(int((r - pj) / (1.0 - pj) * d), d - 1)]
            steps += 1
            if cur == target:
                return steps
    return None


def _visit_iter(t: _Tables, rng: np.random.Generator, start: int,
                max_steps: int) -> Iterator[tuple[int, int]]:
    """Yield (node, raw_step) for every step of the walk, 1-based steps."""
    cur = start
    steps = 0
    n = t.n
    offsets, neighbors, p_jump = t.offsets, t.neighbors, t.p_jump
    while steps < max_steps:
        block = rng.random(min(_BLOCK, max_steps - steps)).tolist()
        for r in block:
            pj = p_jump[cur]
            if r < pj:
                cur = min(int(r / pj * n), n - 1)
            else:
                if pj < 0.0:
                    raise WalkStuckError("stuck: zero degree, zero jump rate")
                lo = offsets[cur]
                d = offsets[cur + 1] - lo
                cur = neighbors[lo + min(int((r - pj) / (1.0 - pj) * d), d - 1)]
            steps += 1
            yield cur, steps


def _visit_kept_iter(t: _Tables, move_rng: np.random.Generator,
                     keep_rng: np.random.Generator, start: int,
                     max_steps: int, mode: Mode) -> Iterator[tuple[int, int, bool]]:
    """Every visit as (node, raw_step, kept); kept marks sampling survivors.

    Thinning uniforms come from their own stream, so Thinned(q=1,
    transient=0) keeps exactly the EveryStep visit sequence.
    """
    visits = _visit_iter(t, move_rng, start, max_steps)
    if isinstance(mode, EveryStep):
        for node, raw in visits:
            yield node, raw, True
        return
    keep: list[float] = []
    pos = 0
    for node, raw in visits:
        if raw <= mode.transient:
            yield node, raw, False
            continue
        if pos >= len(keep):
            keep = keep_rng.random(_BLOCK).tolist()
            pos = 0
        u = keep[pos]
        pos += 1
        yield node, raw, u < mode.q


def _kept_iter(t: _Tables, move_rng: np.random.Generator,
               keep_rng: np.random.Generator, start: int,
               max_steps: int, mode: Mode) -> Iterator[tuple[int, int]]:
    """Visits surviving the sampling mode, as (node, raw_step)."""
    for node, raw, kept in _visit_kept_iter(t, move_rng, keep_rng, start,
                                            max_steps, mode):
        if kept:
            yield node, raw


def walk_until_hit(g: Graph, cfg: WalkConfig, start: int | None,
                   target: int) -> int | None:
    """Number of steps until the walk first visits `target`.

    start=None draws the initial node uniformly. Returns 0 when the start
    already is the target, and None when max_steps elapse without a hit
    (the target may be unreachable when alpha == 0).
    """
    if not 0 <= target < g.n:
        raise IndexError(f"target {target} out of range [0, {g.n})")
    rng = np.random.default_rng(cfg.seed)
    s0 = int(rng.integers(g.n)) if start is None else start
    if not 0 <= s0 < g.n:
        raise IndexError(f"start node {s0} out of range [0, {g.n})")
    return _walk_to_target(_Tables(g, cfg.alpha), rng, s0, target, cfg.max_steps)


def _stream_rngs(seed) -> tuple[np.random.Generator, np.random.Generator,
                                np.random.Generator]:
    """Independent (start, move, keep) generators derived from one seed."""
    ss = np.random.SeedSequence(seed)
    start_ss, move_ss, keep_ss = ss.spawn(3)
    return (np.random.default_rng(start_ss), np.random.default_rng(move_ss),
            np.random.default_rng(keep_ss))


def sample_stream(g: Graph, cfg: WalkConfig, start: int | None = None) -> Iterator[Sample]:
    """Stream of Sample(node, raw step index) under cfg.mode.

    EveryStep emits each visited node; Thinned skips the transient and then
    keeps each visit independently with probability q. At most
    cfg.max_steps raw steps are walked either way.
    """
    start_rng, move_rng, keep_rng = _stream_rngs(cfg.seed)
    s0 = int(start_rng.integers(g.n)) if start is None else start
    if not 0 <= s0 < g.n:
        raise IndexError(f"start node {s0} out of range [0, {g.n})")
    tables = _Tables(g, cfg.alpha)
    for node, raw in _kept_iter(tables, move_rng, keep_rng, s0,
                                cfg.max_steps, cfg.mode):
        yield Sample(node, raw)
