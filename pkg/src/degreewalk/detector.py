"""Top-k candidate list and hit-count stopping rules.

The detector walks the graph, keeps the k best-degree distinct nodes
visited so far, and counts how often each listed node occurs in the
(possibly thinned) sample stream. Membership updates on every visit;
hit counters count samples only, so a freshly listed node can sit at
zero hits until the sampler picks it. The three stopping rules turn the
counters into data-driven termination: rule 0 thresholds an estimated
probability that the list still misses a true top-k node, rule 1
simplifies that to a hit floor for the weakest counter, and rule 2
thresholds an estimated number of correct entries.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass

from .graph import Graph
from .walk import WalkConfig, _stream_rngs, _Tables, _visit_kept_iter


class CandidateList:
    """Running top-k buffer with per-node sample-hit counters.

    Membership is the k best seen-so-far nodes under the
    (-degree, node id) order, so on a tie with the current worst entry the
    incumbent survives unless the newcomer has the lower id. Hit counters
    count every sample occurrence of a node since the stream began
    (including samples predating its membership), kept in a
    least-recently-sampled map capped at 4k entries with listed nodes
    pinned, which bounds memory at O(k).
    """

    __slots__ = ("k", "_deg", "_hits", "_worst_key")

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self._deg: dict[int, int] = {}
        self._hits: OrderedDict[int, int] = OrderedDict()
        self._worst_key: tuple[int, int] | None = None

    def __len__(self) -> int:
        return len(self._deg)

    def __contains__(self, node: int) -> bool:
        return node in self._deg

    @property
    def is_full(self) -> bool:
        return len(self._deg) >= self.k

    def observe(self, node: int, degree: int) -> None:
        """Membership-only update for a visit that was not sampled."""
        if node in self._deg:
            return
        if len(self._deg) < self.k:
            self._deg[node] = degree
            self._refresh_worst()
            return
        key = (-degree, node)
        if key < self._worst_key:
            worst = self._worst_key[1]
            del self._deg[worst]
            self._deg[node] = degree
            self._refresh_worst()

    def update(self, node: int, degree: int) -> "CandidateList":
        """Record one sample: bump the node's hit counter, then observe."""
        hits = self._hits
        if node in hits:
            hits[node] += 1
            hits.move_to_end(node)
        else:
            hits[node] = 1
            if len(hits) > 4 * self.k:
                for old in hits:
                    if old not in self._deg:
                        del hits[old]
                        break
        self.observe(node, degree)
        return self

    def _refresh_worst(self) -> None:
        self._worst_key = max((-d, v) for v, d in self._deg.items())

    def entries(self) -> list[tuple[int, int, int]]:
        """(node, degree, hits) rows ordered best to worst."""
        ordered = sorted(self._deg.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(v, d, self._hits.get(v, 0)) for v, d in ordered]

    def members(self) -> set[int]:
        return set(self._deg)

    def member_hits(self) -> list[int]:
        return [self._hits.get(v, 0) for v in self._deg]

    def hits_of(self, node: int) -> int:
        return self._hits.get(node, 0)


@dataclass(frozen=True)
class StopDecision:
    rule: str
    threshold: float
    fired: bool
    fired_at_samples: int
    raw_steps: int
    final_list: CandidateList


def error_score(hits) -> float:
    """Estimated probability bound that the list misses a true top-k node:
    2 * (1 - prod_i (1 - exp(-hits_i)))."""
    prod = 1.0
    for x in hits:
        prod *= 1.0 - math.exp(-x)
    return 2.0 * (1.0 - prod)


def min_hit_error_score(hits) -> float:
    """Coarser bound using only the weakest counter:
    2 * (1 - (1 - exp(-min hits))^k); always >= error_score(hits)."""
    hits = list(hits)
    return 2.0 * (1.0 - (1.0 - math.exp(-min(hits))) ** len(hits))


def coverage_score(hits) -> float:
    """Estimated number of correct entries: sum_i (1 - exp(-hits_i));
    zero-hit entries contribute 0."""
    return sum(1.0 - math.exp(-x) for x in hits)


def stopping_rule_0(lst: CandidateList, a_bar: float) -> bool:
    """Fire when the full-product error estimate drops to a_bar."""
    if not lst.is_full:
        return False
    return error_score(lst.member_hits()) <= a_bar


def rule1_threshold(k: int, a_bar: float) -> int:
    """Smallest natural x with (1 - exp(-x))^k >= 1 - a_bar/2."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 < a_bar < 2.0:
        raise ValueError(f"a_bar must be in (0, 2), got {a_bar}")
    goal = 1.0 - a_bar / 2.0
    x = 1
    while (1.0 - math.exp(-x)) ** k < goal:
        x += 1
    return x


def stopping_rule_1(lst: CandidateList, x0: int) -> bool:
    """Fire when every current entry has at least x0 hits."""
    if not lst.is_full:
        return False
    return min(lst.member_hits()) >= x0


def stopping_rule_2(lst: CandidateList, b_bar: float) -> bool:
    """Fire when the coverage score reaches b_bar (no fullness required)."""
    return coverage_score(lst.member_hits()) >= b_bar


_RULES = ("r0", "r1", "r2")


def _run_list(g: Graph, cfg: WalkConfig, k: int, stop_sample, stop_rule) -> StopDecision:
    """Shared detection loop: observe every visit, count sampled hits.

    stop_sample(taken) limits the sample budget; stop_rule(lst) is the
    firing predicate (never for fixed-budget runs).
    """
    lst = CandidateList(k)
    degrees = g.degrees
    start_rng, move_rng, keep_rng = _stream_rngs(cfg.seed)
    start = int(start_rng.integers(g.n))
    samples = 0
    for node, raw, kept in _visit_kept_iter(_Tables(g, cfg.alpha), move_rng,
                                            keep_rng, start, cfg.max_steps,
                                            cfg.mode):
        deg = int(degrees[node])
        if kept:
            samples += 1
            lst.update(node, deg)
            if stop_rule is not None and stop_rule(lst):
                return StopDecision("", 0.0, True, samples, raw, lst)
            if stop_sample is not None and samples >= stop_sample:
                return StopDecision("", 0.0, True, samples, raw, lst)
        else:
            lst.observe(node, deg)
    return StopDecision("", 0.0, False, samples, cfg.max_steps, lst)


def detect_fixed_m_decision(g: Graph, cfg: WalkConfig, k: int, m: int) -> StopDecision:
    """detect_fixed_m with cost accounting; fired=False when the walk's
    raw-step cap ran out before m samples arrived."""
    if k > g.n:
        raise ValueError(f"k={k} exceeds node count n={g.n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    dec = _run_list(g, cfg, k, stop_sample=m, stop_rule=None)
    return StopDecision("fixed_m", float(m), dec.fired, dec.fired_at_samples,
                        dec.raw_steps, dec.final_list)


def detect_fixed_m(g: Graph, cfg: WalkConfig, k: int, m: int) -> CandidateList:
    """Run the candidate-list walk for m samples and return the list."""
    return detect_fixed_m_decision(g, cfg, k, m).final_list


def detect_with_rule(g: Graph, cfg: WalkConfig, k: int, rule: str,
                     threshold: float) -> StopDecision:
    """Walk until the stopping rule fires or cfg.max_steps raw steps elapse.

    rule is one of "r0", "r1" (threshold is a_bar for both; r1 derives its
    hit floor x0 from it and records that) or "r2" (threshold is b_bar).
    The rule is evaluated on the empty list first, so an already-satisfied
    threshold fires at zero cost, and then after every sample. A run that
    exhausts max_steps is returned with fired=False.
    """
    if k > g.n:
        raise ValueError(f"k={k} exceeds node count n={g.n}")
    if rule not in _RULES:
        raise ValueError(f"rule must be one of {_RULES}, got {rule!r}")
    if rule == "r1":
        x0 = rule1_threshold(k, threshold)
        fires = lambda lst: stopping_rule_1(lst, x0)
        recorded = float(x0)
    elif rule == "r0":
        fires = lambda lst: stopping_rule_0(lst, threshold)
        recorded = threshold
    else:
        fires = lambda lst: stopping_rule_2(lst, threshold)
        recorded = threshold

    if fires(CandidateList(k)):
        return StopDecision(rule, recorded, True, 0, 0, CandidateList(k))
    dec = _run_list(g, cfg, k, stop_sample=None, stop_rule=fires)
    return StopDecision(rule, recorded, dec.fired, dec.fired_at_samples,
                        dec.raw_steps, dec.final_list)
