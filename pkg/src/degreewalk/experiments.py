"""Seeded experiment harness: hitting-time trials, accuracy-vs-m curves,
and stopping-rule evaluations, all reproducible bit-for-bit from a master
seed. Each trial's randomness is a pure function of (master_seed, trial),
so execution order (or a thread pool) cannot change any row.
"""

from __future__ import annotations

import datetime as _dt
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .analytics import expected_correct_count, stationary
from .detector import detect_with_rule
from .graph import Graph, exact_top_k
from .walk import WalkConfig, _kept_iter, _stream_rngs, _Tables, _walk_to_target


@dataclass(frozen=True)
class HittingTimePlan:
    walk: WalkConfig
    runs: int
    master_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class AccuracyCurvePlan:
    walk: WalkConfig
    k: int
    m_grid: tuple[int, ...]
    runs: int
    master_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        grid = tuple(self.m_grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"m_grid must be strictly increasing, got {grid}")
        object.__setattr__(self, "m_grid", grid)


@dataclass(frozen=True)
class StoppingEvalPlan:
    walk: WalkConfig
    k: int
    rule: str
    threshold: float
    runs: int
    master_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def _trial_seed(master_seed: int, trial: int) -> tuple[int, int]:
    return (master_seed, trial)


def _map_trials(fn, runs: int, threads: int = 1) -> list:
    """Evaluate fn(trial) for trial in range(runs), rows ordered by trial."""
    if threads <= 1:
        return [fn(t) for t in range(runs)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(runs)))


# -- hitting times ----------------------------------------------------------

def run_hitting_time(g: Graph, plan: HittingTimePlan, threads: int = 1):
    """Hitting times to the max-degree node from uniform starts.

    Returns (rows, summary): one (trial, steps) row per trial with the
    string "timeout" for walks exceeding max_steps, and a summary dict
    with mean/median over completed trials plus the timeout count.
    """
    target = exact_top_k(g, 1)[0].node
    tables = _Tables(g, plan.walk.alpha)
    max_steps = plan.walk.max_steps

    def one(trial: int):
        rng = np.random.default_rng(_trial_seed(plan.master_seed, trial))
        start = int(rng.integers(g.n))
        steps = _walk_to_target(tables, rng, start, target, max_steps)
        return (trial, steps if steps is not None else "timeout")

    rows = _map_trials(one, plan.runs, threads)
    done = np.array([s for _, s in rows if s != "timeout"], dtype=np.float64)
    summary = {
        "target": target,
        "mean": float(done.mean()) if len(done) else float("nan"),
        "median": float(np.median(done)) if len(done) else float("nan"),
        "timeouts": sum(1 for _, s in rows if s == "timeout"),
        "runs": plan.runs,
    }
    return rows, summary


# -- accuracy curves --------------------------------------------------------

def run_accuracy_curve(g: Graph, plan: AccuracyCurvePlan, threads: int = 1):
    """Mean correctly-detected top-k count at each sample budget m.

    A node counts as correct when it belongs to the true top-k (ties
    id-broken); once sampled it never leaves the candidate list, so the
    per-trial count at m equals the number of true top-k nodes seen within
    the first m samples. Rows carry the Monte Carlo mean with a 95% normal
    CI plus the exact and Poisson i.i.d. predictions computed from the
    true top-k stationary probabilities.
    """
    if plan.k > g.n:
        raise ValueError(f"k={plan.k} exceeds node count n={g.n}")
    true_nodes = [r.node for r in exact_top_k(g, plan.k)]
    true_set = set(true_nodes)
    pis = stationary(g, plan.walk.alpha).probs[true_nodes]
    tables = _Tables(g, plan.walk.alpha)
    grid = plan.m_grid
    m_max = grid[-1]

    def one(trial: int):
        cfg = replace(plan.walk, seed=_trial_seed(plan.master_seed, trial))
        start_rng, move_rng, keep_rng = _stream_rngs(cfg.seed)
        start = int(start_rng.integers(g.n))
        seen: set[int] = set()
        counts = []
        gi = iter(grid)
        next_m = next(gi)
        if next_m == 0:
            counts.append(0)
            next_m = next(gi, None)
            if next_m is None:
                return counts
        m = 0
        for node, _raw in _kept_iter(tables, move_rng, keep_rng, start,
                                     cfg.max_steps, cfg.mode):
            m += 1
            if node in true_set:
                seen.add(node)
            while m == next_m:
                counts.append(len(seen))
                next_m = next(gi, None)
                if next_m is None:
                    return counts
        # stream ran out of raw steps before covering the grid
        while len(counts) < len(grid):
            counts.append(len(seen))
        return counts

    per_trial = np.array(_map_trials(one, plan.runs, threads), dtype=np.float64)
    rows = []
    for j, m in enumerate(grid):
        vals = per_trial[:, j]
        mean = float(vals.mean())
        ci = 1.96 * float(vals.std(ddof=1)) / np.sqrt(plan.runs) if plan.runs > 1 else 0.0
        rows.append((m, mean, ci,
                     expected_correct_count(pis, m, "exact"),
                     expected_correct_count(pis, m, "poisson")))
    summary = {"k": plan.k, "runs": plan.runs, "true_top_k": true_nodes}
    return rows, summary


# -- stopping-rule evaluation ------------------------------------------------

def run_stopping_eval(g: Graph, plan: StoppingEvalPlan, threads: int = 1):
    """Accuracy and cost of a stopping rule over seeded trials.

    Rows: (trial, raw_steps, samples, correct_count, full_list_correct,
    fired). Correctness is judged against the exact top-k.
    """
    if plan.k > g.n:
        raise ValueError(f"k={plan.k} exceeds node count n={g.n}")
    true_set = {r.node for r in exact_top_k(g, plan.k)}

    def one(trial: int):
        cfg = replace(plan.walk, seed=_trial_seed(plan.master_seed, trial))
        dec = detect_with_rule(g, cfg, plan.k, plan.rule, plan.threshold)
        members = dec.final_list.members()
        correct = len(members & true_set)
        full = int(true_set <= members)
        return (trial, dec.raw_steps, dec.fired_at_samples, correct, full,
                int(dec.fired))

    rows = _map_trials(one, plan.runs, threads)
    arr = np.array([(r[1], r[2], r[3], r[4], r[5]) for r in rows], dtype=np.float64)
    summary = {
        "runs": plan.runs,
        "mean_raw_steps": float(arr[:, 0].mean()),
        "mean_samples": float(arr[:, 1].mean()),
        "mean_correct": float(arr[:, 2].mean()),
        "full_list_accuracy": float(arr[:, 3].mean()),
        "fired_fraction": float(arr[:, 4].mean()),
    }
    return rows, summary


# -- CSV emission ------------------------------------------------------------

def write_csv(path, header: list[str], rows, summary: dict | None = None) -> None:
    """Write rows with a '# generated_at' stamp and an optional trailing
    '# summary' comment line. Everything except the stamp is a pure
    function of the inputs, which is what the reproducibility tests check.
    """
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# generated_at={stamp}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")
        if summary is not None:
            pairs = " ".join(f"{k}={v}" for k, v in summary.items())
            fh.write(f"# summary {pairs}\n")


def read_csv_body(path) -> str:
    """File contents minus the generated_at stamp, for byte comparisons."""
    with open(path, "r", encoding="utf-8") as fh:
        return "".join(line for line in fh if not line.startswith("# generated_at"))
