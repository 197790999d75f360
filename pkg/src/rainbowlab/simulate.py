"""Monte Carlo estimates for the randomly perturbed model ``G ∪ G(n, p)``.

Trial ``i`` of an experiment with master seed ``s`` draws from the stream
``numpy.random.default_rng([s, i])``: one uniform per vertex pair, in
lexicographic pair order, and the pair becomes an edge iff its uniform is
below ``p``.  A sweep reuses those uniforms across the whole grid (common
random numbers), so every trial's graph grows monotonically with ``p``.
Random seeds are drawn once per experiment from ``default_rng([s, SEED_STREAM])``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable, Sequence, TextIO

import numpy as np

from .constructions import balanced_seed
from .errors import DegenerateRecordError, ParameterError
from .graph import Graph, build, load_graph, read_graph
from .solver import Budget, Status, decide_arrow

SEED_STREAM = 2**32
WILSON_Z = 1.959963984540054
CSV_COLUMNS = ("p", "trials", "decided", "successes", "indeterminates", "estimate", "ci_low", "ci_high")


class SeedSpec:
    """A recipe for the dense seed graph."""

    def graph(self, rng: np.random.Generator | None = None) -> Graph:
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.spec_string()


@dataclass(frozen=True)
class CompleteBipartiteHalf(SeedSpec):
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("seed needs n >= 2")

    def graph(self, rng=None) -> Graph:
        return balanced_seed(self.n)

    def spec_string(self) -> str:
        return f"half({self.n})"


@dataclass(frozen=True)
class DenseBipartiteRandom(SeedSpec):
    """Sides as in the balanced seed, each cross pair present with probability ``d``."""

    n: int
    d: float

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("seed needs n >= 2")
        if not 0 < self.d <= 1:
            raise ParameterError(f"density must lie in (0, 1], got {self.d}")

    def graph(self, rng=None) -> Graph:
        if rng is None:
            raise ParameterError("a random seed graph needs an rng")
        a = self.n // 2
        pairs = [(u, v) for u in range(a) for v in range(a, self.n)]
        keep = rng.random(len(pairs)) < self.d
        return Graph.from_edges(self.n, [e for e, k in zip(pairs, keep) if k], [0] * a + [1] * (self.n - a))

    def spec_string(self) -> str:
        return f"dense({self.n},{self.d})"


@dataclass(frozen=True)
class FromFile(SeedSpec):
    path: str

    def graph(self, rng=None) -> Graph:
        return read_graph(self.path)

    def spec_string(self) -> str:
        return f"file({self.path})"


@dataclass(frozen=True)
class FixedGraph(SeedSpec):
    """A seed given directly as a graph spec string such as ``Kb(3,3)``."""

    spec: str

    def graph(self, rng=None) -> Graph:
        return build(self.spec)

    def spec_string(self) -> str:
        return self.spec


def parse_seed(text: str) -> SeedSpec:
    """``half(n)``, ``dense(n,d)``, ``file(path)``, an existing path, or a graph spec."""
    t = text.strip()
    if t.startswith("half(") and t.endswith(")"):
        return CompleteBipartiteHalf(int(t[5:-1]))
    if t.startswith("dense(") and t.endswith(")"):
        n, d = t[6:-1].split(",")
        return DenseBipartiteRandom(int(n), float(d))
    if t.startswith("file(") and t.endswith(")"):
        return FromFile(t[5:-1])
    if os.path.exists(t):
        return FromFile(t)
    load_graph(t)
    return FixedGraph(t)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    return p


def pair_list(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def perturb(seed: Graph, uniforms: np.ndarray, p: float) -> Graph:
    """Seed plus every pair whose uniform falls below ``p``; sides are kept."""
    pairs = pair_list(seed.n)
    added = [pairs[i] for i in np.flatnonzero(uniforms < p)]
    return Graph(seed.n, seed.edges | frozenset(added), seed.sides, seed.name)


def sample_perturbation(seed: SeedSpec | Graph, p: float, rng: np.random.Generator) -> Graph:
    p = _check_p(p)
    g = seed.graph(rng) if isinstance(seed, SeedSpec) else seed
    return perturb(g, rng.random(g.n * (g.n - 1) // 2), p)


def trial_rng(rng_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([rng_seed, trial])


def wilson_interval(successes: int, decided: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval, clamped so that ``0 <= low <= k/n <= high <= 1``."""
    if decided <= 0:
        raise ParameterError("Wilson interval needs at least one decided trial")
    est = successes / decided
    z2 = z * z
    denom = 1 + z2 / decided
    center = (est + z2 / (2 * decided)) / denom
    half = z * math.sqrt(est * (1 - est) / decided + z2 / (4 * decided * decided)) / denom
    return max(0.0, min(est, center - half)), min(1.0, max(est, center + half))


@dataclass(frozen=True)
class ExperimentRecord:
    seed_spec: str
    n: int
    p: float
    pattern: str
    trials: int
    successes: int
    failures: int
    indeterminates: int
    rng_seed: int
    estimate: float
    ci_low: float
    ci_high: float
    budget_nodes: int | None
    budget_seconds: float | None
    mode: str
    config: dict | None = None

    @property
    def decided(self) -> int:
        return self.successes + self.failures

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "ExperimentRecord":
        return cls(**json.loads(line))

    def csv_row(self) -> dict:
        return {"p": self.p, "trials": self.trials, "decided": self.decided, "successes": self.successes,
                "indeterminates": self.indeterminates, "estimate": self.estimate,
                "ci_low": self.ci_low, "ci_high": self.ci_high}


def _record(seed: SeedSpec, n: int, p: float, pattern: Graph, outcomes: Sequence[Status], rng_seed: int,
            budget: Budget, mode: str) -> ExperimentRecord:
    succ = sum(1 for o in outcomes if o is Status.ARROWED)
    fail = sum(1 for o in outcomes if o is Status.NOT_ARROWED)
    indet = len(outcomes) - succ - fail
    if succ + fail == 0:
        raise DegenerateRecordError(f"all {len(outcomes)} trials at p={p} were indeterminate")
    lo, hi = wilson_interval(succ, succ + fail)
    return ExperimentRecord(seed.spec_string(), n, p, pattern.name or f"graph({pattern.n})", len(outcomes),
                            succ, fail, indet, rng_seed, succ / (succ + fail), lo, hi,
                            budget.nodes, budget.seconds, mode)


def _seed_graph(seed: SeedSpec, rng_seed: int) -> Graph:
    return seed.graph(np.random.default_rng([rng_seed, SEED_STREAM]))


def _trial_outcomes(args) -> list[Status]:
    seed_graph, pattern, grid, rng_seed, trial, budget, crn = args
    n = seed_graph.n
    npairs = n * (n - 1) // 2
    out = []
    if crn:
        uniforms = trial_rng(rng_seed, trial).random(npairs)
        for p in grid:
            out.append(decide_arrow(perturb(seed_graph, uniforms, p), pattern, budget).status)
    else:
        for k, p in enumerate(grid):
            uniforms = np.random.default_rng([rng_seed, trial, k]).random(npairs)
            out.append(decide_arrow(perturb(seed_graph, uniforms, p), pattern, budget).status)
    return out


def trial_outcomes(seed: SeedSpec, pattern: Graph, p_grid: Sequence[float], trials: int, rng_seed: int,
                   budget: Budget | None = None, crn: bool = True, workers: int = 1) -> list[list[Status]]:
    """Outcome matrix indexed ``[trial][grid point]``."""
    if trials < 1:
        raise ParameterError("trials must be positive")
    grid = [_check_p(p) for p in p_grid]
    budget = budget or Budget()
    g = _seed_graph(seed, rng_seed)
    jobs = [(g, pattern, grid, rng_seed, i, budget, crn) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_trial_outcomes, jobs, chunksize=max(1, trials // (4 * workers))))
    return [_trial_outcomes(job) for job in jobs]


def estimate_arrow_probability(seed: SeedSpec, p: float, pattern: Graph, trials: int, rng_seed: int,
                               budget: Budget | None = None, workers: int = 1) -> ExperimentRecord:
    """Fraction of decided trials in which the perturbed graph arrows ``pattern``.

    Indeterminate verdicts are counted separately and left out of the estimate.
    """
    budget = budget or Budget()
    rows = trial_outcomes(seed, pattern, [p], trials, rng_seed, budget, True, workers)
    n = _seed_graph(seed, rng_seed).n
    return _record(seed, n, _check_p(p), pattern, [r[0] for r in rows], rng_seed, budget, "single")


def threshold_sweep(seed: SeedSpec, pattern: Graph, p_grid: Sequence[float], trials: int, rng_seed: int,
                    budget: Budget | None = None, crn: bool = True, workers: int = 1) -> list[ExperimentRecord]:
    grid = [_check_p(p) for p in p_grid]
    if any(a > b for a, b in zip(grid, grid[1:])):
        raise ParameterError("p grid must be sorted ascending")
    budget = budget or Budget()
    rows = trial_outcomes(seed, pattern, grid, trials, rng_seed, budget, crn, workers)
    n = _seed_graph(seed, rng_seed).n
    mode = "crn" if crn else "independent"
    return [_record(seed, n, p, pattern, [r[k] for r in rows], rng_seed, budget, mode)
            for k, p in enumerate(grid)]


def write_jsonl(records: Iterable[ExperimentRecord], out: TextIO) -> None:
    for rec in records:
        out.write(rec.to_json() + "\n")


def sweep_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()
