"""
Seeded experiment runs, CSV output and per-run invariant audits.

A spec is a flat JSON object, for example::

    {"algorithm": "two_pass_rand", "generator": "half_trap", "n": 1000,
     "order": "adversarial", "trials": 3, "sample_seeds": [1, 2, 3]}

Graph source is either ``"graph": "path/to/file"`` or ``"generator"`` with
its parameters as top-level keys (``n``; ``n_a, n_b, m, graph_seed``;
``n, d, graph_seed``). ``order`` is ``"file"`` (edge-list order),
``"adversarial"`` (half_trap only) or ``"uniform"`` with one entry of
``order_seeds`` per trial. Randomized algorithms need one ``sample_seeds``
entry per trial.
"""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from dataclasses import dataclass, field, fields
from typing import Callable

from . import algorithms as alg
from .generators import gen_half_trap, gen_perfect_plus_noise, gen_random_bipartite, uniform_order
from .graph import ArrivalOrder, BipartiteGraph, SemiMatching, is_valid_matching, load_graph
from .oracle import count_3_augmentable, is_maximal, overlap_bound_holds, max_matching
from .stream import AuditReport, PassBudgetExceeded, StreamSource

__all__ = [
    "ALGORITHMS",
    "AuditViolation",
    "Check",
    "ExperimentSpec",
    "SpecError",
    "TrialRecord",
    "Aggregate",
    "edge_budget",
    "load_spec",
    "make_graph",
    "run",
    "run_algorithm",
    "to_csv",
    "verify",
    "CSV_HEADER",
]

CSV_HEADER = ["algorithm", "graph", "order_seed", "sample_seed", "matched", "opt", "ratio", "passes", "peak_edges", "ms"]

#: retained-edge budget per vertex
EDGE_BUDGET_FACTOR = 4


class SpecError(ValueError):
    """The experiment spec is malformed or inconsistent."""


class AuditViolation(RuntimeError):
    """A run broke its pass budget or retained-edge budget."""

    exit_code = 3


def edge_budget(g: BipartiteGraph) -> int:
    return EDGE_BUDGET_FACTOR * (g.n_a + g.n_b)


def _greedy(src, params):
    return alg.greedy(src.open_pass(), meter=src.meter)


def _one_pass(src, params):
    split = alg.PhaseSplit(params.get("alpha", 0.4312), params.get("beta", 0.7595))
    return alg.one_pass_random_order(src, split)


def _subset_greedy(src, params):
    p = params.get("p", alg.SQRT2_MINUS_1)
    return alg.random_subset_greedy(src, alg.sample_vertex_subset(src.n_a, p, params["sample_seed"]))


def _two_pass_rand(src, params):
    return alg.two_pass_randomized(src, params.get("p", alg.SQRT2_MINUS_1), seed=params["sample_seed"])


def _semi(src, params):
    return alg.semi(src.open_pass(), params.get("lambda", 3), meter=src.meter)


def _two_pass_det(src, params):
    return alg.two_pass_deterministic(src, params.get("lambda", 3))


@dataclass(frozen=True)
class AlgorithmEntry:
    run: Callable
    passes: int
    randomized: bool = False


ALGORITHMS: dict[str, AlgorithmEntry] = {
    "greedy": AlgorithmEntry(_greedy, 1),
    "one_pass": AlgorithmEntry(_one_pass, 1),
    "subset_greedy": AlgorithmEntry(_subset_greedy, 1, randomized=True),
    "two_pass_rand": AlgorithmEntry(_two_pass_rand, 2, randomized=True),
    "semi": AlgorithmEntry(_semi, 1),
    "two_pass_det": AlgorithmEntry(_two_pass_det, 2),
}


def matched_size(result) -> int:
    """Matching size, or ``|A(S)|`` for a semi-matching."""
    return len(result)


def ratio_of(matched: int, opt: int) -> float:
    # an empty graph is matched optimally by the empty matching
    return 1.0 if opt == 0 else matched / opt


def run_algorithm(algorithm, graph, order, params=None, passes=None):
    """Run one algorithm on an audited stream.

    ``algorithm`` is a name from :data:`ALGORITHMS` or a callable
    ``f(src, params)``; for a callable, ``passes`` declares its pass count.
    Returns ``(result, audit_report, elapsed_ms)``. A pass beyond the
    declared count raises :class:`AuditViolation`.
    """
    params = params or {}
    if isinstance(algorithm, str):
        entry = ALGORITHMS[algorithm]
        fn, passes = entry.run, entry.passes
    else:
        fn = algorithm
        if passes is None:
            raise ValueError("declare the pass count of a custom algorithm")
    src = StreamSource(graph, order, pass_budget=passes)
    t0 = time.perf_counter()
    try:
        result = fn(src, params)
    except PassBudgetExceeded as exc:
        raise AuditViolation(str(exc)) from exc
    elapsed = (time.perf_counter() - t0) * 1000.0
    return result, src.audit(), elapsed


def _audit_or_raise(report: AuditReport, passes: int, g: BipartiteGraph) -> None:
    if report.passes_used != passes:
        raise AuditViolation(f"used {report.passes_used} passes, declared {passes}")
    if report.peak_retained_edges > edge_budget(g):
        raise AuditViolation(
            f"retained {report.peak_retained_edges} edges, budget {edge_budget(g)}"
        )
    if not report.per_edge_work_bound_ok:
        raise AuditViolation("per-edge work bound exceeded")


@dataclass
class ExperimentSpec:
    algorithm: str
    trials: int
    graph: str | None = None
    generator: str | None = None
    n: int | None = None
    n_a: int | None = None
    n_b: int | None = None
    m: int | None = None
    d: int | None = None
    graph_seed: int | None = None
    order: str = "file"
    order_seeds: list = field(default_factory=list)
    sample_seeds: list = field(default_factory=list)
    alpha: float = 0.4312
    beta: float = 0.7595
    p: float = alg.SQRT2_MINUS_1
    lam: int = 3
    output: str | None = None
    timing: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise SpecError(f"unknown spec keys: {sorted(unknown)}")
        try:
            spec = cls(**d)
        except TypeError as exc:
            raise SpecError(str(exc)) from None
        spec.validate()
        return spec

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise SpecError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise SpecError(f"trials must be an integer >= 1, got {self.trials!r}")
        if (self.graph is None) == (self.generator is None):
            raise SpecError("give exactly one of 'graph' and 'generator'")
        if self.order not in ("file", "uniform", "adversarial"):
            raise SpecError(f"unknown order model {self.order!r}")
        if self.order == "adversarial" and self.generator != "half_trap":
            raise SpecError("the adversarial order is defined for the half_trap generator only")
        if self.order == "uniform" and len(self.order_seeds) < self.trials:
            raise SpecError(f"uniform order needs {self.trials} order_seeds, got {len(self.order_seeds)}")
        if ALGORITHMS[self.algorithm].randomized and len(self.sample_seeds) < self.trials:
            raise SpecError(f"{self.algorithm} needs {self.trials} sample_seeds, got {len(self.sample_seeds)}")
        try:
            alg.PhaseSplit(self.alpha, self.beta)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        if not 0.0 <= self.p <= 1.0:
            raise SpecError(f"p must lie in [0, 1], got {self.p}")
        min_lam = 2 if self.algorithm == "two_pass_det" else 1
        if self.lam < min_lam:
            raise SpecError(f"lambda must be >= {min_lam} for {self.algorithm}")

    def params(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "p": self.p, "lambda": self.lam}


def load_spec(path) -> ExperimentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise SpecError("spec file must hold a JSON object")
    return ExperimentSpec.from_dict(data)


def make_graph(spec: ExperimentSpec) -> tuple[BipartiteGraph, ArrivalOrder, str]:
    """Build or load the spec's graph; returns ``(graph, file_order, graph_id)``."""
    if spec.graph is not None:
        g, order = load_graph(spec.graph)
        return g, order, os.path.splitext(os.path.basename(spec.graph))[0]

    def need(*names):
        missing = [k for k in names if getattr(spec, k) is None]
        if missing:
            raise SpecError(f"generator {spec.generator} needs {missing}")
        return [getattr(spec, k) for k in names]

    if spec.generator == "half_trap":
        (n,) = need("n")
        g, order = gen_half_trap(n)
        return g, order, f"half_trap_n{n}"
    if spec.generator == "random_bipartite":
        n_a, n_b, m, seed = need("n_a", "n_b", "m", "graph_seed")
        g = gen_random_bipartite(n_a, n_b, m, seed)
        return g, ArrivalOrder.identity(g.m), f"random_bipartite_{n_a}x{n_b}_m{m}_s{seed}"
    if spec.generator == "perfect_plus_noise":
        n, d, seed = need("n", "d", "graph_seed")
        g = gen_perfect_plus_noise(n, d, seed)
        return g, ArrivalOrder.identity(g.m), f"perfect_plus_noise_n{n}_d{d}_s{seed}"
    raise SpecError(f"unknown generator {spec.generator!r}")


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    graph: str
    order_seed: int | None
    sample_seed: int | None
    matched: int
    opt: int
    ratio: float
    passes: int
    peak_edges: int
    ms: float | None

    def row(self) -> list[str]:
        return [
            self.algorithm,
            self.graph,
            "" if self.order_seed is None else str(self.order_seed),
            "" if self.sample_seed is None else str(self.sample_seed),
            str(self.matched),
            str(self.opt),
            repr(self.ratio),
            str(self.passes),
            str(self.peak_edges),
            "" if self.ms is None else f"{self.ms:.3f}",
        ]


@dataclass(frozen=True)
class Aggregate:
    graph: str
    trials: int
    opt: int
    mean_ratio: float
    sd_ratio: float
    min_ratio: float
    max_ratio: float

    def row(self) -> list[str]:
        # columns reused: matched=trial count, ratio=mean, passes=sd, peak_edges=min, ms=max
        return [
            "aggregate",
            self.graph,
            "",
            "",
            str(self.trials),
            str(self.opt),
            repr(self.mean_ratio),
            repr(self.sd_ratio),
            repr(self.min_ratio),
            repr(self.max_ratio),
        ]


def aggregate(records: list[TrialRecord]) -> Aggregate:
    ratios = [r.ratio for r in records]
    total = 0.0
    for x in ratios:  # fixed left-to-right summation
        total += x
    mean = total / len(ratios)
    sd = statistics.stdev(ratios) if len(ratios) > 1 else 0.0
    return Aggregate(records[0].graph, len(records), records[0].opt, mean, sd, min(ratios), max(ratios))


def run(spec: ExperimentSpec) -> tuple[list[TrialRecord], Aggregate]:
    """Execute every trial of ``spec`` in trial order.

    The optimum is computed once per graph. Any audit failure aborts the run
    with :class:`AuditViolation`.
    """
    spec.validate()
    g, file_order, graph_id = make_graph(spec)
    opt = len(max_matching(g))
    entry = ALGORITHMS[spec.algorithm]
    records = []
    for i in range(spec.trials):
        order_seed = spec.order_seeds[i] if spec.order == "uniform" else None
        order = uniform_order(g.m, order_seed) if order_seed is not None else file_order
        params = spec.params()
        sample_seed = None
        if entry.randomized:
            sample_seed = spec.sample_seeds[i]
            params["sample_seed"] = sample_seed
        result, report, ms = run_algorithm(spec.algorithm, g, order, params)
        _audit_or_raise(report, entry.passes, g)
        matched = matched_size(result)
        records.append(
            TrialRecord(
                spec.algorithm,
                graph_id,
                order_seed,
                sample_seed,
                matched,
                opt,
                ratio_of(matched, opt),
                report.passes_used,
                report.peak_retained_edges,
                ms if spec.timing else None,
            )
        )
    return records, aggregate(records)


def to_csv(records: list[TrialRecord], agg: Aggregate | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
    if agg is not None:
        w.writerow(agg.row())
    return buf.getvalue()


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""
    hard: bool = True

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def verify(graph, order, algorithm, params=None, passes=None):
    """Run ``algorithm`` under audit and check every applicable invariant.

    Returns ``(audit_report, checks)``; ``all(c.ok for c in checks)`` means
    the run is clean.
    """
    params = dict(params or {})
    if isinstance(algorithm, str):
        entry = ALGORITHMS.get(algorithm)
        if entry is None:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        declared = entry.passes
        if entry.randomized:
            params.setdefault("sample_seed", 0)
    else:
        declared = passes
    checks = []
    try:
        result, report, _ = run_algorithm(algorithm, graph, order, params, passes=declared)
    except AuditViolation as exc:
        return None, [Check("pass budget", False, str(exc))]

    budget = edge_budget(graph)
    checks.append(Check("passes", report.passes_used == declared, f"used {report.passes_used}, declared {declared}"))
    checks.append(Check("peak edges", report.peak_retained_edges <= budget, f"{report.peak_retained_edges} <= {budget}"))
    checks.append(Check("per-edge work", report.per_edge_work_bound_ok))

    mstar = max_matching(graph)
    opt = len(mstar)
    if isinstance(result, SemiMatching):
        lam = result.lam
        caps = all(d <= lam for d in result.deg_b) and all(graph.has_edge(a, b) for a, b in result)
        checks.append(Check("semi-matching degree caps", caps, f"lambda={lam}"))
        if lam >= 2:
            cover = len(result)
            checks.append(
                Check("semi coverage", cover * (lam + 1) >= lam * opt, f"|A(S)|={cover}, opt={opt}")
            )
    else:
        checks.append(Check("valid matching", is_valid_matching(graph, result), f"size {len(result)}"))
        if algorithm == "greedy":
            checks.append(Check("maximal", is_maximal(graph, result)))
        if algorithm == "two_pass_det":
            floor = alg.approximation_floor(params.get("lambda", 3))
            r = ratio_of(len(result), opt)
            checks.append(Check("ratio floor", r >= floor, f"{r:.6f} >= {floor:.6f}"))

    # the structural bounds use the plain greedy matching of the same stream
    m_g = alg.greedy(list(order.apply(graph.edges)), n_a=graph.n_a, n_b=graph.n_b)
    checks.append(Check("overlap bound", overlap_bound_holds(m_g, mstar), f"|M|={len(m_g)}, opt={opt}"))
    k3 = count_3_augmentable(m_g, mstar)
    checks.append(Check("3-augmentable bound", k3 >= 2 * opt - 3 * len(m_g), f"k3={k3} >= {2 * opt - 3 * len(m_g)}"))
    return report, checks


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
