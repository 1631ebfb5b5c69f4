"""Acceptance suite: every criterion at its stated tolerance.

Each criterion's workload runs once in a module-scoped fixture. All algorithm
runs go through the audited harness entry point and their audit reports are
collected for the model-audit criterion (A9).
"""

import math
import statistics
import time

import pytest

from semistream import (
    SQRT2_MINUS_1,
    ArrivalOrder,
    PrngState,
    approximation_floor,
    count_3_augmentable,
    gen_half_trap,
    gen_perfect_plus_noise,
    max_matching,
    prng_next,
    sample_vertex_subset,
    uniform_order,
)
from semistream import harness
from semistream.algorithms import random_subset_greedy
from semistream.oracle import is_maximal

from support import brute_force_max_matching_size, corpus_orders, random_corpus, replay_is_maximal, tiny_corpus

pytestmark = pytest.mark.acceptance

HALF_TRAP_SIZES = (2, 10, 100, 1000)

# criterion -> list of (algorithm, declared passes, AuditReport, edge budget)
AUDIT_LOG: dict[str, list] = {}


def audited(criterion, algorithm, graph, order, params=None, fn=None, passes=None):
    """Run through the harness and log the audit report."""
    result, report, _ = harness.run_algorithm(fn or algorithm, graph, order, params, passes=passes)
    declared = passes if fn is not None else harness.ALGORITHMS[algorithm].passes
    AUDIT_LOG.setdefault(criterion, []).append((algorithm, declared, report, harness.edge_budget(graph)))
    return result


def mean(xs):
    total = 0.0
    for x in xs:
        total += x
    return total / len(xs)


@pytest.fixture(scope="module")
def corpus():
    """200 random instances (n_a + n_b <= 200) with their optimum and 5 orders each."""
    out = []
    for g in random_corpus(200):
        out.append((g, len(max_matching(g)), corpus_orders(g, 5)))
    return out


@pytest.fixture(scope="module")
def a1(corpus):
    t0 = time.perf_counter()
    runs, violations = 0, []
    for lam in (2, 3, 4):
        for gi, (g, opt, orders) in enumerate(corpus):
            for oi, order in enumerate(orders):
                s = audited("A1", "semi", g, order, {"lambda": lam})
                runs += 1
                if (lam + 1) * len(s.covered_a()) < lam * opt:
                    violations.append((lam, gi, oi, len(s.covered_a()), opt))
    return runs, violations, time.perf_counter() - t0


@pytest.fixture(scope="module")
def a2(corpus):
    t0 = time.perf_counter()
    floor = approximation_floor(3)
    assert floor == 0.5 + 1 / 52
    runs, violations, worst = 0, [], math.inf
    cases = [(g, opt, order) for g, opt, orders in corpus for order in orders]
    for n in HALF_TRAP_SIZES:
        g, order = gen_half_trap(n)
        cases.append((g, 2 * n, order))
    for i, (g, opt, order) in enumerate(cases):
        out = audited("A2", "two_pass_det", g, order, {"lambda": 3})
        runs += 1
        if opt:
            r = len(out) / opt
            worst = min(worst, r)
            if r < floor:
                violations.append((i, len(out), opt))
    return runs, violations, worst, time.perf_counter() - t0


@pytest.fixture(scope="module")
def a3():
    t0 = time.perf_counter()
    g, order = gen_half_trap(1000)
    opt = len(max_matching(g))
    ratios = []
    for seed in range(500):
        out = audited("A3", "two_pass_rand", g, order, {"p": SQRT2_MINUS_1, "sample_seed": seed})
        ratios.append(len(out) / opt)
    return mean(ratios), statistics.stdev(ratios), time.perf_counter() - t0


A4_PS = (0.25, 0.5, SQRT2_MINUS_1, 1.0)


@pytest.fixture(scope="module")
def a4():
    t0 = time.perf_counter()
    g = gen_perfect_plus_noise(1000, 3, 1)
    opt = len(max_matching(g))
    orders = {
        "identity": ArrivalOrder.identity(g.m),
        "reversed": ArrivalOrder(tuple(range(g.m - 1, -1, -1))),
        "shuffled": uniform_order(g.m, 2024),
    }
    rows = []
    for p in A4_PS:
        for name, order in orders.items():
            sizes = []
            for seed in range(500):
                sample = sample_vertex_subset(g.n_a, p, seed)
                m = audited(
                    "A4", "subset_greedy", g, order,
                    fn=lambda src, _params, s=sample: random_subset_greedy(src, s), passes=1,
                )
                sizes.append(len(m))
            target = 0.98 * (p / (1 + p)) * opt
            rows.append((p, name, mean(sizes), target))
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def a5():
    t0 = time.perf_counter()
    g, _ = gen_half_trap(2000)
    opt = len(max_matching(g))
    ratios = []
    for seed in range(300):
        out = audited("A5", "one_pass", g, uniform_order(g.m, seed))
        ratios.append(len(out) / opt)
    return mean(ratios), statistics.stdev(ratios), time.perf_counter() - t0


@pytest.fixture(scope="module")
def a6():
    rows = []
    for n in HALF_TRAP_SIZES:
        g, order = gen_half_trap(n)
        m = audited("A6", "greedy", g, order)
        rows.append((n, len(m), len(m) / len(max_matching(g)), replay_is_maximal(order.apply(g.edges), m)))
    return rows


@pytest.mark.acceptance("A1", "semi coverage |A(S)| >= lam/(lam+1) opt")
def test_a1_semi_coverage(a1, record_property):
    runs, violations, secs = a1
    record_property("detail", f"{runs} runs, {len(violations)} violations, {secs:.1f}s")
    assert runs == 3 * 200 * 5
    assert violations == []
    assert secs < 60


@pytest.mark.acceptance("A2", "two-pass deterministic ratio >= 1/2 + 1/52")
def test_a2_deterministic_floor(a2, record_property):
    runs, violations, worst, secs = a2
    record_property("detail", f"{runs} runs, worst ratio {worst:.4f}, {secs:.1f}s")
    assert runs == 200 * 5 + len(HALF_TRAP_SIZES)
    assert violations == []
    assert secs < 60


@pytest.mark.acceptance("A3", "two-pass randomized mean ratio >= 0.515")
def test_a3_randomized_expectation(a3, record_property):
    mu, sd, secs = a3
    record_property("detail", f"mean {mu:.4f}, sd {sd:.4f}, {secs:.1f}s")
    assert mu >= 0.515
    assert secs < 120


@pytest.mark.acceptance("A4", "random-subset greedy mean >= 0.98 p/(1+p) opt")
def test_a4_subset_greedy_expectation(a4, record_property):
    rows, secs = a4
    slack = min(got / target for _, _, got, target in rows)
    record_property("detail", f"{len(rows)} (p, order) cells, min mean/target {slack:.3f}, {secs:.1f}s")
    failing = [row for row in rows if row[2] < row[3]]
    assert failing == []
    assert secs < 180


@pytest.mark.acceptance("A5", "one-pass random order mean ratio >= 0.502")
def test_a5_one_pass_expectation(a5, record_property):
    mu, sd, secs = a5
    record_property("detail", f"mean {mu:.4f}, sd {sd:.4f}, {secs:.1f}s")
    assert mu >= 0.505 - 0.003
    assert secs < 300


@pytest.mark.acceptance("A6", "greedy on adversarial half_trap(n) is exactly n")
def test_a6_greedy_tightness(a6, record_property):
    record_property("detail", ", ".join(f"n={n}: {size}" for n, size, _, _ in a6))
    for n, size, ratio, maximal in a6:
        assert size == n
        assert ratio == 0.5
        assert maximal


@pytest.mark.acceptance("A7", "|M & M*| <= 2|M| - |M*| and k3 >= 2|M*| - 3|M| for greedy vs oracle")
def test_a7_structural_bounds(corpus, record_property):
    pairs, bad1, bad2 = 0, [], []
    for gi, (g, _, orders) in enumerate(corpus):
        mstar = max_matching(g)
        for oi, order in enumerate(orders):
            m = harness.alg.greedy(list(order.apply(g.edges)), n_a=g.n_a, n_b=g.n_b)
            assert is_maximal(g, m)
            pairs += 1
            if len(m.edges & mstar.edges) > 2 * len(m) - len(mstar):
                bad1.append((gi, oi))
            if count_3_augmentable(m, mstar) < 2 * len(mstar) - 3 * len(m):
                bad2.append((gi, oi))
    record_property("detail", f"{pairs} pairs, {len(bad1)} + {len(bad2)} violations")
    assert pairs == 1000
    assert bad1 == [] and bad2 == []


@pytest.mark.acceptance("A8", "oracle equals exhaustive enumeration on n_a + n_b <= 10")
def test_a8_oracle_equivalence(record_property):
    t0 = time.perf_counter()
    graphs = tiny_corpus(1000)
    mismatches = [i for i, g in enumerate(graphs) if len(max_matching(g)) != brute_force_max_matching_size(g)]
    secs = time.perf_counter() - t0
    record_property("detail", f"{len(graphs)} graphs, {len(mismatches)} mismatches, {secs:.1f}s")
    assert all(g.n <= 10 for g in graphs)
    assert mismatches == []
    assert secs < 60


@pytest.mark.acceptance("A9", "every A1-A6 run within declared passes and 4(n_a+n_b) edges")
def test_a9_model_audits(a1, a2, a3, a4, a5, a6, record_property):
    total, bad = 0, []
    for criterion in ("A1", "A2", "A3", "A4", "A5", "A6"):
        runs = AUDIT_LOG.get(criterion, [])
        assert runs, f"no audited runs recorded for {criterion}"
        for algorithm, declared, report, budget in runs:
            total += 1
            if (
                report.passes_used != declared
                or declared not in (1, 2)
                or report.peak_retained_edges > budget
                or not report.per_edge_work_bound_ok
            ):
                bad.append((criterion, algorithm, report))
    record_property("detail", f"{total} audited runs, {len(bad)} violations")
    assert bad == []


@pytest.mark.acceptance("A10", "byte-identical CSV on rerun; prng seed 0 reference value")
def test_a10_reproducibility(record_property):
    value, _ = prng_next(PrngState(0))
    assert value == 0xE220A8397B1DCDAF
    specs = [
        {"algorithm": "greedy", "generator": "half_trap", "n": 100, "order": "adversarial", "trials": 1},
        {"algorithm": "one_pass", "generator": "half_trap", "n": 200, "order": "uniform",
         "order_seeds": [1, 2, 3], "trials": 3},
        {"algorithm": "subset_greedy", "generator": "perfect_plus_noise", "n": 300, "d": 3, "graph_seed": 4,
         "sample_seeds": [5, 6], "trials": 2, "p": 0.5},
        {"algorithm": "two_pass_rand", "generator": "half_trap", "n": 300, "order": "adversarial",
         "sample_seeds": [7, 8, 9], "trials": 3},
        {"algorithm": "semi", "generator": "random_bipartite", "n_a": 40, "n_b": 50, "m": 400, "graph_seed": 2,
         "order": "uniform", "order_seeds": [11, 12], "trials": 2, "lambda": 2},
        {"algorithm": "two_pass_det", "generator": "random_bipartite", "n_a": 60, "n_b": 60, "m": 500,
         "graph_seed": 3, "trials": 1},
    ]
    for raw in specs:
        first = harness.to_csv(*harness.run(harness.ExperimentSpec.from_dict(raw)))
        second = harness.to_csv(*harness.run(harness.ExperimentSpec.from_dict(raw)))
        assert first.encode() == second.encode(), raw["algorithm"]
    record_property("detail", f"{len(specs)} specs rerun, seed 0 -> {value:#018x}")
