"""Pass-audited edge streams.

A :class:`StreamSource` replays a fixed ``(graph, order)`` pair one pass at a
time. It counts the passes opened, optionally enforces a pass budget, and
carries an :class:`EdgeMeter` that the algorithms charge for every edge they
keep in memory.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import ArrivalOrder, BipartiteGraph

__all__ = [
    "AuditReport",
    "EdgeMeter",
    "PassBudgetExceeded",
    "StreamSource",
    "MAX_FANOUT",
]

#: most consumers any algorithm here feeds from a single pass
MAX_FANOUT = 4


class PassBudgetExceeded(RuntimeError):
    """An algorithm tried to open more passes than the armed budget."""


class EdgeMeter:
    """Counts edges currently retained by an algorithm and the running peak."""

    __slots__ = ("current", "peak")

    def __init__(self):
        self.current = 0
        self.peak = 0

    def retain(self, k: int = 1) -> None:
        self.current += k
        if self.current > self.peak:
            self.peak = self.current

    def release(self, k: int = 1) -> None:
        self.current -= k
        if self.current < 0:
            raise RuntimeError("edge meter released more edges than it retained")


@dataclass(frozen=True)
class AuditReport:
    passes_used: int
    peak_retained_edges: int
    per_edge_work_bound_ok: bool


class EdgePass:
    """Iterator over one pass; also exposes the sizes known before streaming."""

    __slots__ = ("n_a", "n_b", "m", "_it", "_src")

    def __init__(self, src: "StreamSource"):
        self.n_a = src.n_a
        self.n_b = src.n_b
        self.m = src.m
        self._src = src
        self._it = src._edge_sequence()

    def __iter__(self):
        return self

    def __next__(self):
        edge = next(self._it)
        self._src.delivered += 1
        return edge


class StreamSource:
    """Replays ``graph.edges`` in ``order`` once per opened pass.

    ``n_a``, ``n_b`` and ``m`` are available before the first pass.
    """

    def __init__(
        self,
        graph: BipartiteGraph,
        order: ArrivalOrder | None = None,
        pass_budget: int | None = None,
        meter: EdgeMeter | None = None,
    ):
        if order is None:
            order = ArrivalOrder.identity(graph.m)
        if len(order) != graph.m:
            raise ValueError(f"order has length {len(order)}, graph has {graph.m} edges")
        self.graph = graph
        self.order = order
        self.pass_budget = pass_budget
        self.meter = meter if meter is not None else EdgeMeter()
        self.pass_count = 0
        self.delivered = 0
        self.max_fanout = 0
        # materialized once; every pass yields the same tuple
        self._sequence = tuple(graph.edges[i] for i in order.perm)

    @property
    def n_a(self) -> int:
        return self.graph.n_a

    @property
    def n_b(self) -> int:
        return self.graph.n_b

    @property
    def m(self) -> int:
        return self.graph.m

    def _edge_sequence(self):
        return iter(self._sequence)

    def open_pass(self) -> EdgePass:
        if self.pass_budget is not None and self.pass_count >= self.pass_budget:
            raise PassBudgetExceeded(
                f"pass {self.pass_count + 1} requested, budget is {self.pass_budget}"
            )
        self.pass_count += 1
        return EdgePass(self)

    def feed(self, *consumers) -> None:
        """Open one pass and hand every edge, in order, to each consumer.

        Each consumer is called as ``consumer(a, b)`` exactly once per edge.
        """
        self.max_fanout = max(self.max_fanout, len(consumers))
        it = self.open_pass()
        if len(consumers) == 1:
            (c,) = consumers
            for a, b in self._sequence:
                c(a, b)
        else:
            for a, b in self._sequence:
                for c in consumers:
                    c(a, b)
        # the fast loops above read the tuple directly; account for it here
        self.delivered += it.m

    def audit(self) -> AuditReport:
        return AuditReport(
            passes_used=self.pass_count,
            peak_retained_edges=self.meter.peak,
            per_edge_work_bound_ok=self.max_fanout <= MAX_FANOUT,
        )
