"""
Semi-streaming matching algorithms.

Every algorithm is built from small online consumers (callables taking one
edge ``(a, b)``) that run side by side on the same pass. Each consumer does
O(1) work per edge and keeps at most one matching or semi-matching plus a
few per-vertex flag arrays.

Edge naming: an edge is always written ``(a, b)`` with ``a`` on the A side.
For a base matching ``M0``, a *right wing* is an edge ``(c, b)`` with ``b``
matched and ``c`` free in ``M0``; a *left wing* is an edge ``(a, d)`` with
``a`` matched and ``d`` free in ``M0``. Together with ``(a, b) in M0`` they
form the 3-augmenting path ``d - a - b - c``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .generators import splitmix64_block
from .graph import FREE, Matching, MatchingError, SemiMatching
from .stream import StreamSource

__all__ = [
    "EdgeFilter",
    "PhaseSplit",
    "SubsetSample",
    "GreedyConsumer",
    "SemiConsumer",
    "WingError",
    "greedy",
    "semi",
    "sample_vertex_subset",
    "random_subset_greedy",
    "augment_with_wings",
    "one_pass_random_order",
    "two_pass_randomized",
    "two_pass_deterministic",
    "SQRT2_MINUS_1",
    "approximation_floor",
]

#: sqrt(2) - 1 rounded to the nearest double
SQRT2_MINUS_1 = 0.41421356237309515


class WingError(MatchingError):
    """Wings passed to :func:`augment_with_wings` do not form disjoint paths."""


class EdgeFilter:
    """Edges between an allowed A-set and an allowed B-set.

    Both sets are flag arrays (``bytearray``), so membership is O(1) and the
    filter stores ``n_a + n_b`` bytes.
    """

    __slots__ = ("allow_a", "allow_b")

    def __init__(self, allow_a: bytearray, allow_b: bytearray):
        self.allow_a = allow_a
        self.allow_b = allow_b

    @classmethod
    def from_sets(cls, n_a, n_b, a_set=None, b_set=None) -> "EdgeFilter":
        """``None`` for a side means every vertex of that side is allowed."""
        return cls(_flags(n_a, a_set), _flags(n_b, b_set))

    def __call__(self, a: int, b: int) -> bool:
        return bool(self.allow_a[a]) and bool(self.allow_b[b])


def _flags(n, members=None) -> bytearray:
    if members is None:
        return bytearray(b"\x01") * n
    flags = bytearray(n)
    for v in members:
        flags[v] = 1
    return flags


@dataclass(frozen=True)
class PhaseSplit:
    """Fractions of the stream at which the one-pass algorithm changes phase."""

    alpha: float = 0.4312
    beta: float = 0.7595

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 0.5 < self.beta < 1.0):
            raise ValueError(f"need 0 <= alpha <= 1/2 < beta < 1, got {self.alpha}, {self.beta}")

    def boundaries(self, m: int) -> tuple[int, int]:
        """``(floor(alpha m), floor(beta m))``."""
        return math.floor(self.alpha * m), math.floor(self.beta * m)


@dataclass(frozen=True, eq=False)
class SubsetSample:
    """A random subset of the A side, stored as a flag array."""

    p: float
    members: bytearray

    @classmethod
    def from_vertices(cls, n_a: int, vertices, p: float = float("nan")) -> "SubsetSample":
        return cls(p, _flags(n_a, vertices))

    def __contains__(self, a: int) -> bool:
        return bool(self.members[a])

    def __len__(self) -> int:
        return self.members.count(1)

    def vertices(self) -> list[int]:
        return [a for a, f in enumerate(self.members) if f]


class GreedyConsumer:
    """Online greedy matching; ``consumer(a, b)`` returns True if it took the edge."""

    __slots__ = ("matching", "edge_filter", "_ma", "_mb")

    def __init__(self, n_a: int, n_b: int, edge_filter=None, meter=None):
        self.matching = Matching(n_a, n_b, meter=meter)
        self.edge_filter = edge_filter
        self._ma = self.matching.mate_a
        self._mb = self.matching.mate_b

    def __call__(self, a: int, b: int) -> bool:
        if self._ma[a] != FREE or self._mb[b] != FREE:
            return False
        f = self.edge_filter
        if f is not None and not f(a, b):
            return False
        self.matching.add(a, b)
        return True


class SemiConsumer:
    """Online incomplete ``lam``-bounded semi-matching."""

    __slots__ = ("semi", "lam", "_assigned", "_deg")

    def __init__(self, n_a: int, n_b: int, lam: int, meter=None):
        self.semi = SemiMatching(n_a, n_b, lam, meter=meter)
        self.lam = lam
        self._assigned = self.semi.assigned
        self._deg = self.semi.deg_b

    def __call__(self, a: int, b: int) -> bool:
        if self._assigned[a] == FREE and self._deg[b] <= self.lam - 1:
            self.semi.add(a, b)
            return True
        return False


def _sizes(edges, n_a, n_b):
    if n_a is None:
        n_a = getattr(edges, "n_a", None)
    if n_b is None:
        n_b = getattr(edges, "n_b", None)
    if n_a is None or n_b is None:
        if not isinstance(edges, Sequence):
            raise TypeError("pass n_a and n_b, or give a sequence of edges")
        n_a = max((a for a, _ in edges), default=-1) + 1 if n_a is None else n_a
        n_b = max((b for _, b in edges), default=-1) + 1 if n_b is None else n_b
    return n_a, n_b


def greedy(edges, edge_filter=None, *, n_a=None, n_b=None, meter=None) -> Matching:
    """Greedy matching over an edge stream.

    An edge is added iff it passes ``edge_filter`` and both endpoints are
    still free, so the result is maximal among the accepted edges.

    Parameters
    ----------
    edges : iterable of (a, b)
        One pass (as returned by ``StreamSource.open_pass``) or any sequence
        of edges.
    edge_filter : callable, optional
        ``edge_filter(a, b) -> bool``; typically an :class:`EdgeFilter`.
    n_a, n_b : int, optional
        Side sizes. Taken from the pass object when available, otherwise
        inferred from a sequence of edges.
    """
    n_a, n_b = _sizes(edges, n_a, n_b)
    consumer = GreedyConsumer(n_a, n_b, edge_filter, meter)
    for a, b in edges:
        consumer(a, b)
    return consumer.matching


def semi(edges, lam: int, *, n_a=None, n_b=None, meter=None) -> SemiMatching:
    """SEMI(lam): keep ``(a, b)`` iff ``a`` is unassigned and ``deg(b) < lam``."""
    if lam < 1:
        raise ValueError(f"lam must be >= 1, got {lam}")
    n_a, n_b = _sizes(edges, n_a, n_b)
    consumer = SemiConsumer(n_a, n_b, lam, meter)
    for a, b in edges:
        consumer(a, b)
    return consumer.semi


def sample_vertex_subset(n_a: int, p: float, seed: int) -> SubsetSample:
    """Independent sample of A with ``Pr[a in sample] = p``.

    Vertex ``a`` is kept iff the a-th splitmix64 draw for ``seed`` is below
    ``floor(p * 2**64)``.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    threshold = math.floor(math.ldexp(p, 64))
    if threshold >= 1 << 64:
        members = bytearray(b"\x01") * n_a
    else:
        draws = splitmix64_block(seed, n_a)
        members = bytearray((draws < threshold).astype("u1").tobytes())
    return SubsetSample(p, members)


def random_subset_greedy(src: StreamSource, sample: SubsetSample) -> Matching:
    """One pass of greedy restricted to edges whose A-endpoint is sampled."""
    consumer = GreedyConsumer(
        src.n_a, src.n_b, EdgeFilter(sample.members, _flags(src.n_b)), src.meter
    )
    src.feed(consumer)
    return consumer.matching


def augment_with_wings(m0: Matching, right_wings, left_wings, meter=None) -> Matching:
    """Apply the 3-augmenting paths formed by ``m0`` and its wings.

    For every left wing ``(a, d)`` with ``b = mate(a)`` and a right wing
    ``(c, b)``, the edge ``(a, b)`` is replaced by ``(a, d)`` and ``(c, b)``.
    When several right wings hang off the same ``b``, the one with the
    smallest ``c`` is used. The result has ``len(m0) + len(left_wings)``
    edges; ``m0`` itself is not modified.

    Raises
    ------
    WingError
        If a wing has the wrong endpoints w.r.t. ``m0``, a vertex appears in
        two wings, or a left wing has no right wing to pair with.
    """
    wing_for_b: dict[int, int] = {}
    used_c: set[int] = set()
    for c, b in right_wings:
        if m0.mate_b[b] == FREE or m0.mate_a[c] != FREE:
            raise WingError(f"right wing ({c}, {b}) must join a free A-vertex to a matched B-vertex")
        if c in used_c:
            raise WingError(f"A-vertex {c} appears in two right wings")
        used_c.add(c)
        if b not in wing_for_b or c < wing_for_b[b]:
            wing_for_b[b] = c

    out = m0.copy(meter=meter)
    seen_a: set[int] = set()
    seen_d: set[int] = set()
    for a, d in left_wings:
        b = m0.mate_a[a]
        if b == FREE or m0.mate_b[d] != FREE:
            raise WingError(f"left wing ({a}, {d}) must join a matched A-vertex to a free B-vertex")
        if a in seen_a or d in seen_d:
            raise WingError(f"left wing ({a}, {d}) overlaps another left wing")
        if b not in wing_for_b:
            raise WingError(f"left wing ({a}, {d}): B-vertex {b} has no right wing")
        seen_a.add(a)
        seen_d.add(d)
        out.remove(a, b)
        out.add(a, d)
        out.add(wing_for_b[b], b)
    return out


class _Window:
    """Forwards edges at stream positions ``[start, stop)`` to ``inner``.

    ``on_start`` runs once, right before the first forwarded edge.
    """

    __slots__ = ("inner", "start", "stop", "t", "on_start", "after")

    def __init__(self, inner, start, stop, on_start=None, after=None):
        self.inner = inner
        self.start = start
        self.stop = stop
        self.t = 0
        self.on_start = on_start
        self.after = after

    def __call__(self, a: int, b: int) -> None:
        t = self.t
        self.t = t + 1
        if self.start <= t < self.stop:
            if t == self.start and self.on_start is not None:
                self.on_start()
            if self.inner(a, b) and self.after is not None:
                self.after(a, b)


def one_pass_random_order(src: StreamSource, split: PhaseSplit = PhaseSplit(), trace=None) -> Matching:
    """Single-pass matching for uniformly random arrival order.

    Four greedy runs share the pass: ``M_G`` over everything, ``M0`` over
    the first ``floor(alpha m)`` edges, ``M1`` (right wings of ``M0``) over
    the middle phase and ``M2`` (left wings completing ``M1``) over the rest.
    Returns the larger of ``M_G`` and ``M0`` augmented by the wings; on a tie
    the augmented matching is returned.

    If ``trace`` is a dict, the intermediate matchings are stored in it.
    """
    n_a, n_b, m = src.n_a, src.n_b, src.m
    k1, k2 = split.boundaries(m)
    meter = src.meter

    g_all = GreedyConsumer(n_a, n_b, meter=meter)
    g0 = GreedyConsumer(n_a, n_b, meter=meter)
    g1 = GreedyConsumer(n_a, n_b, meter=meter)
    g2 = GreedyConsumer(n_a, n_b, meter=meter)
    m0 = g0.matching
    a_prime = bytearray(n_a)

    def open_phase_two():
        free_a = bytearray(int(x == FREE) for x in m0.mate_a)
        matched_b = bytearray(int(x != FREE) for x in m0.mate_b)
        g1.edge_filter = EdgeFilter(free_a, matched_b)

    def open_phase_three():
        free_b = bytearray(int(x == FREE) for x in m0.mate_b)
        g2.edge_filter = EdgeFilter(a_prime, free_b)

    def grow_a_prime(c, b):
        # the M0-mate of b now has a right wing
        a_prime[m0.mate_b[b]] = 1

    src.feed(
        g_all,
        _Window(g0, 0, k1),
        _Window(g1, k1, k2, on_start=open_phase_two, after=grow_a_prime),
        _Window(g2, k2, m, on_start=open_phase_three),
    )
    augmented = augment_with_wings(m0, g1.matching, g2.matching, meter=meter)
    if trace is not None:
        trace.update(M_G=g_all.matching, M0=m0, M1=g1.matching, M2=g2.matching, M=augmented)
    return augmented if len(augmented) >= len(g_all.matching) else g_all.matching


def two_pass_randomized(
    src: StreamSource,
    p: float = SQRT2_MINUS_1,
    sample: SubsetSample | None = None,
    seed: int | None = None,
    trace=None,
) -> Matching:
    """Two-pass randomized matching for any arrival order.

    Pass 1 runs greedy ``M0`` and greedy ``M'`` restricted to a random A-sample
    side by side; the edges of ``M'`` from free A-vertices to ``B(M0)`` are
    right wings. Pass 2 runs greedy over edges from the M0-mates of those
    wings to free B-vertices, giving the left wings.

    Either ``sample`` or ``seed`` must be given; with a seed the sample is
    ``sample_vertex_subset(n_a, p, seed)``.
    """
    n_a, n_b = src.n_a, src.n_b
    meter = src.meter
    if sample is None:
        if seed is None:
            raise ValueError("two_pass_randomized needs a sample or a seed")
        sample = sample_vertex_subset(n_a, p, seed)

    g0 = GreedyConsumer(n_a, n_b, meter=meter)
    g_sub = GreedyConsumer(n_a, n_b, EdgeFilter(sample.members, _flags(n_b)), meter)
    src.feed(g0, g_sub)
    m0, m_prime = g0.matching, g_sub.matching

    m1 = Matching(n_a, n_b, meter=meter)
    a2 = bytearray(n_a)
    for c, b in m_prime:
        if m0.mate_a[c] == FREE and m0.mate_b[b] != FREE:
            m1.add(c, b)
            a2[m0.mate_b[b]] = 1
    m_prime.release()

    free_b = bytearray(int(x == FREE) for x in m0.mate_b)
    g2 = GreedyConsumer(n_a, n_b, EdgeFilter(a2, free_b), meter)
    src.feed(g2)
    out = augment_with_wings(m0, m1, g2.matching, meter=meter)
    if trace is not None:
        trace.update(M0=m0, M1=m1, M2=g2.matching, M=out, sample=sample)
    return out


def two_pass_deterministic(src: StreamSource, lam: int = 3, trace=None) -> Matching:
    """Two-pass deterministic matching for any arrival order.

    Like :func:`two_pass_randomized`, but the right wings come from the
    semi-matching ``SEMI(lam)`` computed alongside ``M0`` in pass 1. A
    B-vertex may carry up to ``lam`` wings; the one with the smallest
    A-index is used when augmenting.
    """
    if lam < 2:
        raise ValueError(f"lam must be >= 2, got {lam}")
    n_a, n_b = src.n_a, src.n_b
    meter = src.meter

    g0 = GreedyConsumer(n_a, n_b, meter=meter)
    s = SemiConsumer(n_a, n_b, lam, meter=meter)
    src.feed(g0, s)
    m0, S = g0.matching, s.semi

    m1 = SemiMatching(n_a, n_b, lam, meter=meter)
    a2 = bytearray(n_a)
    for c, b in S:
        if m0.mate_a[c] == FREE and m0.mate_b[b] != FREE:
            m1.add(c, b)
            a2[m0.mate_b[b]] = 1
    S.release()

    free_b = bytearray(int(x == FREE) for x in m0.mate_b)
    g2 = GreedyConsumer(n_a, n_b, EdgeFilter(a2, free_b), meter)
    src.feed(g2)
    out = augment_with_wings(m0, m1, g2.matching, meter=meter)
    if trace is not None:
        trace.update(M0=m0, M1=m1, M2=g2.matching, M=out)
    return out


def approximation_floor(lam: int) -> float:
    """Guaranteed ratio ``1/2 + (lam-1)/(8 lam^2 + 10 lam + 2)`` of the two-pass deterministic run."""
    return 0.5 + (lam - 1) / (8 * lam * lam + 10 * lam + 2)
