"""
Bipartite graphs, arrival orders and matchings.

Vertices are dense 0-based integers on each side: ``a`` in ``range(n_a)`` for
the A side and ``b`` in ``range(n_b)`` for the B side. An edge is the pair
``(a, b)``.

The text file format is::

    n_a n_b m
    a b
    a b
    ...

with exactly ``m`` edge lines. The order of the edge lines is the arrival
order of the stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "BipartiteGraph",
    "ArrivalOrder",
    "Matching",
    "SemiMatching",
    "MatchingError",
    "GraphFormatError",
    "HeaderError",
    "EndpointRangeError",
    "DuplicateEdgeError",
    "EdgeCountError",
    "MalformedEdgeError",
    "is_valid_matching",
    "read_graph",
    "write_graph",
    "load_graph",
    "save_graph",
]

Edge = tuple[int, int]

#: sentinel stored in mate arrays for an unmatched vertex
FREE = -1


class MatchingError(ValueError):
    """Raised when an update would break a degree constraint."""


class GraphFormatError(ValueError):
    """Base class for graph file parse errors."""


class HeaderError(GraphFormatError):
    pass


class EndpointRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class MalformedEdgeError(GraphFormatError):
    pass


class EdgeCountError(GraphFormatError):
    pass


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable bipartite graph ``G = (A, B, E)``.

    ``edges`` keeps the order in which the edges were supplied; that order
    is the natural (identity) arrival order.
    """

    n_a: int
    n_b: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n_a < 0 or self.n_b < 0:
            raise ValueError("vertex counts must be non-negative")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for a, b in edges:
            if not (0 <= a < self.n_a and 0 <= b < self.n_b):
                raise EndpointRangeError(f"edge ({a}, {b}) out of range")
            if (a, b) in seen:
                raise DuplicateEdgeError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return self.n_a + self.n_b

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self._edge_set

    @property
    def _edge_set(self) -> frozenset:
        # cached lazily; the dataclass is frozen so bypass __setattr__
        try:
            return self.__dict__["_edges_cache"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_edges_cache", s)
            return s

    def permuted(self, order: "ArrivalOrder") -> "BipartiteGraph":
        """Graph whose edge list is ``edges`` rearranged into ``order``."""
        return BipartiteGraph(self.n_a, self.n_b, tuple(order.apply(self.edges)))


@dataclass(frozen=True)
class ArrivalOrder:
    """A permutation of edge indices; ``perm[i]`` is the edge arriving i-th."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("arrival order is not a permutation of 0..m-1")

    @classmethod
    def identity(cls, m: int) -> "ArrivalOrder":
        return cls(tuple(range(m)))

    def __len__(self) -> int:
        return len(self.perm)

    def apply(self, edges: Sequence[Edge]) -> Iterator[Edge]:
        if len(edges) != len(self.perm):
            raise ValueError(f"order has length {len(self.perm)}, graph has {len(edges)} edges")
        return (edges[i] for i in self.perm)


class Matching:
    """A set of edges with no shared endpoint.

    Mate lookups are O(1) via ``mate_a`` / ``mate_b`` (``-1`` means free).
    If a meter is attached, every stored edge is counted against it.
    """

    __slots__ = ("n_a", "n_b", "mate_a", "mate_b", "_size", "_meter")

    def __init__(self, n_a: int, n_b: int, edges: Iterable[Edge] = (), meter=None):
        self.n_a = n_a
        self.n_b = n_b
        self.mate_a = [FREE] * n_a
        self.mate_b = [FREE] * n_b
        self._size = 0
        self._meter = meter
        for a, b in edges:
            self.add(a, b)

    def add(self, a: int, b: int) -> None:
        if self.mate_a[a] != FREE or self.mate_b[b] != FREE:
            raise MatchingError(f"edge ({a}, {b}) shares an endpoint with the matching")
        self.mate_a[a] = b
        self.mate_b[b] = a
        self._size += 1
        if self._meter is not None:
            self._meter.retain(1)

    def remove(self, a: int, b: int) -> None:
        if self.mate_a[a] != b:
            raise MatchingError(f"edge ({a}, {b}) is not in the matching")
        self.mate_a[a] = FREE
        self.mate_b[b] = FREE
        self._size -= 1
        if self._meter is not None:
            self._meter.release(1)

    def release(self) -> None:
        """Drop every edge (and its metered storage)."""
        if self._meter is not None:
            self._meter.release(self._size)
        self.mate_a[:] = [FREE] * self.n_a
        self.mate_b[:] = [FREE] * self.n_b
        self._size = 0

    def mate_of_a(self, a: int) -> int | None:
        b = self.mate_a[a]
        return None if b == FREE else b

    def mate_of_b(self, b: int) -> int | None:
        a = self.mate_b[b]
        return None if a == FREE else a

    def covers_a(self, a: int) -> bool:
        return self.mate_a[a] != FREE

    def covers_b(self, b: int) -> bool:
        return self.mate_b[b] != FREE

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self)

    def copy(self, meter=None) -> "Matching":
        return Matching(self.n_a, self.n_b, self, meter=meter)

    def __iter__(self) -> Iterator[Edge]:
        for a, b in enumerate(self.mate_a):
            if b != FREE:
                yield (a, b)

    def __len__(self) -> int:
        return self._size

    def __contains__(self, edge) -> bool:
        a, b = edge
        return 0 <= a < self.n_a and self.mate_a[a] == b

    def __eq__(self, other) -> bool:
        if isinstance(other, Matching):
            return self.edges == other.edges
        if isinstance(other, (set, frozenset)):
            return self.edges == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"Matching({sorted(self)!r})"


class SemiMatching:
    """Incomplete ``lam``-bounded semi-matching: deg(a) <= 1, deg(b) <= lam."""

    __slots__ = ("n_a", "n_b", "lam", "assigned", "deg_b", "_size", "_meter")

    def __init__(self, n_a: int, n_b: int, lam: int, edges: Iterable[Edge] = (), meter=None):
        if lam < 1:
            raise ValueError(f"degree cap must be >= 1, got {lam}")
        self.n_a = n_a
        self.n_b = n_b
        self.lam = lam
        self.assigned = [FREE] * n_a
        self.deg_b = [0] * n_b
        self._size = 0
        self._meter = meter
        for a, b in edges:
            self.add(a, b)

    def add(self, a: int, b: int) -> None:
        if self.assigned[a] != FREE:
            raise MatchingError(f"A-vertex {a} already assigned")
        if self.deg_b[b] >= self.lam:
            raise MatchingError(f"B-vertex {b} already has degree {self.lam}")
        self.assigned[a] = b
        self.deg_b[b] += 1
        self._size += 1
        if self._meter is not None:
            self._meter.retain(1)

    def release(self) -> None:
        if self._meter is not None:
            self._meter.release(self._size)
        self.assigned[:] = [FREE] * self.n_a
        self.deg_b[:] = [0] * self.n_b
        self._size = 0

    def covered_a(self) -> list[int]:
        """``A(S)``: the A-vertices with an edge in S."""
        return [a for a, b in enumerate(self.assigned) if b != FREE]

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self)

    def __iter__(self) -> Iterator[Edge]:
        for a, b in enumerate(self.assigned):
            if b != FREE:
                yield (a, b)

    def __len__(self) -> int:
        return self._size

    def __contains__(self, edge) -> bool:
        a, b = edge
        return 0 <= a < self.n_a and self.assigned[a] == b

    def __repr__(self) -> str:
        return f"SemiMatching(lam={self.lam}, {sorted(self)!r})"


def is_valid_matching(g: BipartiteGraph, m) -> bool:
    """True iff every edge of ``m`` is in ``g`` and no vertex is used twice.

    ``m`` may be a :class:`Matching` or any iterable of ``(a, b)`` pairs.
    """
    used_a, used_b = set(), set()
    for a, b in m:
        if not g.has_edge(a, b) or a in used_a or b in used_b:
            return False
        used_a.add(a)
        used_b.add(b)
    return True


def _parse_ints(line: str, lineno: int, count: int, exc) -> list[int]:
    parts = line.split(" ")
    if len(parts) != count:
        raise exc(f"line {lineno}: expected {count} integers, got {line!r}")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise exc(f"line {lineno}: non-integer field in {line!r}") from None
    # only canonical decimal is accepted, so write(read(t)) == t
    if any(str(v) != p or v < 0 for v, p in zip(values, parts)):
        raise exc(f"line {lineno}: not a canonical non-negative integer in {line!r}")
    return values


def read_graph(text: str) -> tuple[BipartiteGraph, ArrivalOrder]:
    """Parse the graph file format; file edge order becomes the arrival order.

    Raises a distinct :class:`GraphFormatError` subclass for a malformed
    header, an out-of-range endpoint, a duplicate edge, or a wrong number of
    edge lines.
    """
    if text and not text.endswith("\n"):
        raise EdgeCountError("file must end with a newline")
    lines = text.split("\n")[:-1] if text else []
    if not lines:
        raise HeaderError("missing header line")
    n_a, n_b, m = _parse_ints(lines[0], 1, 3, HeaderError)
    body = lines[1:]
    if len(body) != m:
        raise EdgeCountError(f"header declares {m} edges, found {len(body)} lines")
    edges = []
    seen = set()
    for i, line in enumerate(body, start=2):
        a, b = _parse_ints(line, i, 2, MalformedEdgeError)
        if a >= n_a or b >= n_b:
            raise EndpointRangeError(f"line {i}: edge ({a}, {b}) outside {n_a}x{n_b}")
        if (a, b) in seen:
            raise DuplicateEdgeError(f"line {i}: duplicate edge ({a}, {b})")
        seen.add((a, b))
        edges.append((a, b))
    return BipartiteGraph(n_a, n_b, tuple(edges)), ArrivalOrder.identity(m)


def write_graph(g: BipartiteGraph, order: ArrivalOrder | None = None) -> str:
    """Serialize ``g`` with its edges listed in arrival order."""
    edges = g.edges if order is None else list(order.apply(g.edges))
    out = [f"{g.n_a} {g.n_b} {g.m}\n"]
    out.extend(f"{a} {b}\n" for a, b in edges)
    return "".join(out)


def load_graph(path) -> tuple[BipartiteGraph, ArrivalOrder]:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return read_graph(fh.read())


def save_graph(path, g: BipartiteGraph, order: ArrivalOrder | None = None) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_graph(g, order))
