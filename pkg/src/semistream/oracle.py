"""
Exact maximum matching and structural analysis of ``M (+) M*``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .graph import FREE, BipartiteGraph, Matching

__all__ = [
    "max_matching",
    "is_maximal",
    "Component",
    "DiffDecomposition",
    "decompose",
    "count_3_augmentable",
    "overlap_bound_holds",
    "augmentable_bound_holds",
]

IN_M = "M"
IN_MSTAR = "M*"


def max_matching(g: BipartiteGraph) -> Matching:
    """A maximum-cardinality matching of ``g`` (Hopcroft-Karp).

    The edges are fed to the solver sorted by ``(a, b)``, so the returned
    matching depends only on the edge set, not on the stream order.
    """
    out = Matching(g.n_a, g.n_b)
    if g.m == 0:
        return out
    pairs = np.array(sorted(g.edges), dtype=np.int64)
    adj = csr_matrix(
        (np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])),
        shape=(g.n_a, g.n_b),
    )
    mate = maximum_bipartite_matching(adj, perm_type="column")
    for a, b in enumerate(mate.tolist()):
        if b >= 0:
            out.add(a, b)
    return out


def is_maximal(g: BipartiteGraph, m: Matching) -> bool:
    """True iff no edge of ``g`` has both endpoints free in ``m``."""
    ma, mb = m.mate_a, m.mate_b
    return all(ma[a] != FREE or mb[b] != FREE for a, b in g.edges)


@dataclass(frozen=True)
class Component:
    """An alternating path or cycle of ``M (+) M*``.

    ``vertices`` are ``("A", i)`` / ``("B", j)`` labels in walk order and
    ``origins[k]`` says which matching the edge between ``vertices[k]`` and
    ``vertices[k + 1]`` comes from (for a cycle the last edge closes back to
    ``vertices[0]``).
    """

    vertices: tuple
    origins: tuple
    cycle: bool

    @property
    def length(self) -> int:
        return len(self.origins)

    @property
    def augments_m(self) -> bool:
        """An odd path with more ``M*`` edges than ``M`` edges."""
        return not self.cycle and self.length % 2 == 1 and self.origins[0] == IN_MSTAR

    @property
    def augments_mstar(self) -> bool:
        return not self.cycle and self.length % 2 == 1 and self.origins[0] == IN_M


@dataclass(frozen=True)
class DiffDecomposition:
    components: tuple

    def __len__(self):
        return len(self.components)

    def paths_of_length(self, k: int) -> list:
        return [c for c in self.components if not c.cycle and c.length == k]

    @property
    def n_edges(self) -> int:
        return sum(c.length for c in self.components)


def _as_matching(x, n_a=None, n_b=None) -> Matching:
    if isinstance(x, Matching):
        return x
    edges = list(x)
    n_a = n_a if n_a is not None else max((a for a, _ in edges), default=-1) + 1
    n_b = n_b if n_b is not None else max((b for _, b in edges), default=-1) + 1
    return Matching(n_a, n_b, edges)


def decompose(m, mstar) -> DiffDecomposition:
    """Split ``m (+) mstar`` into maximal alternating paths and cycles.

    Paths are listed first (each walked from its lower-labelled end), then
    cycles; both in order of their smallest vertex label.

    Raises
    ------
    MatchingError
        If either input uses a vertex twice.
    """
    if isinstance(m, Matching) and isinstance(mstar, Matching):
        n_a, n_b = max(m.n_a, mstar.n_a), max(m.n_b, mstar.n_b)
    else:
        all_edges = list(m) + list(mstar)
        n_a = max((a for a, _ in all_edges), default=-1) + 1
        n_b = max((b for _, b in all_edges), default=-1) + 1
    m = _as_matching(m, n_a, n_b)
    mstar = _as_matching(mstar, n_a, n_b)

    only_m = m.edges - mstar.edges
    only_s = mstar.edges - m.edges
    # each vertex has at most one incident edge of each origin
    nbr: dict[tuple, dict[str, tuple]] = {}
    for origin, edges in ((IN_M, only_m), (IN_MSTAR, only_s)):
        for a, b in edges:
            va, vb = ("A", a), ("B", b)
            nbr.setdefault(va, {})[origin] = vb
            nbr.setdefault(vb, {})[origin] = va

    visited: set[tuple] = set()

    def walk(start, first_origin):
        verts = [start]
        origins = []
        origin = first_origin
        cur = start
        visited.add(start)
        while origin in nbr[cur]:
            nxt = nbr[cur][origin]
            origins.append(origin)
            if nxt == start:
                return verts, origins, True
            verts.append(nxt)
            visited.add(nxt)
            cur = nxt
            origin = IN_MSTAR if origin == IN_M else IN_M
        return verts, origins, False

    components = []
    for v in sorted(nbr):
        if v in visited or len(nbr[v]) != 1:
            continue
        (first,) = nbr[v]
        verts, origins, _ = walk(v, first)
        components.append(Component(tuple(verts), tuple(origins), False))
    for v in sorted(nbr):
        if v in visited:
            continue
        verts, origins, closed = walk(v, IN_M)
        assert closed, "degree-2 vertex outside a path must lie on a cycle"
        components.append(Component(tuple(verts), tuple(origins), True))
    return DiffDecomposition(tuple(components))


def count_3_augmentable(m, mstar, graph: BipartiteGraph | None = None) -> int:
    """Number of ``m``-edges that are the middle of a length-3 augmenting path.

    ``mstar`` must be maximum and ``m`` maximal. The structural part of that
    is always checked (``m`` cannot augment ``mstar``; no lone ``mstar``
    edge with both ends free in ``m``). With ``graph`` the check is exact:
    ``|mstar|`` is compared with the oracle and maximality of ``m`` is
    replayed over every edge.
    """
    d = decompose(m, mstar)
    for c in d.components:
        if c.augments_mstar:
            raise ValueError("mstar is not maximum: m contains an augmenting path for it")
        if not c.cycle and c.length == 1:
            raise ValueError("m is not maximal: an mstar edge has both endpoints free")
    if graph is not None:
        m_ = _as_matching(m, graph.n_a, graph.n_b)
        ms_ = _as_matching(mstar, graph.n_a, graph.n_b)
        if len(ms_) != len(max_matching(graph)):
            raise ValueError("mstar is not a maximum matching of graph")
        if not is_maximal(graph, m_):
            raise ValueError("m is not a maximal matching of graph")
    return sum(1 for c in d.paths_of_length(3) if c.origins == (IN_MSTAR, IN_M, IN_MSTAR))


def overlap_bound_holds(m: Matching, mstar: Matching) -> bool:
    """``|M & M*| <= 2 (|M| - |M*| / 2)`` for maximal ``M``, maximum ``M*``."""
    common = len(m.edges & mstar.edges)
    return common <= 2 * len(m) - len(mstar)


def augmentable_bound_holds(m: Matching, mstar: Matching) -> bool:
    """At least ``2|M*| - 3|M|`` edges of maximal ``M`` are 3-augmentable."""
    return count_3_augmentable(m, mstar) >= 2 * len(mstar) - 3 * len(m)
