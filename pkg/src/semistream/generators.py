"""
Seeded randomness, arrival orders and instance families.

All randomness comes from splitmix64 so that every seed produces the same
bits on every platform. :func:`splitmix64_block` is the vectorized form of
:func:`prng_next` and produces the identical sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import ArrivalOrder, BipartiteGraph

__all__ = [
    "PrngState",
    "prng_next",
    "splitmix64_block",
    "uniform_order",
    "gen_half_trap",
    "gen_random_bipartite",
    "gen_perfect_plus_noise",
]

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class PrngState:
    state: int = 0

    def __post_init__(self):
        object.__setattr__(self, "state", self.state & MASK64)


def prng_next(s: PrngState) -> tuple[int, PrngState]:
    """One splitmix64 step: returns ``(value, next_state)``."""
    state = (s.state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31), PrngState(state)


def splitmix64_block(seed: int, count: int) -> np.ndarray:
    """The first ``count`` splitmix64 outputs for ``seed`` as ``uint64``."""
    k = np.arange(1, count + 1, dtype=np.uint64)
    # uint64 arithmetic wraps mod 2**64, which is exactly what splitmix wants
    z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


class _Draws:
    """Sequential splitmix64 draws, fetched from numpy in blocks."""

    def __init__(self, seed: int, block: int = 4096):
        self._state = seed & MASK64
        self._block = block
        self._buf: list[int] = []
        self._pos = 0

    def next(self) -> int:
        if self._pos == len(self._buf):
            self._buf = splitmix64_block(self._state, self._block).tolist()
            self._state = (self._state + self._block * GOLDEN_GAMMA) & MASK64
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return v


def uniform_order(m: int, seed: int) -> ArrivalOrder:
    """Fisher-Yates shuffle of ``range(m)`` driven by splitmix64.

    For ``i`` from ``m - 1`` down to 1 the position ``i`` is swapped with
    ``draw mod (i + 1)``. The modulo bias is below ``2**-44`` for any
    ``m <= 10**6`` and is accepted for bit-exact reproducibility.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    perm = list(range(m))
    if m > 1:
        draws = splitmix64_block(seed, m - 1)
        bounds = np.arange(m, 1, -1, dtype=np.uint64)  # i + 1 for i = m-1 .. 1
        targets = (draws % bounds).tolist()
        for i, j in zip(range(m - 1, 0, -1), targets):
            perm[i], perm[j] = perm[j], perm[i]
    return ArrivalOrder(tuple(perm))


def gen_half_trap(n: int) -> tuple[BipartiteGraph, ArrivalOrder]:
    """Greedy-tight instance: a perfect matching plus ``n`` trap edges.

    ``n_a = n_b = 2n``. Diagonal edges ``(i, i)`` form a perfect matching and
    trap edges ``(i, n + i)`` for ``i < n`` each block two diagonal edges.
    The edge list is stored trap edges first, then the diagonal, so the
    returned (identity) order is the adversarial one: greedy keeps exactly
    the ``n`` trap edges while the optimum is ``2n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    trap = [(i, n + i) for i in range(n)]
    diag = [(i, i) for i in range(2 * n)]
    g = BipartiteGraph(2 * n, 2 * n, tuple(trap + diag))
    return g, ArrivalOrder.identity(g.m)


def _sample_distinct(n_a, n_b, m, draws, taken, out):
    total = n_a * n_b
    while len(out) < m:
        idx = draws.next() % total
        if idx in taken:
            continue
        taken.add(idx)
        out.append((idx // n_b, idx % n_b))


def gen_random_bipartite(n_a: int, n_b: int, m: int, seed: int) -> BipartiteGraph:
    """``m`` distinct edges drawn uniformly by rejection, in draw order."""
    if n_a < 0 or n_b < 0 or m < 0:
        raise ValueError("sizes must be non-negative")
    if m > n_a * n_b:
        raise ValueError(f"cannot place {m} distinct edges in a {n_a}x{n_b} graph")
    edges: list[tuple[int, int]] = []
    _sample_distinct(n_a, n_b, m, _Draws(seed), set(), edges)
    return BipartiteGraph(n_a, n_b, tuple(edges))


def gen_perfect_plus_noise(n: int, d: int, seed: int) -> BipartiteGraph:
    """Diagonal perfect matching on ``n + n`` vertices plus ``d * n`` random edges.

    The diagonal comes first in the edge list, followed by the noise edges
    in draw order.
    """
    if n < 0 or d < 0:
        raise ValueError("n and d must be non-negative")
    extra = d * n
    if n + extra > n * n:
        raise ValueError(f"{extra} noise edges do not fit next to the diagonal of a {n}x{n} graph")
    edges = [(i, i) for i in range(n)]
    taken = {i * n + i for i in range(n)}
    _sample_distinct(n, n, n + extra, _Draws(seed), taken, edges)
    return BipartiteGraph(n, n, tuple(edges))
