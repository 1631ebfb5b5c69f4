"""Independent oracles and fixed instance corpora shared by the tests."""

from semistream import BipartiteGraph, PrngState, gen_random_bipartite, prng_next, uniform_order


def brute_force_max_matching_size(g: BipartiteGraph) -> int:
    """Largest matching by enumerating every matching of ``g``.

    Plain include/exclude recursion over the edge list; shares no code with
    the library oracle.
    """
    edges = list(g.edges)
    best = 0

    def rec(i, used_a, used_b, size):
        nonlocal best
        if size + (len(edges) - i) <= best:
            return
        if i == len(edges):
            best = max(best, size)
            return
        a, b = edges[i]
        if a not in used_a and b not in used_b:
            rec(i + 1, used_a | {a}, used_b | {b}, size + 1)
        rec(i + 1, used_a, used_b, size)

    rec(0, frozenset(), frozenset(), 0)
    return best


def replay_is_maximal(edges, matching) -> bool:
    """No stream edge could still be added to ``matching``."""
    used_a = {a for a, _ in matching}
    used_b = {b for _, b in matching}
    return all(a in used_a or b in used_b for a, b in edges)


class Draws:
    def __init__(self, seed):
        self.state = PrngState(seed)

    def below(self, k):
        v, self.state = prng_next(self.state)
        return v % k


DENSITIES = (0.01, 0.03, 0.1, 0.3, 0.6)


def random_corpus(count=200, seed=20240601, max_side=100, max_edges=2000):
    """``count`` random bipartite graphs with n_a + n_b <= 2 * max_side."""
    rng = Draws(seed)
    out = []
    for k in range(count):
        n_a = 1 + rng.below(max_side)
        n_b = 1 + rng.below(max_side)
        density = DENSITIES[k % len(DENSITIES)]
        m = max(1, min(max_edges, round(density * n_a * n_b)))
        out.append(gen_random_bipartite(n_a, n_b, m, seed + 7919 * (k + 1)))
    return out


def corpus_orders(g, count=5):
    return [uniform_order(g.m, 1000 + j) for j in range(count)]


def tiny_corpus(count=1000, seed=99):
    """Random graphs with n_a + n_b <= 10, including edgeless ones."""
    rng = Draws(seed)
    out = []
    for _ in range(count):
        n = 2 + rng.below(9)  # total vertices 2..10
        n_a = 1 + rng.below(n - 1)
        n_b = n - n_a
        m = rng.below(n_a * n_b + 1)
        out.append(gen_random_bipartite(n_a, n_b, m, rng.below(1 << 32)))
    return out
