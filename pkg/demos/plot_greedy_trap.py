"""
Where greedy gets stuck
=======================

Greedy matching is maximal, so it always finds at least half of a maximum
matching. The half-trap family shows that half is all you get when the
stream is ordered badly.
"""

from semistream import gen_half_trap, greedy, max_matching

# half_trap(n) has a perfect matching on the diagonal plus n "trap" edges
# (i, n+i). Its stored edge list puts the traps first.
g, order = gen_half_trap(4)
stream = list(order.apply(g.edges))
print(stream)

# every trap edge arrives first and blocks two diagonal edges
m = greedy(stream)
print("greedy :", sorted(m), len(m))
print("optimum:", len(max_matching(g)))

# the same graph in a friendlier order: diagonal first
friendly = stream[g.n_a // 2:] + stream[: g.n_a // 2]
print("diagonal first:", len(greedy(friendly)))

# the lock is exact for every n
for n in (10, 100, 1000):
    g, order = gen_half_trap(n)
    size = len(greedy(list(order.apply(g.edges)), n_a=g.n_a, n_b=g.n_b))
    print(f"n={n:5d}  greedy={size:5d}  opt={2 * n:5d}  ratio={size / (2 * n)}")
