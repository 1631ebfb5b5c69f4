"""
Beating one half with a second pass
===================================

Both two-pass algorithms keep the greedy matching M0 from pass one and look
for 3-augmenting paths d - a - b - c around its edges. Pass one collects the
right wings (c, b) and pass two the left wings (a, d).
"""

import statistics

from semistream import (
    StreamSource,
    SubsetSample,
    approximation_floor,
    gen_half_trap,
    max_matching,
    two_pass_deterministic,
    two_pass_randomized,
)

g, order = gen_half_trap(2)

# Deterministic version: right wings come from a degree-3 semi-matching.
trace = {}
src = StreamSource(g, order)
out = two_pass_deterministic(src, lam=3, trace=trace)
for key in ("M0", "M1", "M2"):
    print(key, sorted(trace[key]))
print("result", sorted(out), "passes:", src.pass_count)

# Randomized version: right wings come from greedy on a random sample of A.
# Injecting the sample {2, 3} makes the run reproducible by hand.
sample = SubsetSample.from_vertices(g.n_a, [2, 3])
print("randomized with sample {2,3}:", sorted(two_pass_randomized(StreamSource(g, order), sample=sample)))

# On a bigger trap the guarantee of the deterministic run is a hard floor
g, order = gen_half_trap(1000)
opt = len(max_matching(g))
det = len(two_pass_deterministic(StreamSource(g, order)))
print(f"deterministic ratio {det / opt:.4f}  floor {approximation_floor(3):.4f}")

# and the randomized run is good in expectation
ratios = [len(two_pass_randomized(StreamSource(g, order), seed=s)) / opt for s in range(50)]
print(f"randomized ratio mean {statistics.fmean(ratios):.4f}  sd {statistics.stdev(ratios):.4f}")
