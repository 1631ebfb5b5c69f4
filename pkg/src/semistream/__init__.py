"""Semi-streaming maximum bipartite matching.

One- and two-pass streaming algorithms that beat the 1/2 ratio of plain
greedy matching, together with an exact oracle, seeded instance/order
generators and a pass/memory-audited experiment harness.
"""

from .algorithms import (
    SQRT2_MINUS_1,
    EdgeFilter,
    PhaseSplit,
    SubsetSample,
    WingError,
    approximation_floor,
    augment_with_wings,
    greedy,
    one_pass_random_order,
    random_subset_greedy,
    sample_vertex_subset,
    semi,
    two_pass_deterministic,
    two_pass_randomized,
)
from .generators import (
    PrngState,
    gen_half_trap,
    gen_perfect_plus_noise,
    gen_random_bipartite,
    prng_next,
    splitmix64_block,
    uniform_order,
)
from .graph import (
    ArrivalOrder,
    BipartiteGraph,
    GraphFormatError,
    Matching,
    MatchingError,
    SemiMatching,
    is_valid_matching,
    load_graph,
    read_graph,
    save_graph,
    write_graph,
)
from .oracle import count_3_augmentable, decompose, max_matching
from .stream import AuditReport, EdgeMeter, PassBudgetExceeded, StreamSource

__version__ = "0.1.0"
