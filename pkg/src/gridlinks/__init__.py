"""Random knots and links as grid diagrams: sampling, invariants, exact counts."""

from gridlinks.errors import (
    Collision,
    DegenerateDesign,
    DegenerateSample,
    NotADerangement,
    NotAPermutation,
    SizeLimitExceeded,
    TruncationTooSmall,
)
from gridlinks.grid import (
    Arc,
    Crossing,
    KnotLoop,
    LinkGrid,
    arcs,
    from_derangement,
    knot_to_link,
    mirror,
    transition_permutation,
    validate_link,
)
from gridlinks.invariants import (
    component_count,
    component_count_geometric,
    crossings,
    knot_length,
    knot_size,
    writhe,
    writhe_pairwise,
)
from gridlinks.sampler import (
    RandomStream,
    random_permutation,
    sample_closing_knot,
    sample_full_knot,
    sample_link,
)

__version__ = "0.1.0"
