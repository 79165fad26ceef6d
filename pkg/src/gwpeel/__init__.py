"""Critical Galton-Watson trees: sampling, tree parameters, and limit laws.

The package splits into:

* :mod:`gwpeel.offspring` - offspring laws, generating functions, parsing;
* :mod:`gwpeel.analytic` - fixed points q and q_s, distribution tables;
* :mod:`gwpeel.tree` - preorder trees and linear-time parameters;
* :mod:`gwpeel.sampler` - seeded samplers (unconditioned, exact-size, Kesten);
* :mod:`gwpeel.experiments` - Monte Carlo verification of the limit laws;
* :mod:`gwpeel.cli` - the ``gwpeel`` command.
"""

from .analytic import (
    DistributionTable,
    FixedPointError,
    FixedPointResult,
    TableKind,
    leafheight_constant,
    leafheight_distribution,
    max_peel_constant,
    peel_decay_rate,
    peel_distribution,
    root_limit_law,
    solve_q,
    solve_qs,
)
from .offspring import (
    Family,
    OffspringDistribution,
    OffspringError,
    SizeBiasedSampler,
    parse_family,
)
from .sampler import (
    CapExceeded,
    ConditionedSampler,
    KestenTruncation,
    RandomStream,
    SamplerError,
    UnattainableSize,
    nearest_attainable_size,
    sample_conditioned,
    sample_kesten,
    sample_unconditioned,
)
from .tree import (
    InvalidDegreeSum,
    InvalidPrefix,
    NodeAnnotations,
    SpvcResult,
    Tree,
    TreeError,
    annotate,
    annotations_to_json,
    format_degrees,
    from_degrees,
    independence_number,
    layer_counts,
    leaf_heights,
    mark_spvc,
    max_leaf_height,
    max_peel,
    parse_degree_line,
    peel_numbers,
    read_trees,
    vertex_cover_number,
    write_trees,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
