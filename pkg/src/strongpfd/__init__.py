"""Prime factor decomposition of graphs with respect to the strong product.

Provides the classical global pipeline (dispensable edges, Cartesian skeleton,
quotient blow-up), a local covering algorithm that factors small neighborhoods
and knits their colorings together, and an approximate-product recognizer for
perturbed inputs.
"""

from .errors import (
    EmptyBackboneError,
    FormatError,
    GraphError,
    GraphInputError,
    InternalInvariantError,
    NotThinError,
)
from .graph import (
    Graph,
    VertexMap,
    bfs_order,
    closed_neighborhood,
    connected_components,
    induced_subgraph,
    isomorphic,
    isomorphic_under_map,
)
from .products import (
    Coordinates,
    EdgeClass,
    Factorization,
    cartesian_product,
    classify_edge,
    fiber,
    project,
    same_factor_multiset,
    strong_product,
    verify_factorization,
)
from .thinness import (
    Backbone,
    BackboneOrder,
    Quotient,
    SPartition,
    backbone,
    backbone_bfs,
    expand_quotient,
    is_thin,
    quotient,
    s_partition,
    satisfies_s1,
    strictly_maximal_vertices,
)
from .skeleton import (
    SkeletonResult,
    cartesian_pfd,
    cartesian_skeleton,
    classical_strong_pfd,
    complete_graph,
    extract_complete_factor,
    is_dispensable,
    strong_pfd_thin,
)
from .localpfd import (
    ContinuationReport,
    PartialColoring,
    SubproductView,
    check_continuation,
    check_factors,
    combine_colorings,
    factor_subgraph,
    hypercube_color_repair,
    local_cover,
    local_pfd,
    make_subproduct,
    pfd,
)
from .oracle import brute_force_pfd, enumerate_connected_graphs, is_prime_oracle
from .approx import (
    ApproxConfig,
    ApproxResult,
    aligned_distance,
    approx_factorize,
    generate,
    perturb,
)
from .cli import cli_main, emit_dot, emit_edge_list, parse_edge_list, parse_graph6

__all__ = [name for name in dir() if not name.startswith("_")]
