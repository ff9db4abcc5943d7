"""Decomposition calculus for small 2-orbifolds and bipartite graphs of groups."""

from .arcs import ArcClass, CurveClass, OutOfScopeError
from .calculus import (
    crosses,
    cut_along_arc,
    essential_arcs_oracle,
    has_essential_scc,
    isolated_arcs,
    threshold_k,
)
from .catalog import (
    CatalogEntry,
    catalog_chi_neg_configs,
    catalog_chi_neg_orbifolds,
    catalog_chi_zero,
    catalog_dim3,
    catalog_export,
    catalog_match,
)
from .gog import (
    Edge,
    GraphOfGroups,
    GroupMark,
    Vertex,
    classify_edges,
    collapse_special_intervals,
    complete,
    detect_special_canonical,
    dot_export,
    exceptional_annuli,
    is_isolated_vertex,
    parallel_edges_check,
    validate_graph,
    waldhausen_refine,
)
from .gog import reduce as reduce_gog
from .orbifold import (
    Orbifold2,
    OrbifoldError,
    Segment,
    double_along_d0,
    euler_char,
    is_mirror_free,
    pi1_class,
    validate,
)

__version__ = "0.1.0"
