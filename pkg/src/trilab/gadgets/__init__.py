"""Reduction gadgets: graphs, coloring encodings, clique tensors, TQF/3QF."""

from .clique import (
    clique_tensor,
    clique_warm_starts,
    expected_clique_sigma,
    omega_from_singular_values,
)
from .graphs import (
    Graph,
    GraphFormatError,
    clique_number,
    complete_graph,
    cycle_graph,
    find_3coloring,
    format_graph,
    graph_from_edges,
    induced_subgraph,
    load_graph,
    maximal_cliques,
    motzkin_straus_value,
    parse_graph,
    path_graph,
    petersen_graph,
    random_graph,
    star_graph,
    three_colorable,
)
from .search import Witness, feasibility_search
from .systems import (
    EDGE_FORM_AGGREGATED,
    EDGE_FORM_MINORS,
    ComplexVector,
    QuadraticSystem,
    TrilinearSystem,
    color_encode,
    complexify_system,
    lift_coloring,
    pad_system,
    quadratic_residuals_complex,
    threecolor_qf_pipeline,
)
from .threeqf import QfVerdict, build_3qf, qf_via_3qf
from .tqf import (
    split_complex_witness,
    tensor_complexify,
    tqf_residuals,
    tqf_tensor,
    tqf_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
