"""Absorption inverse of graph Laplacians.

For a strongly connected weighted digraph with Laplacian ``L`` and positive
per-vertex absorption rates ``d``, the absorption inverse ``Ld`` is the
unique generalized inverse of ``L`` with range and null space fixed by ``d``.
``Ld[i, j]`` measures how much more (or less) time a walker started at ``j``
spends in ``i`` than its long-run share, before it is absorbed.

Quick start::

    >>> import numpy as np
    >>> from absorption_inverse import path_graph, laplacian, absorption_inverse
    >>> g = path_graph(3, d=[1.0, 2.0, 3.0])
    >>> Ld = absorption_inverse(laplacian(g)).Ld
    >>> round(float(Ld[0, 1]), 12)   # (d3^2 - d1 d3 - d1 d2) / (sum d)^2
    0.111111111111
"""

from .errors import (
    AbsorptionInverseError, DegeneratePartitionWarning, NoConvergence, NonPositiveWarning,
    NotBalanced, NumericalError, ParseError, PreconditionError, RouteDisagreement,
    SingularMatrix, SizeLimit, ValidationError,
)
from .graph import (
    AbsorptionGraph, LaplacianBundle, absorption_scaled_graph, dumps_graph, graph_from_dict,
    graph_to_dict, is_balanced, is_strongly_connected, laplacian, load_graph, read_graph,
    stationary_basis, write_graph,
)
from .numerics import EigenPair, invert, lu_solve, spectral_radius, symmetric_leading_eigpair
from .inverses import (
    ROUTES, InverseSet, absorption_inverse, absorption_inverse_many, bottleneck_matrix,
    check_equivalences, defining_residuals, fundamental_matrix_absorbing,
    fundamental_matrix_regular, group_inverse, laurent_series_eval, pseudoinverse,
    residence_deviation_check, verify_resolvent_identities,
)
from .forests import (
    ForestExpansion, ForestFamily, InForest, absorption_inverse_forest_oracle,
    enumerate_in_forests, forest_matrices, parametric_forest_identity_check,
    spanning_tree_weights,
)
from .structure import (
    CentralityVector, DistanceMatrix, Partition, c_metric, distance_matrix,
    four_point_violations, locate_partition_changes, pagerank, partition, partition_sweep,
    quasi_stationary, verify_directed_metric,
)
from .motifs import MotifSpec, closed_form_ld, motif_graph
from .generators import (
    bridge_graph, complete_graph, cycle_graph, directed_cycle, path_graph,
    random_balanced, random_strongly_connected, random_undirected, star_graph,
)

__version__ = "0.1.0"
