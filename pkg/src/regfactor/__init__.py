"""Graph factors and subgraph statistics of dense random regular graphs.

Submodules:

* ``graphs``     -- graph/multigraph types, canonical forms, automorphism
                    and subgraph counting, overlay classification
* ``ensemble``   -- exact enumeration of G(n, d) and the double-edge-swap
                    sampler with complement transfer
* ``factors``    -- edge variables, graph factors, trace statistics and
                    closed-walk type tables
* ``algebra``    -- the coefficient ring, factor-expression reduction and
                    the exact expansion of subgraph counts
* ``stats``      -- moment accumulation, variance predictions, CLT
                    diagnostics, asymptotic counts
* ``proofcheck`` -- numeric batteries for the analytic inequalities
* ``cli``        -- the ``regfactor`` command-line driver
"""

from .graphs import (
    CanonicalShape,
    Graph,
    Multigraph,
    OverlayReport,
    aut_count,
    canonicalize,
    count_subgraphs,
    cycle_graph,
    complete_graph,
    overlay,
    overlay_classify,
    path_graph,
    shape_from_name,
    star_graph,
)
from .ensemble import (
    EnsembleSpec,
    complement_spec,
    enumerate_regular,
    sample_regular,
    sample_stream,
)
from .factors import (
    EdgeField,
    FactorValue,
    WalkTypeTable,
    gamma,
    normalization_constants,
    trace_stat,
    walk_types,
)
from .algebra import (
    FactorExpr,
    evaluate,
    expand_subgraph_count,
    gamma_expr,
    power_reduce,
    reduce_degree_one,
    reduce_disconnected,
    reduce_full,
)
from .stats import (
    MomentAccumulator,
    VariancePrediction,
    estimate_moments,
    mw_count_estimate,
    normality_report,
    predicted_variance,
)
from .proofcheck import InequalityCase, check_inequality, run_battery

__version__ = "0.1.0"
