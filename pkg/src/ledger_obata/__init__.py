"""Invariant Riemannian metrics on F^m/diag(F): classification and verification.

The package classifies a metric (given by its coupling matrix T or its
quadratic form a) as naturally reductive or not, decides the geodesic-orbit
property, decomposes reducible metrics into irreducible factors to read off
the full connected isometry group, and cross-checks every verdict with a
brute-force numeric oracle over a concrete compact simple Lie algebra.
"""

from .classify import (
    GoCertificate,
    GoResult,
    GoVerdict,
    NatRedCase,
    NatRedResult,
    SuperAdaptedFamily,
    classify_go,
    classify_natred,
    go_family,
    go_report,
    natred_from_dict,
    natred_report,
    solve_invariant_form,
    super_adapted_family,
)
from .coeff import (
    AdaptedSystem,
    cluster_indices,
    diamond,
    is_adapted,
    is_self_saturated,
    is_super_adapted,
    project_zero_sum,
    self_saturated_basis,
    subalgebra_partition,
)
from .errors import (
    ClosureError,
    InputError,
    InvalidMetricError,
    LedgerObataError,
    ParameterError,
    SelfSaturationError,
    StructureConstantError,
)
from .liealg import (
    StructureConstants,
    default_backend,
    from_entries,
    killing_gram,
    load_structure_constants,
    product_bracket,
    product_inner,
    product_norm,
    so3,
    split_diagonal,
)
from .metrics import (
    EigenData,
    MetricForm,
    MetricT,
    T_to_form,
    eigendecompose,
    form_to_T,
    metric_from_system,
    standard_metric,
    zero_sum_basis,
)
from .oracle import (
    OracleReport,
    assess_geodesic_orbit,
    brackets_property_check,
    certificate_shift,
    go_oracle,
    go_sample_residual,
    natred_certificate_check,
)
from .reduce import (
    Decomposition,
    SplitOutcome,
    SplitRecord,
    check_split,
    decompose,
    decompose_report,
    factor_metric,
    go_manifold,
    holonomy_generators,
    invariance_residual,
    is_reducible,
    isometry_group_exponent,
    splitting_subspaces,
)
from .serialize import (
    dumps_numeric,
    metric_from_dict,
    metric_to_dict,
    read_metric,
    write_metric,
)
from .trees import PartitionPair, enumerate_partition_pairs

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
