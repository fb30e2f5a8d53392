"""Workbench for fast matrix multiplication schemes.

Exact verification against the Brent equations, streamlined SAT encodings,
symmetry-group equivalence and weight simplification, sign lifting from Z2
to Z, parameterized scheme families, and a deduplicating catalog.
"""

from .catalog import Catalog, CatalogRecord, DedupResult, dedup_catalog, weight_histogram
from .core import (
    BrentIndex,
    Mat,
    Ring,
    Scheme,
    Summand,
    VerifyReport,
    brent_indices,
    brent_residual,
    classical_scheme,
    rank_profile,
    reduce_mod2,
    scale_summand,
    verify,
    weight,
)
from .families import (
    FamilyVerifyReport,
    ParamScheme,
    RoundRejected,
    dump_family,
    family_from_scheme,
    introduce_parameters,
    introduce_parameters_sweep,
    load_family,
    merge_reduction,
    read_family,
    substitute_family,
    verify_family_exact,
    write_family,
)
from .io import (
    FormatError,
    canonical_scheme_bytes,
    dump_scheme,
    load_scheme,
    read_scheme,
    transpose_gamma,
    write_scheme,
)
from .poly import Poly, PolyParseError, parse_poly
from .satbridge import (
    CnfFormula,
    StreamlinePlan,
    VarMap,
    apply_streamline,
    brent_equation_count,
    check_assignment,
    decode_model,
    dimacs_text,
    encode_brent,
    extend_assignment,
    parse_model_text,
    random_diag_distribution,
    write_dimacs,
)
from .signlift import (
    DEFAULT_NODE_BUDGET,
    LiftOutcome,
    SearchOutcome,
    SignSystem,
    build_sign_system,
    eliminate_linear,
    enumerate_solutions,
    lift,
    search_signs,
    simplify_sign_system,
)
from .symmetry import (
    GROUP_ORDER_Z2,
    GroupElement,
    InvariantKey,
    apply_group,
    compose,
    equivalent,
    identity_element,
    invariant_key,
    inverse,
    random_group_element,
    simplify_weight,
)

__version__ = "0.1.0"
