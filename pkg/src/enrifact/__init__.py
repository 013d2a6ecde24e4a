"""Finite enriched categories, orthogonality, and factorization systems.

Everything is table-driven and exhaustively checked: categories are
validated composition tables, enrichments are validated hom-object
tables, and every verdict (orthogonality, limits, factorization systems)
is decided by complete search with a witness or counterexample.  All
verdicts are internal to the supplied finite category.
"""

__version__ = "0.1.0"

from .errors import EngineError
from .fincat import (
    Cone,
    Diagram,
    FinCategory,
    Square,
    Verdict,
    build_category,
    classify_morphism,
    is_pullback_square,
    kernel_pair,
    kernel_pair_legs,
    limit_cone,
    validate_category,
)
from .monoidal import (
    MonoidalClosedStructure,
    QuantaleSpec,
    apply_hom,
    chain_quantale,
    quantale_to_V,
    validate_monoidal_closed,
    validate_quantale,
)
from .enriched import (
    SetEnriched,
    TableEnriched,
    TensorData,
    build_finset,
    check_cotensor_data,
    check_tensor_data,
    cotensor_of_morphism,
    derive_cotensor_data,
    derive_tensor_data,
    has_all_v_kernel_pairs,
    hom_action,
    is_v_limit,
    tensor_of_morphism,
    underlying,
    v_classify,
    v_intersection,
    validate_enriched,
)
from .ortho import (
    MorphismClass,
    is_orthogonal,
    is_prefactorization_system,
    is_v_orthogonal,
    left_class,
    orthogonal_bool,
    prefactorization_closure,
    right_class,
)
from .factor import (
    FWCReport,
    FactorizationSystem,
    canonical_systems,
    check_fwc,
    check_intersection_hypotheses,
    factorize_via_intersection,
    is_factorization_system,
    resolve_class,
    strong_epi_class,
    strong_mono_class,
    v_epi_class,
    v_mono_class,
)
from .documents import (
    Document,
    corpus,
    enriched_chain,
    extras,
    generate_corpus,
    graded_diamond,
    load_entity,
    make_document,
    opposite_document,
    parse,
    poset_category,
    self_enrichment,
    serialize,
)
from .laws import LAW_IDS, LawResult, run_laws
from .cli import main, run_command
