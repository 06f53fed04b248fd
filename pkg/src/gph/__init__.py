"""Directed multigraphs: morphism classes, factorizations and zeta spectra."""
from .errors import (
    BudgetExhausted,
    GphError,
    InternalConsistencyError,
    InvalidGraph,
    InvalidMorphism,
    MismatchError,
    PreconditionError,
    ReplayMismatch,
)
from .graph import (
    Arc,
    Cospan,
    Graph,
    GraphMorphism,
    Span,
    VoltageAssignment,
    bouquet,
    build_covering,
    compose,
    coproduct,
    core,
    cycle_graph,
    cycle_shift,
    cycle_wrap,
    fiber_product,
    identity,
    path_graph,
    pushout,
    standard_graph,
    strongly_connected_components,
    validate,
)
from .poly import IntegerPolynomial, TruncatedSeries
from .cycles import BasedCycle, enumerate_cycles
from .zeta import (
    PrimeCensus,
    char_poly,
    check_acyclic_preserves_zeta,
    check_covering_divides,
    cycle_counts,
    enumerate_primes,
    euler_product,
    is_almost_isospectral,
    is_isospectral,
    prime_census,
    reversed_char_poly,
    zeta_series,
)
from .classify import (
    Verdict,
    is_acyclic,
    is_acyclic_bounded,
    is_acyclic_fibration,
    is_covering,
    is_folding,
    is_injecting,
    is_rooted_forest,
    is_rooted_tree,
    is_surjecting,
    is_whiskering,
)
from .factorization import (
    FactorizationResult,
    LiftSquare,
    brute_force_filler,
    count_fillers,
    factor_cofib_acyclicfib,
    factor_fold_inject,
    factor_whisker_surject,
    filler_against_surjecting,
    find_injectivity_violation,
)

__version__ = "0.1.0"
