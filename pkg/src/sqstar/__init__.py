"""Counting semigroup induced from the sums-of-two-squares set.

The ground set is sieved into a rank table; the induced product of two
ranks is the rank of the integer product of their members.  On top of
that sit six monochromatic pattern families, bounded witness searches
with independent verification, and the located-word / polynomial-grid
machinery whose projections realize those patterns.
"""

from .errors import (
    BudgetExhaustedError,
    CorruptCacheError,
    DomainOverlapError,
    EnumerationCapError,
    MalformedWitnessError,
    NotMemberError,
    OrderViolationError,
    OutOfDomainError,
    OutOfRangeError,
    PredicateMismatchError,
    ResourceBudgetError,
    SchemaViolationError,
    SqstarError,
)
from .ground import (
    SIGMA,
    GroundPredicate,
    GroundTable,
    build_table,
    is_member,
    load_cache,
    save_cache,
)
from .semigroup import (
    LawReport,
    eval_monomial,
    finite_products,
    power,
    star,
    star_many,
    verify_laws,
)
from .colorings import (
    Coloring,
    enumerate_all,
    from_file,
    from_provenance,
    periodic_coloring,
    random_coloring,
    to_file,
)
from .patterns import (
    Brauer,
    Deuber,
    FpF,
    GeoArithmetic,
    MillikenTaylor,
    PhiLinear,
    PhiProduct,
    PhiProjection,
    PhiStarFold,
    PhiSum,
    PolyVdW,
    Witness,
    check_monochromatic,
    gen_brauer,
    gen_deuber,
    gen_fpf,
    gen_geo_arithmetic,
    gen_milliken_taylor,
    gen_poly_vdw,
    generate_configuration,
    load_witness,
    mt_configuration,
    save_witness,
)
from .search import SearchBounds, SearchReport, find_witness, threshold, verify_witness
from .hjlab import (
    HjReport,
    LocatedVariableWord,
    LocatedWord,
    PhjPoint,
    PhjReport,
    concat,
    constant_point,
    grid_points,
    h_project,
    hj_search,
    hj_threshold,
    located_word,
    m_project,
    phj_search,
    phj_substitute,
    phj_threshold,
    point_coloring,
    substitute,
    word_coloring,
    words_over,
)

__version__ = "0.1.0"
