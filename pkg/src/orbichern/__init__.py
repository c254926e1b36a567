"""Exact delocalized Chern character toolkit for finite quotients.

The subpackages cover, bottom up: exact cyclotomic arithmetic
(`exactnum`), finite groups with conjugacy and class fusion (`groups`),
representations and induced/virtual characters (`reps`), equivariant
cochain complexes with cones and heat supertraces (`complexes`), linear
charts and their inertia eigendata (`charts`), truncated multivariate
series with the delocalized Todd and Koszul expansions (`series`),
finite groupoids with bibundle morphisms, embeddings, and inertia
(`groupoids`), the Riemann-Roch style verifiers (`rrg`), and the
command line front end (`cli`).
"""

from .charts import (
    EigenData,
    InertiaComponent,
    LinearChart,
    eigen_decomposition,
    fixed_subspace,
    inertia_data,
)
from .cli import CycParseError, LoadError, Scenario, load_scenario, main, parse_cyclotomic
from .complexes import (
    ChainMap,
    EquivariantComplex,
    cohomology,
    heat_supertrace,
    mapping_cone,
    shift,
    supertrace_class,
)
from .exactnum import Cyclotomic, Rational, cyclotomic_polynomial, euler_phi
from .groupoids import (
    EmbeddingFlags,
    FiniteGroupoid,
    GeneralizedMorphism,
    InertiaGroupoid,
    MoritaComponent,
    PullbackComparison,
    StrictFunctor,
    classify_embedding,
    factorize,
    find_isomorphism,
    inertia,
    inertia_of_morphism,
    morita_decompose_inertia,
)
from .groups import (
    FiniteGroup,
    FusionData,
    GroupEmbedding,
    centralizer,
    conjugacy,
    coset_reps,
    fuse_classes,
    subgroup_embedding,
    subgroups,
)
from .linalg import Matrix
from .reps import (
    Representation,
    VirtualCharacter,
    character,
    direct_sum,
    dual,
    exterior_power,
    induce,
    induced_character_sum,
    induced_matrix,
    inner_product,
    lambda_minus_one,
    restrict,
    restricted_character,
    tensor,
)
from .rrg import (
    CheckReport,
    ClassEntry,
    GeneralScenario,
    IsoSpatialScenario,
    ZeroSectionScenario,
    check_functoriality,
    check_general_degree0,
    check_iso_spatial,
    check_td_pullback,
    check_zero_section,
    content_hash,
    pushforward_characters,
)
from .series import (
    DelocalizedClass,
    GradedSeries,
    NormalModel,
    ZeroSectionReport,
    delocalized_chern,
    exp_nilpotent,
    invert_unit,
    koszul_ch,
    series_mul,
    todd_delocalized,
    zero_section_identity,
)

__all__ = [
    "ChainMap",
    "CheckReport",
    "ClassEntry",
    "CycParseError",
    "Cyclotomic",
    "DelocalizedClass",
    "EigenData",
    "EmbeddingFlags",
    "EquivariantComplex",
    "FiniteGroup",
    "FiniteGroupoid",
    "FusionData",
    "GeneralScenario",
    "GeneralizedMorphism",
    "GradedSeries",
    "GroupEmbedding",
    "InertiaComponent",
    "InertiaGroupoid",
    "IsoSpatialScenario",
    "LinearChart",
    "LoadError",
    "Matrix",
    "MoritaComponent",
    "NormalModel",
    "PullbackComparison",
    "Rational",
    "Representation",
    "Scenario",
    "StrictFunctor",
    "VirtualCharacter",
    "ZeroSectionReport",
    "ZeroSectionScenario",
    "centralizer",
    "character",
    "check_functoriality",
    "check_general_degree0",
    "check_iso_spatial",
    "check_td_pullback",
    "check_zero_section",
    "classify_embedding",
    "cohomology",
    "conjugacy",
    "content_hash",
    "coset_reps",
    "cyclotomic_polynomial",
    "delocalized_chern",
    "direct_sum",
    "dual",
    "eigen_decomposition",
    "euler_phi",
    "exp_nilpotent",
    "exterior_power",
    "factorize",
    "find_isomorphism",
    "fixed_subspace",
    "fuse_classes",
    "heat_supertrace",
    "induce",
    "induced_character_sum",
    "induced_matrix",
    "inertia",
    "inertia_data",
    "inertia_of_morphism",
    "inner_product",
    "invert_unit",
    "koszul_ch",
    "lambda_minus_one",
    "load_scenario",
    "main",
    "mapping_cone",
    "morita_decompose_inertia",
    "parse_cyclotomic",
    "pushforward_characters",
    "restrict",
    "restricted_character",
    "series_mul",
    "shift",
    "subgroup_embedding",
    "subgroups",
    "supertrace_class",
    "tensor",
    "todd_delocalized",
    "zero_section_identity",
]
