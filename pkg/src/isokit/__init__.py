"""Exact computations for finite-group simplicial complexes with
isovariant structure: linking simplices, isotropy strata, isovariant
cell decompositions, and fixed-point invariants with removability
verdicts."""

from .errors import (
    GroupTooLarge,
    InconsistentLabels,
    IsokitError,
    MissingStratum,
    NonAbelianPi,
    NonIntegral,
    NotEquivariant,
    NotEquivariantTriangulation,
    NotIsovariant,
    NotRegular,
    NotSelfMap,
    NotSimplicial,
    NotStrictChain,
    NotWeaklyDecreasing,
    ZeroChain,
)
from .group import (
    FiniteGroup,
    MarksTable,
    chain_name,
    class_names,
    class_rep_of,
    enumerate_chains,
    enumerate_subgroups,
    is_subconjugate,
    parse_subgroup_token,
    subconjugacy_total_order,
    subgroup_closure,
    subgroup_conjugacy_classes,
    table_of_marks,
    validate_chain,
)
from .snf import cokernel_invariants, smith_normal_form
from .gcomplex import (
    Filtration,
    GComplex,
    HypothesisReport,
    Stratum,
    Subdivision,
    barycentric_subdivision,
    check_hypotheses,
    class_fixed_union,
    exact_stratum,
    filtration,
    fixed_subcomplex,
    is_treelike,
    make_regular,
    orbit_complex,
    present_classes,
    stratification_dot,
    stratum_closure,
)
from .linking import (
    BoundaryDecomposition,
    Cell,
    CellReport,
    FundamentalDomain,
    IllmanSimplex,
    IsovariantCellStructure,
    LinkingSimplex,
    PhiMap,
    boundary,
    build_linking,
    collapse_map,
    decompose,
    fundamental_domain,
    illman_complex,
    phi_vertex_map,
    validate_cells,
)
from .gmap import (
    GMap,
    LinkGraph,
    Pi0Report,
    StratumMaps,
    compose,
    identity_map,
    is_equivariant,
    is_isovariant,
    is_simplicial,
    link_graph,
    pi0_link_check,
    stratum_maps,
    subdivide_map,
)
from .fixpoint import (
    BurnsideElement,
    PiData,
    ReidemeisterTrace,
    TwistedConjugacySetup,
    burnside_lefschetz,
    derive_pidata,
    forced_fixed_points,
    has_fixed_simplex,
    is_fixed_point_free,
    lefschetz,
    lefschetz_fixed_sets,
    marks_vector,
    reidemeister_trace,
    removal_verdict,
    twisted_classes,
)
from .cubelim import (
    Cube,
    CubeMap,
    check_hypothesis,
    complete_punctured,
    corner_map,
    cube_map_corner,
    factorize_limit,
    limit,
    limit_map,
    random_cube_map,
)

__version__ = "0.1.0"
