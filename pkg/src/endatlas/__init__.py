"""endatlas: exact classification of elliptic endoscopic data over finite Galois models."""

from .rootsys import (
    CartanType,
    RootSystem,
    AffineDiagram,
    affine_diagram,
    build_root_system,
    product_root_system,
    subdiagram_components,
)
from .torus import TorusElement
from .weyl import (
    DiagramAut,
    OmegaElement,
    WeylElement,
    enumerate_affine_automorphisms,
    enumerate_weyl,
    find_base_transport,
    omega_group,
    torus_action,
    weyl_membership,
)
from .galois import (
    Cocycle,
    GaloisModel,
    Place,
    build_galois_model,
    enumerate_cocycles,
    places,
)
from .endodata import (
    EndoscopicDatum,
    LanglandsData,
    equivalent,
    equivalent_bruteforce,
    is_elliptic,
    langlands_normalize,
    localize,
    make_datum,
    out_group,
    principal_datum,
)
from .elliptic import (
    ClassificationReport,
    EllipticPair,
    brute_force_inventory,
    classify_elliptic,
    enumerate_pairs,
    pair_equivalent,
    pair_to_datum,
    verify_sigma_structure,
)
from .reduction import (
    InducedModel,
    ReductionPlan,
    equivalence_transfers_under_shapiro,
    finite_order_reduction,
    make_induced_model,
    reduction_preserves_equivalence,
    shapiro_descend,
    shapiro_induce,
)
from .localglobal import (
    check_local_global,
    counterexample_search,
    exhaustive_local_global,
)
from .errors import CapExceeded, EndatlasError, InternalConsistencyError, InvalidInput

__all__ = [
    "AffineDiagram",
    "CapExceeded",
    "CartanType",
    "ClassificationReport",
    "Cocycle",
    "DiagramAut",
    "EllipticPair",
    "EndatlasError",
    "EndoscopicDatum",
    "GaloisModel",
    "InducedModel",
    "InternalConsistencyError",
    "InvalidInput",
    "LanglandsData",
    "OmegaElement",
    "Place",
    "ReductionPlan",
    "RootSystem",
    "TorusElement",
    "WeylElement",
    "affine_diagram",
    "brute_force_inventory",
    "build_galois_model",
    "build_root_system",
    "check_local_global",
    "classify_elliptic",
    "counterexample_search",
    "enumerate_affine_automorphisms",
    "enumerate_cocycles",
    "enumerate_pairs",
    "enumerate_weyl",
    "equivalence_transfers_under_shapiro",
    "equivalent",
    "equivalent_bruteforce",
    "exhaustive_local_global",
    "find_base_transport",
    "finite_order_reduction",
    "is_elliptic",
    "langlands_normalize",
    "localize",
    "make_datum",
    "make_induced_model",
    "omega_group",
    "out_group",
    "pair_equivalent",
    "pair_to_datum",
    "places",
    "principal_datum",
    "product_root_system",
    "reduction_preserves_equivalence",
    "shapiro_descend",
    "shapiro_induce",
    "subdiagram_components",
    "torus_action",
    "verify_sigma_structure",
    "weyl_membership",
]

__version__ = "0.1.0"
