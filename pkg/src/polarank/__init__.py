"""p-ranks of oppositeness matrices and bounds on partial spreads and partial ovoids.

Submodules are imported on first use so that thread settings made by the
command line take effect before numpy loads.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    "make_field": "field", "gf": "field", "FieldSpec": "field", "FieldElement": "field",
    "HermitianSpace": "hermitian", "enumerate_generators": "hermitian", "relation_matrices": "hermitian",
    "IncidenceGeometry": "incidence", "load_geometry": "incidence", "load_o2": "incidence",
    "verify_generalized_polygon": "incidence", "distance_relation_matrices": "incidence",
    "verify_scheme_axioms": "scheme", "eigenmatrices_metric": "scheme", "build_scheme": "scheme",
    "idempotent_congruence_check": "scheme", "multiplicity_f_d": "scheme",
    "rank_mod_p": "modrank", "rank_rational": "modrank", "PackedMatrix": "modrank",
    "clique_bound_from_rank": "bounds", "steinberg_lift": "bounds", "theorem1_bound": "bounds",
    "theorem2_bound": "bounds", "baseline_bounds": "bounds", "published_rank_formula": "bounds",
    "Graph": "clique", "greedy_lower_bound": "clique", "max_clique_exact": "clique",
    "max_clique_symmetric": "clique", "verify_clique": "clique",
    "serialize_matrix": "cli", "parse_matrix": "cli",
}
_MODULES = {"field", "hermitian", "incidence", "scheme", "modrank", "bounds", "clique", "cli", "repro"}

__all__ = sorted(_EXPORTS) + sorted(_MODULES)


def __getattr__(name):
    if name in _MODULES:
        return import_module(f".{name}", __name__)
    if name in _EXPORTS:
        return getattr(import_module(f".{_EXPORTS[name]}", __name__), name)
    raise AttributeError(f"module 'polarank' has no attribute {name!r}")
