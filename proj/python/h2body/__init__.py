"""Two point masses on the hyperbolic plane: relative equilibria, stability and simulation."""

from ._core import (
    Error,
    Family,
    Params,
    Point,
    RelativeEquilibrium,
    Verdict,
    build_relative_equilibrium,
    classify_stability,
    hamiltonian,
    hyperbolic_distance,
    integrate,
    intrinsic_stability_bound,
    intrinsic_stability_limit,
    momentum_map,
    momentum_norm,
    partner_distance,
    perturb_and_measure,
    stability_factor,
    threshold,
    threshold_curve,
    threshold_polynomial,
    v_of_u,
)

__all__ = [
    "Error",
    "Family",
    "Params",
    "Point",
    "RelativeEquilibrium",
    "Verdict",
    "build_relative_equilibrium",
    "classify_stability",
    "hamiltonian",
    "hyperbolic_distance",
    "integrate",
    "intrinsic_stability_bound",
    "intrinsic_stability_limit",
    "momentum_map",
    "momentum_norm",
    "partner_distance",
    "perturb_and_measure",
    "stability_factor",
    "threshold",
    "threshold_curve",
    "threshold_polynomial",
    "v_of_u",
]
