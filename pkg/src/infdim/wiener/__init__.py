"""Weighted-Gaussian measure machinery at finite truncation."""

from .weights import GeometricWeightPattern, WeightScheme, build_weights, eq1133_bound
from .sampling import (
    Ball,
    Box,
    FerniqueReport,
    GaussianSampler,
    MCResult,
    ScalingReport,
    WholeSpace,
    fernique_closed_form,
    fernique_probe,
    mc_expectation,
    scaling_check,
)
from .surfaces import Region, SurfaceChart, sigma_k_total, sigma_l_total, surface_density
from .fields import (
    DivergenceReport,
    FieldBoundsReport,
    SeriesField,
    VectorFieldF,
    check_F_bounds,
    divergence_residual,
)
from .green import (
    GreenReport,
    HolmgrenReport,
    adjoint_zeroth_order,
    build_G2,
    change_of_variables,
    g1_apply,
    g2_apply,
    green_residual,
    holmgren_moment_demo,
    lslice_pairing_factor,
    solve_adjoint,
)
from .hermite import HermiteReport, hermite_projection

__all__ = [
    "GeometricWeightPattern",
    "WeightScheme",
    "build_weights",
    "eq1133_bound",
    "GaussianSampler",
    "MCResult",
    "mc_expectation",
    "FerniqueReport",
    "fernique_probe",
    "fernique_closed_form",
    "ScalingReport",
    "scaling_check",
    "Box",
    "Ball",
    "WholeSpace",
    "Region",
    "SurfaceChart",
    "surface_density",
    "sigma_l_total",
    "sigma_k_total",
    "SeriesField",
    "VectorFieldF",
    "DivergenceReport",
    "divergence_residual",
    "FieldBoundsReport",
    "check_F_bounds",
    "GreenReport",
    "green_residual",
    "change_of_variables",
    "adjoint_zeroth_order",
    "g1_apply",
    "g2_apply",
    "build_G2",
    "solve_adjoint",
    "lslice_pairing_factor",
    "HolmgrenReport",
    "holmgren_moment_demo",
    "HermiteReport",
    "hermite_projection",
]
