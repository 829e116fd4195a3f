"""Pseudohermitian invariants of pluriharmonic sphere perturbations in C^2
and the CR umbilical locus of real ellipsoids."""

from .ambient import (
    FrameContractions,
    HoloJet4,
    Point4,
    PolyHolo,
    RhoJet,
    assemble_rho_jet,
    contractions,
    frames,
    levi_fefferman,
    on_surface,
)
from .ellipsoid import (
    EllipsoidParams,
    LocusCurve,
    LocusKind,
    SexticForms,
    beltrami_coefficient,
    case43_cubic_root,
    cubic_unique_positive_root,
    gamma_curve,
    gamma_locus,
    p_functional,
    sextic_forms,
    special_locus_b0,
    special_locus_ba,
)
from .invariants import (
    InvariantReport,
    a11_covariant_0,
    a11_covariant_up1_1,
    cartan_q11,
    cartan_q11_oracle,
    christoffel_01,
    christoffel_11,
    r_covariant_11,
    torsion_a11,
    umbilical_functional,
    webster_scalar_curvature,
)
from .tracer import TraceConfig, TracedVariety, scale_to_ellipsoid, seed_points, trace_variety

__version__ = "0.1.0"
